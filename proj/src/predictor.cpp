#include "mixmetric/predictor.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "mixmetric/error.hpp"
#include "mixmetric/matrix.hpp"

namespace mixmetric {

namespace {

std::size_t require_target(const Schema& schema) {
  auto t = schema.target_index();
  if (!t) throw SchemaError("prediction needs a schema with a target attribute");
  return *t;
}

std::vector<std::size_t> rows_with_target(const Dataset& data, std::size_t target) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < data.rows(); ++r)
    if (!data.columns[target][r].is_missing()) rows.push_back(r);
  return rows;
}

}  // namespace

TrainedPredictor::TrainedPredictor(FittedMetric metric, const Dataset& data) : metric_(std::move(metric)) {
  validate(metric_);
  const std::size_t target = require_target(metric_.schema);
  validate(data);
  const auto rows = rows_with_target(data, target);
  if (rows.empty()) throw DataError("no training rows with a non-missing target");
  training_ = rows.size() == data.rows() ? data : select_rows(data, rows);

  const auto& labels = training_.columns[target];
  for (const Value& v : labels) classes_.push_back(v.as_category());
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  row_class_.reserve(labels.size());
  for (const Value& v : labels)
    row_class_.push_back(static_cast<std::size_t>(
        std::lower_bound(classes_.begin(), classes_.end(), v.as_category()) - classes_.begin()));

  table_ = std::make_unique<PreparedTable>(metric_, training_);
}

PredictionResult TrainedPredictor::predict(const Record& query, std::size_t k) const {
  if (k == 0) throw Error("k must be at least 1");
  const auto coords = table_->prepare(query);

  std::vector<Neighbor> candidates;
  candidates.reserve(table_->rows());
  for (std::size_t t = 0; t < table_->rows(); ++t) {
    double s;
    if (table_->try_similarity_to(coords, t, s)) candidates.push_back({t, s});
  }
  if (candidates.empty()) throw NoComparableAttributes("no comparable attributes against any training row");

  const std::size_t m = std::min(k, candidates.size());
  auto better = [](const Neighbor& a, const Neighbor& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.row < b.row;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m), candidates.end(),
                    better);
  candidates.resize(m);

  // Votes are summed in ascending row order.
  std::vector<Neighbor> by_row = candidates;
  std::sort(by_row.begin(), by_row.end(), [](const Neighbor& a, const Neighbor& b) { return a.row < b.row; });
  std::vector<double> scores(classes_.size(), 0.0);
  for (const auto& nb : by_row) scores[row_class_[nb.row]] += nb.similarity;

  PredictionResult result;
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  result.label = classes_[best];
  result.class_scores.reserve(classes_.size());
  for (std::size_t c = 0; c < classes_.size(); ++c) result.class_scores.emplace_back(classes_[c], scores[c]);
  result.neighbors = std::move(candidates);
  return result;
}

TrainedPredictor train(const Dataset& data) {
  validate(data);
  const std::size_t target = require_target(data.schema);
  const auto rows = rows_with_target(data, target);
  if (rows.empty()) throw DataError("no training rows with a non-missing target");
  Dataset usable = rows.size() == data.rows() ? data : select_rows(data, rows);
  FittedMetric metric = fit_metric(usable);
  return TrainedPredictor(std::move(metric), usable);
}

double loo_accuracy(const Dataset& data, std::size_t k, std::size_t threads) {
  validate(data);
  const std::size_t target = require_target(data.schema);
  const std::size_t n = data.rows();
  if (n < 2) throw DataError("leave-one-out needs at least 2 rows");
  for (std::size_t r = 0; r < n; ++r)
    if (data.columns[target][r].is_missing())
      throw DataError("row " + std::to_string(r + 1) + ": target is missing");

  std::vector<char> correct(n, 0);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    std::vector<std::size_t> others(n - 1);
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        std::size_t o = 0;
        for (std::size_t r = 0; r < n; ++r)
          if (r != i) others[o++] = r;
        const auto predictor = train(select_rows(data, others));
        const auto result = predictor.predict(data.row(i), k);
        correct[i] = result.label == data.columns[target][i].as_category();
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(Error("leave-one-out fold for row " + std::to_string(i + 1) + ": " +
                                                  e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min(resolve_threads(threads), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  const auto hits = std::accumulate(correct.begin(), correct.end(), std::size_t{0});
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace mixmetric
