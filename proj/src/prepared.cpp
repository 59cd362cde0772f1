#include "mixmetric/prepared.hpp"

#include <cmath>

#include "mixmetric/error.hpp"

namespace mixmetric {

namespace {

// Codes handed to tokens seen only outside the table; never equal to a row's code.
constexpr double kUnseenToken = -1.0;

}  // namespace

PreparedTable::PreparedTable(const FittedMetric& metric, const Dataset& data)
    : metric_(std::make_shared<const FittedMetric>(metric)), rows_(data.rows()) {
  validate(*metric_);
  if (data.schema.attributes != metric_->schema.attributes)
    throw DataError("dataset does not conform to the model's schema");
  const auto& features = metric_->features;
  kernels_.reserve(features.size());
  columns_.resize(features.size());
  dictionaries_.resize(features.size());
  schema_index_ = features;
  for (std::size_t f = 0; f < features.size(); ++f) {
    kernels_.emplace_back(metric_->feature_spec(f), metric_->models[f]);
    const auto& kernel = kernels_.back();
    const auto& column = data.columns[features[f]];
    auto& coords = columns_[f];
    coords.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const Value& v = column[r];
      if (kernel.interns_tokens() && v.is_category()) {
        auto [it, _] = dictionaries_[f].try_emplace(v.as_category(), static_cast<double>(dictionaries_[f].size()));
        coords[r] = it->second;
      } else {
        coords[r] = kernel.coordinate(v);
      }
    }
  }
}

std::vector<double> PreparedTable::prepare(const Record& record) const {
  if (record.size() != metric_->schema.attributes.size())
    throw DataError("record has " + std::to_string(record.size()) + " values, schema has " +
                    std::to_string(metric_->schema.attributes.size()));
  std::vector<double> out(kernels_.size());
  for (std::size_t f = 0; f < kernels_.size(); ++f) {
    const Value& v = record[schema_index_[f]];
    if (kernels_[f].interns_tokens() && v.is_category()) {
      auto it = dictionaries_[f].find(v.as_category());
      out[f] = it == dictionaries_[f].end() ? kUnseenToken : it->second;
    } else {
      out[f] = kernels_[f].coordinate(v);
    }
  }
  return out;
}

bool PreparedTable::try_similarity(std::size_t i, std::size_t j, double& out) const {
  detail::SimilarityAccumulator acc;
  for (std::size_t f = 0; f < kernels_.size(); ++f) {
    const double a = columns_[f][i];
    const double b = columns_[f][j];
    if (std::isnan(a) || std::isnan(b)) continue;
    acc.add(kernels_[f].weight(), kernels_[f].distance(a, b));
  }
  if (acc.compared() == 0) return false;
  out = acc.similarity();
  return true;
}

bool PreparedTable::try_similarity_to(std::span<const double> coordinates, std::size_t row, double& out) const {
  detail::SimilarityAccumulator acc;
  for (std::size_t f = 0; f < kernels_.size(); ++f) {
    const double a = coordinates[f];
    const double b = columns_[f][row];
    if (std::isnan(a) || std::isnan(b)) continue;
    acc.add(kernels_[f].weight(), kernels_[f].distance(a, b));
  }
  if (acc.compared() == 0) return false;
  out = acc.similarity();
  return true;
}

double PreparedTable::similarity(std::size_t i, std::size_t j) const {
  double s = 0.0;
  if (!try_similarity(i, j, s))
    throw NoComparableAttributes("no comparable attributes between rows " + std::to_string(i) + " and " +
                                 std::to_string(j));
  return s;
}

double PreparedTable::similarity_to(std::span<const double> coordinates, std::size_t row) const {
  double s = 0.0;
  if (!try_similarity_to(coordinates, row, s))
    throw NoComparableAttributes("no comparable attributes with row " + std::to_string(row));
  return s;
}

}  // namespace mixmetric
