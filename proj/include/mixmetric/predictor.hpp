#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mixmetric/metric.hpp"
#include "mixmetric/prepared.hpp"
#include "mixmetric/schema.hpp"

namespace mixmetric {

struct Neighbor {
  std::size_t row = 0;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct PredictionResult {
  std::string label;
  std::vector<std::pair<std::string, double>> class_scores;  // sorted by class
  std::vector<Neighbor> neighbors;                           // best first

  friend bool operator==(const PredictionResult&, const PredictionResult&) = default;
};

// Similarity-weighted k-nearest-neighbour vote over continuous per-column
// match scores.
class TrainedPredictor {
 public:
  // Uses an already fitted metric; rows with a missing target are dropped.
  TrainedPredictor(FittedMetric metric, const Dataset& data);

  const FittedMetric& metric() const { return metric_; }
  const Dataset& training() const { return training_; }
  const std::vector<std::string>& classes() const { return classes_; }
  // Class index of each training row.
  const std::vector<std::size_t>& row_classes() const { return row_class_; }

  PredictionResult predict(const Record& query, std::size_t k) const;

 private:
  FittedMetric metric_;
  Dataset training_;
  std::vector<std::string> classes_;
  std::vector<std::size_t> row_class_;
  std::unique_ptr<PreparedTable> table_;
};

// Fits the metric on the rows that carry a target, then keeps those rows.
TrainedPredictor train(const Dataset& data);

// Leave-one-out accuracy; each fold refits the models on the other n-1 rows.
double loo_accuracy(const Dataset& data, std::size_t k, std::size_t threads = 1);

}  // namespace mixmetric
