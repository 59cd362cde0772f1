#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mixmetric/metric.hpp"
#include "mixmetric/schema.hpp"

namespace mixmetric {

// Dataset rows mapped once to per-attribute kernel coordinates, so that a
// pairwise similarity costs a handful of subtractions per attribute. Every
// similarity computed here is bit-identical to record_similarity on the
// corresponding records.
class PreparedTable {
 public:
  PreparedTable(const FittedMetric& metric, const Dataset& data);

  std::size_t rows() const { return rows_; }
  std::size_t features() const { return kernels_.size(); }

  // Coordinates of an outside record (schema order). Category tokens the
  // table has never seen map to a code no row carries.
  std::vector<double> prepare(const Record& record) const;

  // Throws NoComparableAttributes if rows i and j share no present attribute.
  double similarity(std::size_t i, std::size_t j) const;
  double similarity_to(std::span<const double> coordinates, std::size_t row) const;

  // Same as above but reports "nothing comparable" by returning false.
  bool try_similarity(std::size_t i, std::size_t j, double& out) const;
  bool try_similarity_to(std::span<const double> coordinates, std::size_t row, double& out) const;

 private:
  std::shared_ptr<const FittedMetric> metric_;  // kernels point into this copy
  std::vector<detail::AttributeKernel> kernels_;
  std::vector<std::vector<double>> columns_;  // per feature, one coordinate per row
  std::vector<std::unordered_map<std::string, double>> dictionaries_;
  std::vector<std::size_t> schema_index_;
  std::size_t rows_ = 0;
};

}  // namespace mixmetric
