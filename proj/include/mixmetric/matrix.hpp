#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixmetric/metric.hpp"
#include "mixmetric/schema.hpp"

namespace mixmetric {

// Strict upper triangle of a symmetric n x n distance matrix, row-major.
struct CondensedMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // n(n-1)/2 entries

  double at(std::size_t i, std::size_t j) const;

  friend bool operator==(const CondensedMatrix&, const CondensedMatrix&) = default;
};

constexpr std::size_t condensed_size(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// i*n - i(i+1)/2 + (j - i - 1); requires i < j < n.
std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j);

// 0 selects the number of available cores.
std::size_t resolve_threads(std::size_t requested);

// All pairwise record distances. The result does not depend on `threads`.
CondensedMatrix pairwise_matrix(const FittedMetric& metric, const Dataset& data,
                                std::size_t threads = 0);

// Text: "n=<n>" then one %.17g value per line.
void write_matrix_text(std::ostream& out, const CondensedMatrix& matrix);
CondensedMatrix read_matrix_text(std::istream& in);

// Binary: "MIXMAT01", n as little-endian uint64, then little-endian float64 values.
inline constexpr char kMatrixMagic[8] = {'M', 'I', 'X', 'M', 'A', 'T', '0', '1'};
void write_matrix_binary(std::ostream& out, const CondensedMatrix& matrix);
CondensedMatrix read_matrix_binary(std::istream& in);

}  // namespace mixmetric
