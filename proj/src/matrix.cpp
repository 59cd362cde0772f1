#include "mixmetric/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <exception>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>

#include "mixmetric/error.hpp"
#include "mixmetric/prepared.hpp"

namespace mixmetric {

double CondensedMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  return values[condensed_index(n, i, j)];
}

std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= j || j >= n)
    throw Error("condensed index requires i < j < n (got i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                ", n=" + std::to_string(n) + ")");
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

CondensedMatrix pairwise_matrix(const FittedMetric& metric, const Dataset& data, std::size_t threads) {
  const std::size_t n = data.rows();
  if (n < 2) throw DataError("pairwise matrix needs at least 2 rows");
  const PreparedTable table(metric, data);

  CondensedMatrix out;
  out.n = n;
  out.values.resize(condensed_size(n));

  // Rows are claimed in small blocks; each row owns a disjoint output range,
  // so scheduling cannot change any value.
  constexpr std::size_t kBlock = 16;
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::min(resolve_threads(threads), (n + kBlock - 1) / kBlock);
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> failures(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto rows = [&](std::size_t worker) {
    for (;;) {
      const std::size_t begin = next.fetch_add(kBlock);
      if (begin >= n - 1) return;
      const std::size_t end = std::min(begin + kBlock, n - 1);
      for (std::size_t i = begin; i < end; ++i) {
        double* row = out.values.data() + condensed_index(n, i, i + 1);
        for (std::size_t j = i + 1; j < n; ++j) {
          double s;
          if (table.try_similarity(i, j, s)) {
            row[j - i - 1] = 1.0 - s;
          } else {
            auto& f = failures[worker];
            if (!f || std::make_pair(i, j) < *f) f = std::make_pair(i, j);
            row[j - i - 1] = 0.0;
          }
        }
      }
    }
  };

  auto work = [&](std::size_t worker) {
    try {
      rows(worker);
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };

  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::optional<std::pair<std::size_t, std::size_t>> first;
  for (const auto& f : failures)
    if (f && (!first || *f < *first)) first = f;
  if (first)
    throw NoComparableAttributes("no comparable attributes between rows " + std::to_string(first->first + 1) +
                                 " and " + std::to_string(first->second + 1));
  return out;
}

void write_matrix_text(std::ostream& out, const CondensedMatrix& matrix) {
  out << "n=" << matrix.n << '\n';
  char buf[32];
  for (double v : matrix.values) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out.write(buf, len);
  }
}

CondensedMatrix read_matrix_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("n="))
    throw DataError("matrix text: missing 'n=' header");
  CondensedMatrix m;
  try {
    m.n = std::stoull(line.substr(2));
  } catch (const std::exception&) {
    throw DataError("matrix text: bad header '" + line + "'");
  }
  m.values.reserve(condensed_size(m.n));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    m.values.push_back(std::strtod(line.c_str(), nullptr));
  }
  if (m.values.size() != condensed_size(m.n))
    throw DataError("matrix text: expected " + std::to_string(condensed_size(m.n)) + " values, found " +
                    std::to_string(m.values.size()));
  return m;
}

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  auto bits = std::bit_cast<std::uint64_t>(value);
  unsigned char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("matrix binary: truncated stream");
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_matrix_binary(std::ostream& out, const CondensedMatrix& matrix) {
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  write_le<std::uint64_t>(out, matrix.n);
  for (double v : matrix.values) write_le<double>(out, v);
}

CondensedMatrix read_matrix_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMatrixMagic, 8) != 0)
    throw DataError("matrix binary: bad magic");
  CondensedMatrix m;
  m.n = read_le<std::uint64_t>(in);
  m.values.resize(condensed_size(m.n));
  for (double& v : m.values) v = read_le<double>(in);
  return m;
}

}  // namespace mixmetric
