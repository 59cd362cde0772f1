#include "mixmetric/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mixmetric/error.hpp"

namespace mixmetric {

namespace {
constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
}  // namespace

double erf(double x) { return std::erf(x); }

double std_normal_cdf(double z) { return 0.5 * (1.0 + erf(z * kInvSqrt2)); }

double GaussianModel::erf_coordinate(double x) const {
  return erf((x - mu) / sigma * kInvSqrt2);
}

double GaussianModel::cdf(double x) const {
  if (degenerate) return x < mu ? 0.0 : 1.0;
  return std_normal_cdf((x - mu) / sigma);
}

GaussianModel fit_gaussian(std::span<const double> samples) {
  if (samples.empty()) throw ModelError("no samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  GaussianModel model;
  model.mu = mean;
  model.sigma = 0.0;
  const bool constant =
      std::all_of(samples.begin(), samples.end(), [&](double x) { return x == samples.front(); });
  if (samples.size() > 1 && !constant) {
    // two-pass sum of squared deviations
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    model.sigma = std::sqrt(ss / (n - 1.0));
  }
  if (constant) model.mu = samples.front();
  model.degenerate = model.sigma == 0.0;
  return model;
}

std::size_t EmpiricalCdfModel::count_le(double x) const {
  return static_cast<std::size_t>(std::upper_bound(samples.begin(), samples.end(), x) - samples.begin());
}

double EmpiricalCdfModel::cdf(double x) const {
  return static_cast<double>(count_le(x)) / static_cast<double>(samples.size());
}

EmpiricalCdfModel fit_empirical(std::span<const double> samples) {
  if (samples.empty()) throw ModelError("no samples");
  EmpiricalCdfModel model;
  model.samples.assign(samples.begin(), samples.end());
  std::sort(model.samples.begin(), model.samples.end());
  return model;
}

double empirical_cdf(const EmpiricalCdfModel& model, double x) { return model.cdf(x); }

std::size_t OrdinalCdfModel::index_of(std::string_view level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) throw ModelError("unknown level '" + std::string(level) + "'");
  return static_cast<std::size_t>(it - levels.begin());
}

OrdinalCdfModel fit_ordinal(std::span<const std::string> column, std::span<const std::string> levels) {
  if (column.empty()) throw ModelError("no samples");
  OrdinalCdfModel model;
  model.levels.assign(levels.begin(), levels.end());
  std::vector<std::size_t> counts(levels.size(), 0);
  for (const auto& token : column) ++counts[model.index_of(token)];

  const double n = static_cast<double>(column.size());
  model.pmf.resize(levels.size());
  model.cdf.resize(levels.size());
  std::size_t cumulative = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    cumulative += counts[k];
    model.pmf[k] = static_cast<double>(counts[k]) / n;
    model.cdf[k] = static_cast<double>(cumulative) / n;
  }
  return model;
}

RangeModel fit_range(std::span<const double> samples) {
  if (samples.empty()) throw ModelError("no samples");
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return RangeModel{*lo, *hi};
}

}  // namespace mixmetric
