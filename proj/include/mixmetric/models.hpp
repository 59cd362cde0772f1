#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixmetric {

// Gauss error function; absolute error below 1e-12 for all finite x.
double erf(double x);

// Standard normal CDF, (1 + erf(z / sqrt(2))) / 2.
double std_normal_cdf(double z);

struct GaussianModel {
  double mu = 0.0;
  double sigma = 0.0;
  bool degenerate = true;  // sigma == 0

  // erf((x - mu) / (sigma * sqrt(2))): the per-value term whose half
  // difference is the Gaussian probability distance. Requires !degenerate.
  double erf_coordinate(double x) const;
  double cdf(double x) const;

  friend bool operator==(const GaussianModel&, const GaussianModel&) = default;
};

// Sample mean and (n-1) standard deviation; sigma is 0 for n == 1 or
// constant input.
GaussianModel fit_gaussian(std::span<const double> samples);

struct EmpiricalCdfModel {
  std::vector<double> samples;  // sorted ascending

  std::size_t size() const { return samples.size(); }
  // Number of samples <= x.
  std::size_t count_le(double x) const;
  // (#samples <= x) / n
  double cdf(double x) const;

  friend bool operator==(const EmpiricalCdfModel&, const EmpiricalCdfModel&) = default;
};

EmpiricalCdfModel fit_empirical(std::span<const double> samples);
double empirical_cdf(const EmpiricalCdfModel& model, double x);

struct OrdinalCdfModel {
  std::vector<std::string> levels;
  std::vector<double> pmf;
  std::vector<double> cdf;

  std::size_t index_of(std::string_view level) const;  // throws on unknown level

  friend bool operator==(const OrdinalCdfModel&, const OrdinalCdfModel&) = default;
};

// Relative frequencies of `column` over `levels`; unseen levels get zero mass.
OrdinalCdfModel fit_ordinal(std::span<const std::string> column,
                            std::span<const std::string> levels);

struct RangeModel {
  double min = 0.0;
  double max = 0.0;

  double span() const { return max - min; }

  friend bool operator==(const RangeModel&, const RangeModel&) = default;
};

RangeModel fit_range(std::span<const double> samples);

}  // namespace mixmetric
