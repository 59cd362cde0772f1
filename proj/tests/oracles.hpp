#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's numeric code paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

// erf in long double: Maclaurin series below 3, erfc continued fraction above.
inline long double erf_reference(long double x) {
  const long double ax = std::fabs(x);
  long double result;
  if (ax < 3.0L) {
    long double term = ax;  // x^(2n+1) (-1)^n / n!
    long double sum = ax;
    for (int n = 1; n < 200; ++n) {
      term *= -ax * ax / n;
      const long double add = term / (2 * n + 1);
      sum += add;
      if (std::fabs(add) < 1e-30L) break;
    }
    result = 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
  } else {
    long double t = ax;
    for (int k = 400; k >= 1; --k) t = ax + (k / 2.0L) / t;
    const long double erfc = std::exp(-ax * ax) / (std::sqrt(std::numbers::pi_v<long double>) * t);
    result = 1.0L - erfc;
  }
  return x < 0 ? -result : result;
}

// Adaptive Gauss-Kronrod (7/15) quadrature.
class Quadrature {
 public:
  explicit Quadrature(double tolerance = 1e-14, int max_depth = 40)
      : tolerance_(tolerance), max_depth_(max_depth) {}

  double integrate(const std::function<double(double)>& f, double a, double b) const {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a);
    return recurse(f, a, b, tolerance_, 0);
  }

 private:
  static void gk15(const std::function<double(double)>& f, double a, double b, double& kronrod, double& gauss) {
    static constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    kronrod = wk[7] * fc;
    gauss = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
      const double dx = h * xk[i];
      const double f1 = f(c - dx);
      const double f2 = f(c + dx);
      kronrod += wk[i] * (f1 + f2);
      if (i % 2 == 1) gauss += wg[i / 2] * (f1 + f2);
    }
    kronrod *= h;
    gauss *= h;
  }

  double recurse(const std::function<double(double)>& f, double a, double b, double tol, int depth) const {
    double k, g;
    gk15(f, a, b, k, g);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(k);
    if (std::fabs(k - g) <= std::max(tol, floor) || depth >= max_depth_) return k;
    const double m = 0.5 * (a + b);
    return recurse(f, a, m, tol, depth + 1) + recurse(f, m, b, tol, depth + 1);
  }

  double tolerance_;
  int max_depth_;
};

inline double normal_density(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// P(min(x1,x2) <= X <= max(x1,x2)) for X ~ N(mu, sigma^2), by quadrature.
// Integration is clipped to mu +- 40 sigma where the density underflows.
inline double normal_interval_probability(double mu, double sigma, double x1, double x2) {
  double lo = std::min(x1, x2), hi = std::max(x1, x2);
  lo = std::max(lo, mu - 40.0 * sigma);
  hi = std::min(hi, mu + 40.0 * sigma);
  if (lo >= hi) return 0.0;
  const Quadrature q(1e-14);
  auto f = [&](double x) { return normal_density(x, mu, sigma); };
  // split at the mode so the peak is always resolved
  if (lo < mu && mu < hi) return q.integrate(f, lo, mu) + q.integrate(f, mu, hi);
  return q.integrate(f, lo, hi);
}

inline double standard_normal_cdf(double z) {
  if (z <= -40.0) return 0.0;
  const Quadrature q(1e-14);
  auto f = [](double x) { return normal_density(x, 0.0, 1.0); };
  if (z <= 0.0) return q.integrate(f, -40.0, z);
  return 0.5 + q.integrate(f, 0.0, z);
}

// Fraction of `samples` in the half-open interval (min(x1,x2), max(x1,x2)].
inline double counted_fraction(const std::vector<double>& samples, double x1, double x2) {
  const double lo = std::min(x1, x2), hi = std::max(x1, x2);
  std::size_t inside = 0;
  for (double s : samples)
    if (lo < s && s <= hi) ++inside;
  return static_cast<double>(inside) / static_cast<double>(samples.size());
}

// One attribute for the Gower similarity oracle.
struct GowerColumn {
  bool numeric = true;
  double weight = 1.0;
  std::vector<double> numbers;             // numeric
  std::vector<std::string> categories;     // categorical
};

// Gower (1971) similarity between rows i and j, complete data: weighted mean
// of 1 - |x_i - x_j| / range for quantitative columns and of equality for
// qualitative columns.
inline double gower_similarity(const std::vector<GowerColumn>& columns, std::size_t i, std::size_t j) {
  double num = 0.0, den = 0.0;
  for (const auto& c : columns) {
    double s;
    if (c.numeric) {
      const double lo = *std::min_element(c.numbers.begin(), c.numbers.end());
      const double hi = *std::max_element(c.numbers.begin(), c.numbers.end());
      const double range = hi - lo;
      if (range == 0.0)
        s = c.numbers[i] == c.numbers[j] ? 1.0 : 0.0;
      else
        s = 1.0 - std::fabs(c.numbers[i] - c.numbers[j]) / range;
    } else {
      s = c.categories[i] == c.categories[j] ? 1.0 : 0.0;
    }
    if (c.weight > 0.0) {
      num += c.weight * s;
      den += c.weight;
    }
  }
  return num / den;
}

struct VoteOutcome {
  std::string label;
  std::map<std::string, double> scores;
  std::vector<std::pair<std::size_t, double>> neighbors;  // best first
};

// Full-scan similarity-weighted vote. `similarity(t)` returns nullopt when
// training row t is not comparable with the query.
inline VoteOutcome brute_force_vote(std::size_t rows, const std::vector<std::string>& labels,
                                    const std::function<std::optional<double>(std::size_t)>& similarity,
                                    std::size_t k) {
  std::vector<std::pair<std::size_t, double>> all;
  for (std::size_t t = 0; t < rows; ++t)
    if (auto s = similarity(t)) all.emplace_back(t, *s);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  all.resize(std::min(k, all.size()));
  VoteOutcome out;
  for (const auto& l : labels) out.scores[l] = 0.0;
  auto by_row = all;
  std::sort(by_row.begin(), by_row.end());
  for (const auto& [t, s] : by_row) out.scores[labels[t]] += s;
  double best = -1.0;
  for (const auto& [label, score] : out.scores)  // map order is lexicographic
    if (score > best) {
      best = score;
      out.label = label;
    }
  out.neighbors = all;
  return out;
}

}  // namespace oracle
