#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mixmetric/error.hpp"
#include "mixmetric/metric.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mixmetric;
using namespace testing_support;

namespace {

const double kOneToFour[] = {1.0, 2.0, 3.0, 4.0};

OrdinalCdfModel abc_model() {
  return OrdinalCdfModel{{"A", "B", "C"}, {0.2, 0.3, 0.5}, {0.2, 0.5, 1.0}};
}

}  // namespace

TEST_CASE("prob_distance_cdf on an empirical model") {
  const auto m = fit_empirical(kOneToFour);
  CHECK(prob_distance_cdf(m, 1.0, 3.0) == 0.5);
  CHECK(prob_distance_cdf(m, 2.0, 2.0) == 0.0);
  CHECK(prob_distance_cdf(m, 0.0, 100.0) == 1.0);
  // the generic form over any callable CDF agrees
  auto F = [&](double x) { return empirical_cdf(m, x); };
  CHECK(prob_distance_cdf(F, 1.0, 3.0) == 0.5);
  CHECK(prob_distance_cdf(F, 3.0, 1.0) == 0.5);
  CHECK(prob_distance_cdf(F, 2.5, 2.5) == 0.0);
}

TEST_CASE("prob_distance_gaussian") {
  const GaussianModel standard{0.0, 1.0, false};
  CHECK(std::fabs(prob_distance_gaussian(standard, 0.0, 1.0) - 0.3413447460685429) <= 1e-15);
  // the frozen value comes from quadrature of the density over [0, 1]
  CHECK(std::fabs(oracle::normal_interval_probability(0.0, 1.0, 0.0, 1.0) - 0.3413447460685429) <= 1e-14);
  const GaussianModel shifted{3.0, 2.0, false};
  for (double x : {-10.0, 0.0, 3.0, 7.25}) CHECK(prob_distance_gaussian(shifted, x, x) == 0.0);
  const GaussianModel point{5.0, 0.0, true};
  CHECK(prob_distance_gaussian(point, 5.0, 7.0) == 1.0);
  CHECK(prob_distance_gaussian(point, 5.0, 5.0) == 0.0);
  CHECK(prob_distance_gaussian(point, 6.0, 6.0) == 0.0);
}

TEST_CASE("prob_distance_gaussian agrees with quadrature") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double mu = (u(rng) - 0.5) * 200.0;
    const double sigma = std::pow(10.0, -3.0 + 6.0 * u(rng));
    const double x1 = mu + (u(rng) - 0.5) * 12.0 * sigma;
    const double x2 = mu + (u(rng) - 0.5) * 12.0 * sigma;
    const GaussianModel m{mu, sigma, false};
    CHECK(std::fabs(prob_distance_gaussian(m, x1, x2) - oracle::normal_interval_probability(mu, sigma, x1, x2)) <=
          1e-9);
  }
}

TEST_CASE("prob_distance_ordinal") {
  const auto m = abc_model();
  CHECK(prob_distance_ordinal(m, "A", "C") == 0.8);
  CHECK(prob_distance_ordinal(m, "B", "B") == 0.0);
  CHECK(prob_distance_ordinal(m, "A", "B") == 0.3);
  CHECK(prob_distance_ordinal(m, "C", "A") == 0.8);
  CHECK_THROWS_AS(prob_distance_ordinal(m, "A", "Q"), ModelError);
}

TEST_CASE("gower_numeric") {
  const RangeModel r{0.0, 10.0};
  CHECK(gower_numeric(r, 2.0, 7.0) == 0.5);
  CHECK(gower_numeric(r, 4.0, 4.0) == 0.0);
  CHECK(gower_numeric(r, -5.0, 20.0) == 1.0);
  const RangeModel flat{3.0, 3.0};
  CHECK(gower_numeric(flat, 3.0, 3.0) == 0.0);
  CHECK(gower_numeric(flat, 3.0, 4.0) == 1.0);
}

TEST_CASE("match_distance") {
  CHECK(match_distance("red", "red") == 0.0);
  CHECK(match_distance("red", "blue") == 1.0);
  // an ordinal attribute compared by exact match
  const AttributeSpec spec = ordinal("size", {"low", "mid", "high"}, DistanceMode::exact_match);
  CHECK(attribute_distance(spec, CategoricalMarker{}, Value::category("low"), Value::category("high")) == 1.0);
  CHECK(attribute_distance(spec, CategoricalMarker{}, Value::category("mid"), Value::category("mid")) == 0.0);
}

TEST_CASE("power_transform") {
  CHECK(power_transform(0.5, 2.0) == 0.25);
  CHECK(power_transform(0.25, 0.5) == 0.5);
  for (double g : {0.1, 0.5, 1.0, 1.7, 2.0, 9.0}) {
    CHECK(power_transform(0.0, g) == 0.0);
    CHECK(power_transform(1.0, g) == 1.0);
  }
  CHECK(power_transform(0.37, 1.0) == 0.37);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double g : {0.3, 0.5, 1.0, 2.0, 3.3}) {
    std::vector<double> ds(2000);
    for (auto& d : ds) d = u(rng);
    std::sort(ds.begin(), ds.end());
    for (std::size_t i = 1; i < ds.size(); ++i) {
      const double a = power_transform(ds[i - 1], g), b = power_transform(ds[i], g);
      CHECK(a <= b);
      CHECK(a >= 0.0);
      CHECK(b <= 1.0);
    }
  }
}

TEST_CASE("attribute_distance") {
  const AttributeSpec g = numeric("x", DistanceMode::prob_gaussian, 1.0, 2.0);
  const GaussianModel standard{0.0, 1.0, false};
  const auto d = attribute_distance(g, standard, Value::number(0.0), Value::number(1.0));
  REQUIRE(d.has_value());
  CHECK(std::fabs(*d - 0.3413447460685429 * 0.3413447460685429) <= 1e-15);
  CHECK(std::fabs(*d - 0.11651623566859807) <= 1e-15);

  CHECK_FALSE(attribute_distance(g, standard, Value::missing(), Value::number(5.0)).has_value());
  CHECK_FALSE(attribute_distance(g, standard, Value::number(5.0), Value::missing()).has_value());
  CHECK_FALSE(attribute_distance(g, standard, Value::missing(), Value::missing()).has_value());

  const AttributeSpec c = categorical("c");
  CHECK(attribute_distance(c, CategoricalMarker{}, Value::category("a"), Value::category("a")) == 0.0);

  CHECK_THROWS_AS(attribute_distance(g, standard, Value::category("a"), Value::number(1.0)), DataError);
  CHECK_THROWS_AS(attribute_distance(c, CategoricalMarker{}, Value::number(1.0), Value::category("a")), DataError);
  CHECK_THROWS_AS(attribute_distance(g, RangeModel{0.0, 1.0}, Value::number(0.0), Value::number(1.0)), ModelError);
}

TEST_CASE("record_distance and record_similarity") {
  FittedMetric fm;
  fm.schema.attributes = {numeric("x", DistanceMode::gower), categorical("c")};
  fm.features = {0, 1};
  fm.models = {RangeModel{0.0, 10.0}, CategoricalMarker{}};

  const Record r1 = {Value::number(2.0), Value::category("red")};
  const Record r2 = {Value::number(7.0), Value::category("red")};
  CHECK(record_distance(fm, r1, r2) == 0.25);
  CHECK(record_similarity(fm, r1, r2) == 0.75);
  CHECK(record_distance(fm, r1, r1) == 0.0);
  CHECK(record_similarity(fm, r1, r1) == 1.0);

  const Record m1 = {Value::missing(), Value::category("red")};
  const Record m2 = {Value::number(7.0), Value::category("blue")};
  CHECK(record_distance(fm, m1, m2) == 1.0);  // only the categorical term remains
  const Record m3 = {Value::number(2.0), Value::missing()};
  CHECK(record_distance(fm, m3, r2) == 0.5);

  FittedMetric cats;
  cats.schema.attributes = {categorical("a"), categorical("b")};
  cats.features = {0, 1};
  cats.models = {CategoricalMarker{}, CategoricalMarker{}};
  CHECK(record_similarity(cats, {Value::category("x"), Value::category("y")},
                          {Value::category("p"), Value::category("q")}) == 0.0);

  const Record none = {Value::missing(), Value::missing()};
  CHECK_THROWS_AS(record_distance(fm, none, r1), NoComparableAttributes);
  try {
    record_distance(fm, r1, none);
  } catch (const NoComparableAttributes& e) {
    CHECK(std::string(e.what()) == "no comparable attributes");
  }

  FittedMetric weightless = fm;
  weightless.schema.attributes[0].weight = 0.0;
  weightless.schema.attributes[1].weight = 0.0;
  CHECK_THROWS_AS(record_distance(weightless, r1, r2), Error);

  CHECK_THROWS_AS(record_distance(fm, {Value::number(1.0)}, r1), DataError);
}

TEST_CASE("weights and exponents are applied per attribute") {
  FittedMetric fm;
  fm.schema.attributes = {numeric("x", DistanceMode::gower, 3.0, 2.0), categorical("c", 1.0)};
  fm.features = {0, 1};
  fm.models = {RangeModel{0.0, 10.0}, CategoricalMarker{}};
  const Record a = {Value::number(0.0), Value::category("u")};
  const Record b = {Value::number(5.0), Value::category("v")};
  // d_x = 0.5^2 = 0.25, d_c = 1 -> S = (3 * 0.75 + 0) / 4
  CHECK(record_similarity(fm, a, b) == 0.5625);
  CHECK(record_distance(fm, a, b) == 0.4375);
}

TEST_CASE("the target slot is ignored") {
  FittedMetric fm;
  fm.schema.attributes = {numeric("x", DistanceMode::gower), categorical("y")};
  fm.schema.target = "y";
  fm.features = {0};
  fm.models = {RangeModel{0.0, 4.0}};
  CHECK(record_distance(fm, {Value::number(1.0), Value::category("p")}, {Value::number(2.0), Value::category("q")}) ==
        0.25);
}

TEST_CASE("fit_metric") {
  RandomMixed gen(1);
  const Schema s = gen.schema(true);
  const Dataset d = gen.dataset(s, 25);
  const FittedMetric fm = fit_metric(d);
  CHECK(fm.features == s.feature_indices());
  REQUIRE(fm.models.size() == 6);
  CHECK(std::holds_alternative<GaussianModel>(fm.models[0]));
  CHECK(std::holds_alternative<EmpiricalCdfModel>(fm.models[1]));
  CHECK(std::holds_alternative<RangeModel>(fm.models[2]));
  CHECK(std::holds_alternative<OrdinalCdfModel>(fm.models[3]));
  CHECK(std::holds_alternative<CategoricalMarker>(fm.models[4]));
  CHECK(std::holds_alternative<CategoricalMarker>(fm.models[5]));

  std::vector<double> gauss;
  for (const Value& v : d.columns[0])
    if (v.is_number()) gauss.push_back(v.as_number());
  CHECK(std::get<GaussianModel>(fm.models[0]) == fit_gaussian(gauss));

  Dataset hollow = d;
  for (std::size_t r = 0; r < hollow.rows(); ++r) hollow.columns[2][r] = Value::missing();
  CHECK_THROWS_AS(fit_metric(hollow), ModelError);
}
