#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mixmetric/models.hpp"
#include "mixmetric/schema.hpp"

namespace mixmetric {

// Stateless model behind exact_match attributes.
struct CategoricalMarker {
  friend bool operator==(const CategoricalMarker&, const CategoricalMarker&) = default;
};

using AttributeModel =
    std::variant<GaussianModel, EmpiricalCdfModel, OrdinalCdfModel, RangeModel, CategoricalMarker>;

bool model_matches(DistanceMode mode, const AttributeModel& model);

struct FittedMetric {
  Schema schema;
  std::vector<std::size_t> features;   // schema indices of the non-target attributes
  std::vector<AttributeModel> models;  // aligned with `features`

  const AttributeSpec& feature_spec(std::size_t f) const { return schema.attributes[features[f]]; }

  friend bool operator==(const FittedMetric&, const FittedMetric&) = default;
};

// Throws ModelError if the models do not line up with the schema.
void validate(const FittedMetric& metric);

// Fits one model per non-target attribute from the non-missing values of
// each column.
FittedMetric fit_metric(const Dataset& data);

// |F(x1) - F(x2)| for any CDF F.
template <typename Cdf>
double prob_distance_cdf(const Cdf& cdf, double x1, double x2) {
  return std::fabs(cdf(x1) - cdf(x2));
}

// Empirical form of the CDF distance, evaluated from integer counts:
// the fraction of samples in (min(x1, x2), max(x1, x2)].
double prob_distance_cdf(const EmpiricalCdfModel& model, double x1, double x2);
double prob_distance_gaussian(const GaussianModel& model, double x1, double x2);
double prob_distance_ordinal(const OrdinalCdfModel& model, std::string_view l1, std::string_view l2);
double gower_numeric(const RangeModel& model, double x1, double x2);
double match_distance(std::string_view c1, std::string_view c2);
double power_transform(double d, double exponent);

// Distance for one attribute after the power transform, or nullopt when
// either value is missing.
std::optional<double> attribute_distance(const AttributeSpec& spec, const AttributeModel& model,
                                         const Value& v1, const Value& v2);

// Records are in schema order; the target slot, if any, is ignored.
double record_similarity(const FittedMetric& metric, const Record& r1, const Record& r2);
double record_distance(const FittedMetric& metric, const Record& r1, const Record& r2);

namespace detail {

// Per-attribute evaluator shared by the scalar, matrix and predictor paths.
// A value is first mapped to a coordinate (NaN when missing); the distance
// between two coordinates is then a fixed function of the attribute's form.
class AttributeKernel {
 public:
  enum class Form {
    equality,          // 0 on equal coordinates, else 1
    half_difference,   // Gaussian: coordinates are erf terms
    count_difference,  // empirical: coordinates are counts <= x
    cdf_difference,    // ordinal: coordinates are cumulative masses
    range_difference,  // Gower: coordinates are raw values
  };

  AttributeKernel(const AttributeSpec& spec, const AttributeModel& model);

  Form form() const { return form_; }
  double weight() const { return weight_; }

  // Numeric and ordinal values. Category tokens of exact_match attributes
  // have no intrinsic coordinate; callers intern them instead.
  double coordinate(const Value& value) const;
  bool interns_tokens() const { return interns_; }

  // Transformed distance between two present coordinates.
  double distance(double c1, double c2) const {
    double d;
    switch (form_) {
      case Form::equality:
        d = c1 == c2 ? 0.0 : 1.0;
        break;
      case Form::half_difference:
        d = 0.5 * std::fabs(c1 - c2);
        break;
      case Form::count_difference:
        d = std::fabs(c1 - c2) / scale_;
        break;
      case Form::cdf_difference:
        d = std::fabs(c1 - c2);
        break;
      case Form::range_difference:
      default:
        d = std::fabs(c1 - c2) / scale_;
        if (d > 1.0) d = 1.0;
        break;
    }
    return exponent_ == 1.0 ? d : power_transform(d, exponent_);
  }

 private:
  const AttributeSpec* spec_;
  const AttributeModel* model_;
  Form form_ = Form::equality;
  double scale_ = 1.0;
  double weight_ = 1.0;
  double exponent_ = 1.0;
  bool interns_ = false;
};

// Weighted mean of per-attribute similarities 1 - d_i, accumulated in a
// fixed attribute order.
class SimilarityAccumulator {
 public:
  void add(double weight, double distance) {
    if (weight > 0.0) {
      numerator_ += weight * (1.0 - distance);
      denominator_ += weight;
    }
    ++compared_;
  }
  std::size_t compared() const { return compared_; }
  // Throws NoComparableAttributes / Error when nothing (or zero weight) was compared.
  double similarity() const;

 private:
  double numerator_ = 0.0;
  double denominator_ = 0.0;
  std::size_t compared_ = 0;
};

}  // namespace detail

}  // namespace mixmetric
