#include "mixmetric/metric.hpp"

#include <limits>
#include <string>

#include "mixmetric/error.hpp"

namespace mixmetric {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string attribute_error(const AttributeSpec& spec, std::string_view reason) {
  return "attribute '" + spec.name + "': " + std::string(reason);
}

}  // namespace

bool model_matches(DistanceMode mode, const AttributeModel& model) {
  switch (mode) {
    case DistanceMode::gower:
      return std::holds_alternative<RangeModel>(model);
    case DistanceMode::prob_gaussian:
      return std::holds_alternative<GaussianModel>(model);
    case DistanceMode::prob_empirical:
      return std::holds_alternative<EmpiricalCdfModel>(model);
    case DistanceMode::prob_ordinal:
      return std::holds_alternative<OrdinalCdfModel>(model);
    case DistanceMode::exact_match:
      return std::holds_alternative<CategoricalMarker>(model);
  }
  return false;
}

void validate(const FittedMetric& metric) {
  validate(metric.schema);
  if (metric.features != metric.schema.feature_indices())
    throw ModelError("model features do not match the schema's non-target attributes");
  if (metric.models.size() != metric.features.size())
    throw ModelError("expected " + std::to_string(metric.features.size()) + " attribute models, found " +
                     std::to_string(metric.models.size()));
  for (std::size_t f = 0; f < metric.features.size(); ++f) {
    const auto& spec = metric.feature_spec(f);
    const auto& model = metric.models[f];
    if (!model_matches(spec.mode, model))
      throw ModelError(attribute_error(spec, "model type does not match mode " + std::string(to_string(spec.mode))));
    std::visit(overloaded{
                   [&](const GaussianModel& m) {
                     if (!std::isfinite(m.mu) || !std::isfinite(m.sigma) || m.sigma < 0.0 ||
                         m.degenerate != (m.sigma == 0.0))
                       throw ModelError(attribute_error(spec, "invalid Gaussian parameters"));
                   },
                   [&](const EmpiricalCdfModel& m) {
                     if (m.samples.empty()) throw ModelError(attribute_error(spec, "empty empirical model"));
                     for (std::size_t i = 0; i < m.samples.size(); ++i)
                       if (!std::isfinite(m.samples[i]) || (i > 0 && m.samples[i] < m.samples[i - 1]))
                         throw ModelError(attribute_error(spec, "empirical samples must be finite and sorted"));
                   },
                   [&](const OrdinalCdfModel& m) {
                     if (m.levels != spec.levels || m.pmf.size() != m.levels.size() ||
                         m.cdf.size() != m.levels.size())
                       throw ModelError(attribute_error(spec, "ordinal model does not match the declared levels"));
                     for (std::size_t k = 0; k < m.cdf.size(); ++k)
                       if (!(m.pmf[k] >= 0.0) || !(m.cdf[k] >= 0.0 && m.cdf[k] <= 1.0) ||
                           (k > 0 && m.cdf[k] < m.cdf[k - 1]))
                         throw ModelError(attribute_error(spec, "invalid ordinal distribution"));
                   },
                   [&](const RangeModel& m) {
                     if (!std::isfinite(m.min) || !std::isfinite(m.max) || m.min > m.max)
                       throw ModelError(attribute_error(spec, "invalid range"));
                   },
                   [](const CategoricalMarker&) {},
               },
               model);
  }
}

FittedMetric fit_metric(const Dataset& data) {
  validate(data);
  FittedMetric metric;
  metric.schema = data.schema;
  metric.features = data.schema.feature_indices();
  for (std::size_t a : metric.features) {
    const auto& spec = data.schema.attributes[a];
    const auto& column = data.columns[a];
    std::vector<double> numbers;
    std::vector<std::string> tokens;
    for (const Value& v : column) {
      if (v.is_number()) numbers.push_back(v.as_number());
      if (v.is_category()) tokens.push_back(v.as_category());
    }
    if (numbers.empty() && tokens.empty()) throw ModelError(attribute_error(spec, "no non-missing values to fit"));
    switch (spec.mode) {
      case DistanceMode::gower:
        metric.models.emplace_back(fit_range(numbers));
        break;
      case DistanceMode::prob_gaussian:
        metric.models.emplace_back(fit_gaussian(numbers));
        break;
      case DistanceMode::prob_empirical:
        metric.models.emplace_back(fit_empirical(numbers));
        break;
      case DistanceMode::prob_ordinal:
        metric.models.emplace_back(fit_ordinal(tokens, spec.levels));
        break;
      case DistanceMode::exact_match:
        metric.models.emplace_back(CategoricalMarker{});
        break;
    }
  }
  return metric;
}

double prob_distance_cdf(const EmpiricalCdfModel& model, double x1, double x2) {
  const std::size_t c1 = model.count_le(x1);
  const std::size_t c2 = model.count_le(x2);
  const std::size_t inside = c1 > c2 ? c1 - c2 : c2 - c1;
  return static_cast<double>(inside) / static_cast<double>(model.size());
}

double prob_distance_gaussian(const GaussianModel& model, double x1, double x2) {
  if (model.degenerate) return x1 == x2 ? 0.0 : 1.0;
  return 0.5 * std::fabs(model.erf_coordinate(x1) - model.erf_coordinate(x2));
}

double prob_distance_ordinal(const OrdinalCdfModel& model, std::string_view l1, std::string_view l2) {
  return std::fabs(model.cdf[model.index_of(l1)] - model.cdf[model.index_of(l2)]);
}

double gower_numeric(const RangeModel& model, double x1, double x2) {
  const double range = model.span();
  if (range == 0.0) return x1 == x2 ? 0.0 : 1.0;
  const double d = std::fabs(x1 - x2) / range;
  return d > 1.0 ? 1.0 : d;
}

double match_distance(std::string_view c1, std::string_view c2) { return c1 == c2 ? 0.0 : 1.0; }

double power_transform(double d, double exponent) {
  if (exponent == 1.0) return d;
  if (exponent == 2.0) return d * d;
  if (exponent == 0.5) return std::sqrt(d);
  return std::pow(d, exponent);
}

namespace detail {

AttributeKernel::AttributeKernel(const AttributeSpec& spec, const AttributeModel& model)
    : spec_(&spec), model_(&model), weight_(spec.weight), exponent_(spec.exponent) {
  if (!model_matches(spec.mode, model))
    throw ModelError(attribute_error(spec, "model type does not match mode " + std::string(to_string(spec.mode))));
  std::visit(overloaded{
                 [&](const GaussianModel& m) { form_ = m.degenerate ? Form::equality : Form::half_difference; },
                 [&](const EmpiricalCdfModel& m) {
                   form_ = Form::count_difference;
                   scale_ = static_cast<double>(m.size());
                 },
                 [&](const OrdinalCdfModel&) { form_ = Form::cdf_difference; },
                 [&](const RangeModel& m) {
                   form_ = m.span() == 0.0 ? Form::equality : Form::range_difference;
                   scale_ = m.span();
                 },
                 [&](const CategoricalMarker&) {
                   form_ = Form::equality;
                   interns_ = spec.kind == AttributeKind::categorical;
                 },
             },
             model);
}

double AttributeKernel::coordinate(const Value& value) const {
  if (value.is_missing()) return kMissing;
  const AttributeSpec& spec = *spec_;
  if (spec.kind == AttributeKind::numeric) {
    if (!value.is_number()) throw DataError(attribute_error(spec, "expected a number"));
    const double x = value.as_number();
    return std::visit(overloaded{
                          [&](const GaussianModel& m) { return m.degenerate ? x : m.erf_coordinate(x); },
                          [&](const EmpiricalCdfModel& m) { return static_cast<double>(m.count_le(x)); },
                          [&](const auto&) { return x; },
                      },
                      *model_);
  }
  if (!value.is_category()) throw DataError(attribute_error(spec, "expected a category token"));
  if (interns_) throw std::logic_error("category tokens of '" + spec.name + "' must be interned");
  const auto level = spec.level_index(value.as_category());
  if (!level) throw DataError(attribute_error(spec, "unknown level '" + value.as_category() + "'"));
  if (const auto* m = std::get_if<OrdinalCdfModel>(model_)) return m->cdf[*level];
  return static_cast<double>(*level);
}

double SimilarityAccumulator::similarity() const {
  if (compared_ == 0) throw NoComparableAttributes("no comparable attributes");
  if (denominator_ == 0.0) throw Error("total weight of the compared attributes is zero");
  return numerator_ / denominator_;
}

}  // namespace detail

std::optional<double> attribute_distance(const AttributeSpec& spec, const AttributeModel& model, const Value& v1,
                                         const Value& v2) {
  const detail::AttributeKernel kernel(spec, model);
  if (v1.is_missing() || v2.is_missing()) return std::nullopt;
  if (kernel.interns_tokens()) {
    if (!v1.is_category() || !v2.is_category()) throw DataError(attribute_error(spec, "expected a category token"));
    return kernel.distance(0.0, v1.as_category() == v2.as_category() ? 0.0 : 1.0);
  }
  return kernel.distance(kernel.coordinate(v1), kernel.coordinate(v2));
}

double record_similarity(const FittedMetric& metric, const Record& r1, const Record& r2) {
  const std::size_t width = metric.schema.attributes.size();
  if (r1.size() != width || r2.size() != width)
    throw DataError("record has " + std::to_string(r1.size() != width ? r1.size() : r2.size()) +
                    " values, schema has " + std::to_string(width));
  detail::SimilarityAccumulator acc;
  for (std::size_t f = 0; f < metric.features.size(); ++f) {
    const std::size_t a = metric.features[f];
    const auto& spec = metric.schema.attributes[a];
    if (auto d = attribute_distance(spec, metric.models[f], r1[a], r2[a])) acc.add(spec.weight, *d);
  }
  return acc.similarity();
}

double record_distance(const FittedMetric& metric, const Record& r1, const Record& r2) {
  return 1.0 - record_similarity(metric, r1, r2);
}

}  // namespace mixmetric
