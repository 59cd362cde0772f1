#include "mixmetric/model_io.hpp"

#include <json.hpp>

#include "mixmetric/error.hpp"

namespace mixmetric {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "mixmetric-model";

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json model_to_json(const std::string& name, const AttributeModel& model) {
  json out;
  out["attribute"] = name;
  std::visit(overloaded{
                 [&](const GaussianModel& m) {
                   out["type"] = "gaussian";
                   out["mu"] = m.mu;
                   out["sigma"] = m.sigma;
                   out["degenerate"] = m.degenerate;
                 },
                 [&](const EmpiricalCdfModel& m) {
                   out["type"] = "empirical";
                   out["samples"] = m.samples;
                 },
                 [&](const OrdinalCdfModel& m) {
                   out["type"] = "ordinal";
                   out["levels"] = m.levels;
                   out["pmf"] = m.pmf;
                   out["cdf"] = m.cdf;
                 },
                 [&](const RangeModel& m) {
                   out["type"] = "range";
                   out["min"] = m.min;
                   out["max"] = m.max;
                 },
                 [&](const CategoricalMarker&) { out["type"] = "match"; },
             },
             model);
  return out;
}

AttributeModel model_from_json(const json& in) {
  const auto type = in.at("type").get<std::string>();
  if (type == "gaussian")
    return GaussianModel{in.at("mu").get<double>(), in.at("sigma").get<double>(), in.at("degenerate").get<bool>()};
  if (type == "empirical") return EmpiricalCdfModel{in.at("samples").get<std::vector<double>>()};
  if (type == "ordinal")
    return OrdinalCdfModel{in.at("levels").get<std::vector<std::string>>(), in.at("pmf").get<std::vector<double>>(),
                           in.at("cdf").get<std::vector<double>>()};
  if (type == "range") return RangeModel{in.at("min").get<double>(), in.at("max").get<double>()};
  if (type == "match") return CategoricalMarker{};
  throw ModelError("model document: unknown model type '" + type + "'");
}

}  // namespace

std::string save_model(const FittedMetric& metric) {
  validate(metric);
  json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kModelFormatVersion;
  doc["schema"] = json::parse(render_schema(metric.schema));
  doc["models"] = json::array();
  for (std::size_t f = 0; f < metric.features.size(); ++f)
    doc["models"].push_back(model_to_json(metric.feature_spec(f).name, metric.models[f]));
  return doc.dump(2) + "\n";
}

FittedMetric load_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("corrupted model document: ") + e.what());
  }
  FittedMetric metric;
  try {
    if (!doc.is_object() || doc.value("format", std::string{}) != kFormatTag)
      throw ModelError("corrupted model document: missing format tag '" + std::string(kFormatTag) + "'");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kModelFormatVersion)
      throw ModelError("model document version mismatch: expected " + std::to_string(kModelFormatVersion) +
                       ", found " + (doc.contains("version") ? doc["version"].dump() : std::string("none")));
    metric.schema = parse_schema(doc.at("schema").dump());
    metric.features = metric.schema.feature_indices();
    const auto& models = doc.at("models");
    if (!models.is_array() || models.size() != metric.features.size())
      throw ModelError("corrupted model document: expected one model per non-target attribute");
    for (std::size_t f = 0; f < models.size(); ++f) {
      if (models[f].at("attribute").get<std::string>() != metric.feature_spec(f).name)
        throw ModelError("corrupted model document: model " + std::to_string(f) + " is for attribute '" +
                         models[f].at("attribute").get<std::string>() + "', expected '" +
                         metric.feature_spec(f).name + "'");
      metric.models.push_back(model_from_json(models[f]));
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("corrupted model document: ") + e.what());
  } catch (const SchemaError& e) {
    throw ModelError(std::string("corrupted model document: ") + e.what());
  }
  validate(metric);
  return metric;
}

}  // namespace mixmetric
