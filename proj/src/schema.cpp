#include "mixmetric/schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <system_error>
#include <unordered_map>

#include <json.hpp>

#include "mixmetric/error.hpp"

namespace mixmetric {

namespace {

using nlohmann::json;

struct ModeName {
  DistanceMode mode;
  std::string_view name;
};

constexpr ModeName kModeNames[] = {
    {DistanceMode::gower, "gower"},
    {DistanceMode::prob_gaussian, "prob_gaussian"},
    {DistanceMode::prob_empirical, "prob_empirical"},
    {DistanceMode::prob_ordinal, "prob_ordinal"},
    {DistanceMode::exact_match, "exact_match"},
};

std::string attribute_error(std::string_view name, std::string_view reason) {
  return "attribute '" + std::string(name) + "': " + std::string(reason);
}

bool is_missing_token(std::string_view cell) { return cell.empty() || cell == "NA"; }

bool parse_real(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::numeric:
      return "numeric";
    case AttributeKind::categorical:
      return "categorical";
    case AttributeKind::ordinal:
      return "ordinal";
  }
  return "?";
}

std::string_view to_string(DistanceMode mode) {
  for (const auto& m : kModeNames)
    if (m.mode == mode) return m.name;
  return "?";
}

AttributeKind parse_kind(std::string_view token) {
  if (token == "numeric") return AttributeKind::numeric;
  if (token == "categorical") return AttributeKind::categorical;
  if (token == "ordinal") return AttributeKind::ordinal;
  throw SchemaError("unknown attribute kind '" + std::string(token) + "'");
}

DistanceMode parse_mode(std::string_view token) {
  for (const auto& m : kModeNames)
    if (m.name == token) return m.mode;
  throw SchemaError("unknown mode '" + std::string(token) + "'");
}

DistanceMode default_mode(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::numeric:
      return DistanceMode::prob_gaussian;
    case AttributeKind::categorical:
      return DistanceMode::exact_match;
    case AttributeKind::ordinal:
      return DistanceMode::prob_ordinal;
  }
  return DistanceMode::exact_match;
}

bool mode_accepts(DistanceMode mode, AttributeKind kind) {
  switch (mode) {
    case DistanceMode::gower:
    case DistanceMode::prob_gaussian:
    case DistanceMode::prob_empirical:
      return kind == AttributeKind::numeric;
    case DistanceMode::prob_ordinal:
      return kind == AttributeKind::ordinal;
    case DistanceMode::exact_match:
      return kind == AttributeKind::categorical || kind == AttributeKind::ordinal;
  }
  return false;
}

std::optional<std::size_t> AttributeSpec::level_index(std::string_view token) const {
  auto it = std::find(levels.begin(), levels.end(), token);
  if (it == levels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Schema::target_index() const {
  if (!target) return std::nullopt;
  return index_of(*target);
}

bool Schema::is_target(std::size_t attribute) const {
  return target && attributes[attribute].name == *target;
}

std::vector<std::size_t> Schema::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (!is_target(i)) out.push_back(i);
  return out;
}

void validate(const Schema& schema) {
  std::set<std::string_view> names;
  for (const auto& a : schema.attributes) {
    if (a.name.empty()) throw SchemaError("attribute with empty name");
    if (!names.insert(a.name).second) throw SchemaError(attribute_error(a.name, "duplicate name"));
    if (a.kind == AttributeKind::ordinal) {
      if (a.levels.empty()) throw SchemaError(attribute_error(a.name, "ordinal attribute needs levels"));
      std::set<std::string_view> seen(a.levels.begin(), a.levels.end());
      if (seen.size() != a.levels.size())
        throw SchemaError(attribute_error(a.name, "duplicate level"));
    } else if (!a.levels.empty()) {
      throw SchemaError(attribute_error(a.name, "levels are only allowed on ordinal attributes"));
    }
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw SchemaError(attribute_error(a.name, "weight must be a finite non-negative number"));
    if (!(a.exponent > 0.0) || !std::isfinite(a.exponent))
      throw SchemaError(attribute_error(a.name, "exponent must be a finite positive number"));
    if (!schema.is_target(&a - schema.attributes.data()) && !mode_accepts(a.mode, a.kind))
      throw SchemaError(attribute_error(a.name, "mode/kind mismatch: mode " + std::string(to_string(a.mode)) +
                                                    " cannot be used with a " +
                                                    std::string(to_string(a.kind)) + " attribute"));
  }
  if (schema.target) {
    auto t = schema.index_of(*schema.target);
    if (!t) throw SchemaError("target '" + *schema.target + "' is not a declared attribute");
    if (schema.attributes[*t].kind != AttributeKind::categorical)
      throw SchemaError(attribute_error(*schema.target, "target must be categorical"));
  }
  if (schema.feature_indices().empty()) throw SchemaError("schema has no non-target attribute");
}

Schema parse_schema(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed schema document: ") + e.what());
  }
  Schema schema;
  try {
    if (!doc.is_object() || !doc.contains("attributes") || !doc["attributes"].is_array())
      throw SchemaError("malformed schema document: expected an object with an 'attributes' array");
    for (const auto& [key, _] : doc.items())
      if (key != "attributes" && key != "target")
        throw SchemaError("malformed schema document: unknown field '" + key + "'");
    if (doc.contains("target") && !doc["target"].is_null())
      schema.target = doc["target"].get<std::string>();

    for (const auto& item : doc["attributes"]) {
      if (!item.is_object() || !item.contains("name") || !item.contains("kind"))
        throw SchemaError("malformed schema document: each attribute needs 'name' and 'kind'");
      AttributeSpec spec;
      spec.name = item["name"].get<std::string>();
      for (const auto& [key, _] : item.items())
        if (key != "name" && key != "kind" && key != "mode" && key != "levels" && key != "weight" &&
            key != "exponent")
          throw SchemaError(attribute_error(spec.name, "unknown field '" + key + "'"));
      try {
        spec.kind = parse_kind(item["kind"].get<std::string>());
        spec.mode = item.contains("mode") ? parse_mode(item["mode"].get<std::string>())
                                          : default_mode(spec.kind);
      } catch (const SchemaError& e) {
        throw SchemaError(attribute_error(spec.name, e.what()));
      }
      if (item.contains("levels")) spec.levels = item["levels"].get<std::vector<std::string>>();
      if (item.contains("weight")) spec.weight = item["weight"].get<double>();
      if (item.contains("exponent")) spec.exponent = item["exponent"].get<double>();
      schema.attributes.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed schema document: ") + e.what());
  }
  // The target takes no part in distances; give it a neutral mode.
  if (auto t = schema.target_index()) schema.attributes[*t].mode = DistanceMode::exact_match;
  validate(schema);
  return schema;
}

std::string render_schema(const Schema& schema) {
  json doc;
  doc["attributes"] = json::array();
  for (const auto& a : schema.attributes) {
    json item;
    item["name"] = a.name;
    item["kind"] = std::string(to_string(a.kind));
    if (!schema.is_target(&a - schema.attributes.data())) item["mode"] = std::string(to_string(a.mode));
    if (!a.levels.empty()) item["levels"] = a.levels;
    item["weight"] = a.weight;
    item["exponent"] = a.exponent;
    doc["attributes"].push_back(std::move(item));
  }
  if (schema.target) doc["target"] = *schema.target;
  return doc.dump(2);
}

Value Value::number(double x) {
  if (!std::isfinite(x)) throw DataError("non-finite number");
  Value v;
  v.data_ = x;
  return v;
}

Value Value::category(std::string token) {
  Value v;
  v.data_ = std::move(token);
  return v;
}

Record Dataset::row(std::size_t i) const {
  Record r;
  r.reserve(columns.size());
  for (const auto& c : columns) r.push_back(c[i]);
  return r;
}

Dataset select_rows(const Dataset& data, std::span<const std::size_t> rows) {
  Dataset out;
  out.schema = data.schema;
  out.columns.resize(data.columns.size());
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    out.columns[c].reserve(rows.size());
    for (std::size_t r : rows) out.columns[c].push_back(data.columns[c].at(r));
  }
  return out;
}

void validate(const Dataset& data) {
  validate(data.schema);
  if (data.columns.size() != data.schema.attributes.size())
    throw DataError("dataset has " + std::to_string(data.columns.size()) + " columns, schema has " +
                    std::to_string(data.schema.attributes.size()));
  const std::size_t n = data.rows();
  if (n == 0) throw DataError("dataset has no rows");
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    const auto& spec = data.schema.attributes[c];
    if (data.columns[c].size() != n) throw DataError(attribute_error(spec.name, "column length differs"));
    for (std::size_t r = 0; r < n; ++r) {
      const Value& v = data.columns[c][r];
      if (v.is_missing()) continue;
      const bool ok = spec.kind == AttributeKind::numeric
                          ? v.is_number()
                          : v.is_category() &&
                                (spec.kind != AttributeKind::ordinal || spec.level_index(v.as_category()));
      if (!ok)
        throw DataError("row " + std::to_string(r + 1) + ", column '" + spec.name + "': value does not fit a " +
                        std::string(to_string(spec.kind)) + " attribute");
    }
  }
}

std::vector<std::vector<std::string>> read_csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;      // inside a quoted field
  bool row_started = false;
  std::size_t line = 1;
  std::size_t i = 0;
  if (text.starts_with("\xEF\xBB\xBF")) i = 3;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
          if (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '\n' && text[i + 1] != '\r')
            throw DataError("line " + std::to_string(line) + ": unexpected character after closing quote");
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty())
          throw DataError("line " + std::to_string(line) + ": quote inside an unquoted field");
        quoted = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(ch);
        row_started = true;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line) + ": unterminated quoted field");
  if (row_started || !field.empty()) end_row();
  return rows;
}

namespace {

Value parse_cell(const AttributeSpec& spec, const std::string& cell, std::size_t row_number) {
  if (is_missing_token(cell)) return Value::missing();
  if (spec.kind == AttributeKind::numeric) {
    double x = 0.0;
    if (!parse_real(cell, x))
      throw DataError("row " + std::to_string(row_number) + ", column '" + spec.name +
                      "': cannot parse '" + cell + "' as a finite number");
    return Value::number(x);
  }
  if (spec.kind == AttributeKind::ordinal && !spec.level_index(cell))
    throw DataError("row " + std::to_string(row_number) + ", column '" + spec.name + "': token '" + cell +
                    "' is not a declared level");
  return Value::category(cell);
}

bool is_blank_row(const std::vector<std::string>& row) { return row.size() == 1 && row[0].empty(); }

}  // namespace

Dataset parse_csv(std::string_view text, const Schema& schema) {
  auto rows = read_csv_rows(text);
  if (rows.empty()) throw DataError("CSV document is empty");
  const auto& header = rows.front();
  const std::size_t width = header.size();
  // A blank line is a legitimate all-missing row only for one-column files.
  while (width > 1 && rows.size() > 1 && is_blank_row(rows.back())) rows.pop_back();

  // source column for each schema attribute; npos when absent
  std::vector<std::size_t> source(schema.attributes.size(), std::string::npos);
  for (std::size_t c = 0; c < width; ++c) {
    auto a = schema.index_of(header[c]);
    if (!a) throw DataError("header mismatch: column '" + header[c] + "' is not in the schema");
    if (source[*a] != std::string::npos) throw DataError("header mismatch: column '" + header[c] + "' repeated");
    source[*a] = c;
  }
  for (std::size_t a = 0; a < schema.attributes.size(); ++a)
    if (source[a] == std::string::npos && !schema.is_target(a))
      throw DataError("header mismatch: column '" + schema.attributes[a].name + "' is missing");

  Dataset data;
  data.schema = schema;
  data.columns.assign(schema.attributes.size(), {});
  for (auto& c : data.columns) c.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    // row numbers count data rows from 1
    if (row.size() != width)
      throw DataError("row " + std::to_string(r) + ": expected " + std::to_string(width) + " fields, found " +
                      std::to_string(row.size()));
    for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
      if (source[a] == std::string::npos) {
        data.columns[a].push_back(Value::missing());
        continue;
      }
      data.columns[a].push_back(parse_cell(schema.attributes[a], row[source[a]], r));
    }
  }
  if (data.rows() == 0) throw DataError("CSV document has a header but no rows");
  return data;
}

Record parse_csv_record(std::string_view line, const Schema& schema) {
  auto rows = read_csv_rows(line);
  while (!rows.empty() && is_blank_row(rows.back())) rows.pop_back();
  if (rows.size() != 1) throw DataError("expected exactly one CSV row");
  const auto& fields = rows.front();
  const auto features = schema.feature_indices();
  Record record(schema.attributes.size());
  if (fields.size() == schema.attributes.size()) {
    for (std::size_t a = 0; a < fields.size(); ++a)
      if (!schema.is_target(a)) record[a] = parse_cell(schema.attributes[a], fields[a], 1);
  } else if (fields.size() == features.size()) {
    for (std::size_t f = 0; f < features.size(); ++f)
      record[features[f]] = parse_cell(schema.attributes[features[f]], fields[f], 1);
  } else {
    throw DataError("expected " + std::to_string(features.size()) + " fields, found " +
                    std::to_string(fields.size()));
  }
  return record;
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string render_csv(const Dataset& data) {
  std::string out;
  for (std::size_t a = 0; a < data.schema.attributes.size(); ++a) {
    if (a) out.push_back(',');
    out += quote_if_needed(data.schema.attributes[a].name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t a = 0; a < data.columns.size(); ++a) {
      if (a) out.push_back(',');
      const Value& v = data.columns[a][r];
      if (v.is_number())
        out += format_real(v.as_number());
      else if (v.is_category())
        out += quote_if_needed(v.as_category());
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace mixmetric
