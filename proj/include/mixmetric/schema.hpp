#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mixmetric {

enum class AttributeKind { numeric, categorical, ordinal };

enum class DistanceMode { gower, prob_gaussian, prob_empirical, prob_ordinal, exact_match };

std::string_view to_string(AttributeKind kind);
std::string_view to_string(DistanceMode mode);
AttributeKind parse_kind(std::string_view token);
DistanceMode parse_mode(std::string_view token);

// Mode used when a schema document leaves it out.
DistanceMode default_mode(AttributeKind kind);
bool mode_accepts(DistanceMode mode, AttributeKind kind);

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  std::vector<std::string> levels;  // ordinal only, in declared order
  double weight = 1.0;
  DistanceMode mode = DistanceMode::prob_gaussian;
  double exponent = 1.0;

  // Index of `token` in `levels`, or nullopt.
  std::optional<std::size_t> level_index(std::string_view token) const;

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

struct Schema {
  std::vector<AttributeSpec> attributes;
  std::optional<std::string> target;

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> target_index() const;
  bool is_target(std::size_t attribute) const;
  // Indices of the attributes that take part in distances, in schema order.
  std::vector<std::size_t> feature_indices() const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

// Throws SchemaError if any attribute or schema invariant is violated.
void validate(const Schema& schema);

// A single cell: missing, a finite number, or a category token.
class Value {
 public:
  Value() = default;
  static Value missing() { return Value{}; }
  static Value number(double x);
  static Value category(std::string token);

  bool is_missing() const { return std::holds_alternative<std::monostate>(data_); }
  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_category() const { return std::holds_alternative<std::string>(data_); }

  double as_number() const { return std::get<double>(data_); }
  const std::string& as_category() const { return std::get<std::string>(data_); }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<std::monostate, double, std::string> data_;
};

using Record = std::vector<Value>;

// Column-major table conforming to a schema.
struct Dataset {
  Schema schema;
  std::vector<std::vector<Value>> columns;  // one per schema attribute

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  // Row `i` as a record in schema order (target included).
  Record row(std::size_t i) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Copy of the given rows, in the given order.
Dataset select_rows(const Dataset& data, std::span<const std::size_t> rows);

// Throws DataError if a column violates its attribute's kind or levels.
void validate(const Dataset& data);

Schema parse_schema(std::string_view text);
std::string render_schema(const Schema& schema);

// Header names may appear in any order; the target column may be absent.
// Empty cells and the literal NA are missing.
Dataset parse_csv(std::string_view text, const Schema& schema);
std::string render_csv(const Dataset& data);

// Parses a single header-less CSV line holding either the feature values
// (schema order, target excluded) or a value for every attribute.
Record parse_csv_record(std::string_view line, const Schema& schema);

// Low-level RFC-4180 reader; returns rows of raw fields.
std::vector<std::vector<std::string>> read_csv_rows(std::string_view text);

}  // namespace mixmetric
