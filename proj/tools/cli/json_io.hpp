#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <bergman/carleson.hpp>
#include <bergman/condexp.hpp>
#include <bergman/lattice.hpp>
#include <bergman/measure.hpp>
#include <bergman/operators.hpp>

#include "json.hpp"

namespace bergman::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// A value inside a parsed config together with its JSON pointer. Every
/// accessor throws ConfigError naming the pointer of the offending value.
class Node {
 public:
  Node(const Json& value, std::string pointer) : value_(&value), pointer_(std::move(pointer)) {}

  const Json& json() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  [[noreturn]] void fail(const std::string& message) const;

  bool has(std::string_view key) const;
  Node at(std::string_view key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;

  /// Rejects keys outside `allowed`; requires an object.
  void allow_only(std::initializer_list<std::string_view> allowed) const;

  double as_number() const;
  int as_int() const;
  bool as_bool() const;
  std::string as_string() const;

  double number(std::string_view key) const { return at(key).as_number(); }
  double number_or(std::string_view key, double fallback) const;
  int int_or(std::string_view key, int fallback) const;
  bool bool_or(std::string_view key, bool fallback) const;
  std::string string_or(std::string_view key, std::string fallback) const;

 private:
  const Json* value_;
  std::string pointer_;
};

/// [re, im] or a plain real number.
Complex read_complex(const Node& n);
DiskPoint read_point(const Node& n);
/// Coefficient list, constant term first.
Polynomial read_polynomial(const Node& n);
Measure read_measure(const Node& n);
AnalyticSelfMap read_map(const Node& n);
GridSpec read_grid(const Node& n);
QuadratureConfig read_quadrature(const Node& n);
FamilySpec read_family(const Node& n);

OrderedJson write_complex(Complex z);
OrderedJson write_polynomial(const Polynomial& p);
OrderedJson write_measure(const Measure& mu);
OrderedJson write_map(const AnalyticSelfMap& phi);
OrderedJson write_grid(const GridSpec& g);
OrderedJson write_quadrature(const QuadratureConfig& q);
OrderedJson write_family(const FamilySpec& f);
OrderedJson write_growth(const GrowthDiagnostics& g);
OrderedJson write_report(const CarlesonReport& rep);

}  // namespace bergman::cli
