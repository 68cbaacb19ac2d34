#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <bergman/errors.hpp>

namespace bergman::cli {
namespace {

std::string escape_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

const char* type_name(const Json& j) { return j.type_name(); }

OrderedJson number_or_null(double x) { return std::isfinite(x) ? OrderedJson(x) : OrderedJson(nullptr); }

}  // namespace

void Node::fail(const std::string& message) const {
  throw ConfigError((pointer_.empty() ? std::string("/") : pointer_) + ": " + message);
}

bool Node::has(std::string_view key) const { return value_->is_object() && value_->contains(std::string(key)); }

Node Node::at(std::string_view key) const {
  if (!value_->is_object()) fail(std::string("expected an object, got ") + type_name(*value_));
  const auto it = value_->find(std::string(key));
  if (it == value_->end()) fail("missing required field \"" + std::string(key) + "\"");
  return Node(*it, pointer_ + "/" + escape_token(key));
}

Node Node::at(std::size_t index) const {
  if (!value_->is_array()) fail(std::string("expected an array, got ") + type_name(*value_));
  if (index >= value_->size()) fail("index " + std::to_string(index) + " out of range");
  return Node((*value_)[index], pointer_ + "/" + std::to_string(index));
}

std::size_t Node::size() const {
  if (!value_->is_array()) fail(std::string("expected an array, got ") + type_name(*value_));
  return value_->size();
}

void Node::allow_only(std::initializer_list<std::string_view> allowed) const {
  if (!value_->is_object()) fail(std::string("expected an object, got ") + type_name(*value_));
  for (const auto& [key, _] : value_->items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      Node(*value_, pointer_ + "/" + escape_token(key)).fail("unknown field \"" + key + "\"");
  }
}

double Node::as_number() const {
  if (!value_->is_number()) fail(std::string("expected a number, got ") + type_name(*value_));
  return value_->get<double>();
}

int Node::as_int() const {
  if (!value_->is_number_integer()) fail(std::string("expected an integer, got ") + type_name(*value_));
  return value_->get<int>();
}

bool Node::as_bool() const {
  if (!value_->is_boolean()) fail(std::string("expected a boolean, got ") + type_name(*value_));
  return value_->get<bool>();
}

std::string Node::as_string() const {
  if (!value_->is_string()) fail(std::string("expected a string, got ") + type_name(*value_));
  return value_->get<std::string>();
}

double Node::number_or(std::string_view key, double fallback) const {
  return has(key) ? at(key).as_number() : fallback;
}
int Node::int_or(std::string_view key, int fallback) const { return has(key) ? at(key).as_int() : fallback; }
bool Node::bool_or(std::string_view key, bool fallback) const { return has(key) ? at(key).as_bool() : fallback; }
std::string Node::string_or(std::string_view key, std::string fallback) const {
  return has(key) ? at(key).as_string() : fallback;
}

Complex read_complex(const Node& n) {
  if (n.json().is_number()) return {n.as_number(), 0.0};
  if (!n.json().is_array() || n.size() != 2) n.fail("expected a number or an [re, im] pair");
  return {n.at(std::size_t{0}).as_number(), n.at(std::size_t{1}).as_number()};
}

DiskPoint read_point(const Node& n) {
  const Complex z = read_complex(n);
  try {
    return DiskPoint(z);
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

Polynomial read_polynomial(const Node& n) {
  std::vector<Complex> c(n.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = read_complex(n.at(i));
  return Polynomial(std::move(c));
}

Measure read_measure(const Node& n) {
  const std::string type = n.at("type").as_string();
  try {
    if (type == "area") {
      n.allow_only({"type", "alpha", "scale"});
      return WeightedArea{n.number_or("alpha", 0.0), n.number_or("scale", 1.0)};
    }
    if (type == "radial") {
      n.allow_only({"type", "gamma", "scale"});
      return RadialDensity{n.number("gamma"), n.number_or("scale", 1.0)};
    }
    if (type == "polyweighted") {
      n.allow_only({"type", "u", "p", "beta", "scale"});
      return PolyWeighted{read_polynomial(n.at("u")), n.number_or("p", 2.0), n.number_or("beta", 0.0),
                          n.number_or("scale", 1.0)};
    }
    if (type == "atomic") {
      n.allow_only({"type", "atoms"});
      const Node list = n.at("atoms");
      Atomic m;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const Node a = list.at(i);
        a.allow_only({"point", "mass"});
        m.atoms.push_back({read_point(a.at("point")), a.number("mass")});
      }
      return m;
    }
    if (type == "sum") {
      n.allow_only({"type", "parts"});
      const Node list = n.at("parts");
      SumMeasure m;
      for (std::size_t i = 0; i < list.size(); ++i) m.parts.push_back(read_measure(list.at(i)));
      return m;
    }
    if (type == "grid") {
      n.allow_only({"type", "alpha", "n_radial", "n_angular", "values"});
      const int nr = n.at("n_radial").as_int();
      const int na = n.at("n_angular").as_int();
      if (nr < 1 || na < 1) n.fail("grid sizes must be positive");
      const Node list = n.at("values");
      if (list.size() != static_cast<std::size_t>(nr) * na)
        list.fail("expected n_radial * n_angular = " + std::to_string(nr * na) + " values");
      GridDensity g;
      g.rule = std::make_shared<const QuadratureRule>(n.number_or("alpha", 0.0), nr, na);
      g.values.resize(list.size());
      for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = list.at(i).as_number();
      return g;
    }
  } catch (const ConfigError& e) {
    // Re-anchor validation errors raised by the measure constructors.
    const std::string what = e.what();
    if (!what.empty() && what[0] == '/') throw;
    n.fail(what);
  }
  n.at("type").fail("unknown measure type \"" + type + "\"");
}

AnalyticSelfMap read_map(const Node& n) {
  const std::string type = n.at("type").as_string();
  try {
    if (type == "identity") {
      n.allow_only({"type"});
      return IdentityMap{};
    }
    if (type == "monomial") {
      n.allow_only({"type", "n"});
      return MonomialMap{n.at("n").as_int()};
    }
    if (type == "blaschke") {
      n.allow_only({"type", "zeros"});
      const Node list = n.at("zeros");
      BlaschkeProduct b;
      for (std::size_t i = 0; i < list.size(); ++i) b.zeros.push_back(read_point(list.at(i)));
      return b;
    }
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (!what.empty() && what[0] == '/') throw;
    n.fail(what);
  }
  n.at("type").fail("unknown map type \"" + type + "\"");
}

GridSpec read_grid(const Node& n) {
  n.allow_only({"min_level", "max_level", "n_theta", "refine"});
  GridSpec g;
  g.min_level = n.int_or("min_level", g.min_level);
  g.max_level = n.int_or("max_level", g.max_level);
  g.n_theta = n.int_or("n_theta", g.n_theta);
  g.refine = n.bool_or("refine", g.refine);
  try {
    g.validate();
  } catch (const ConfigError& e) {
    n.fail(e.what());
  }
  return g;
}

QuadratureConfig read_quadrature(const Node& n) {
  n.allow_only({"n_radial", "n_angular", "n_disk_radial", "n_disk_angular", "angular_margin",
                "max_angular_doublings"});
  QuadratureConfig q;
  q.n_radial = n.int_or("n_radial", q.n_radial);
  q.n_angular = n.int_or("n_angular", q.n_angular);
  q.n_disk_radial = n.int_or("n_disk_radial", q.n_disk_radial);
  q.n_disk_angular = n.int_or("n_disk_angular", q.n_disk_angular);
  q.angular_margin = n.number_or("angular_margin", q.angular_margin);
  q.max_angular_doublings = n.int_or("max_angular_doublings", q.max_angular_doublings);
  try {
    q.validate();
  } catch (const ConfigError& e) {
    n.fail(e.what());
  }
  return q;
}

FamilySpec read_family(const Node& n) {
  n.allow_only({"kernels", "random_count", "random_degree", "seed", "explicit"});
  FamilySpec f;
  f.kernels = n.bool_or("kernels", f.kernels);
  f.random_count = n.int_or("random_count", f.random_count);
  f.random_degree = n.int_or("random_degree", f.random_degree);
  if (n.has("seed")) {
    const Node s = n.at("seed");
    if (!s.json().is_number_unsigned() && !(s.json().is_number_integer() && s.json().get<long long>() >= 0))
      s.fail("expected a nonnegative integer");
    f.seed = s.json().get<std::uint64_t>();
  }
  if (f.random_count < 0) n.at("random_count").fail("must be nonnegative");
  if (f.random_degree < 0) n.at("random_degree").fail("must be nonnegative");
  if (n.has("explicit")) {
    const Node list = n.at("explicit");
    for (std::size_t i = 0; i < list.size(); ++i) f.explicit_polynomials.push_back(read_polynomial(list.at(i)));
  }
  return f;
}

OrderedJson write_complex(Complex z) { return OrderedJson::array({z.real(), z.imag()}); }

OrderedJson write_polynomial(const Polynomial& p) {
  OrderedJson out = OrderedJson::array();
  for (int k = 0; k <= p.degree(); ++k) out.push_back(write_complex(p[k]));
  return out;
}

OrderedJson write_measure(const Measure& mu) {
  OrderedJson out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WeightedArea>) {
          out["type"] = "area";
          out["alpha"] = m.alpha;
          out["scale"] = m.scale;
        } else if constexpr (std::is_same_v<T, RadialDensity>) {
          out["type"] = "radial";
          out["gamma"] = m.gamma;
          out["scale"] = m.scale;
        } else if constexpr (std::is_same_v<T, PolyWeighted>) {
          out["type"] = "polyweighted";
          out["u"] = write_polynomial(m.u);
          out["p"] = m.p;
          out["beta"] = m.beta;
          out["scale"] = m.scale;
        } else if constexpr (std::is_same_v<T, Atomic>) {
          out["type"] = "atomic";
          out["atoms"] = OrderedJson::array();
          for (const auto& a : m.atoms) {
            OrderedJson atom;
            atom["point"] = write_complex(a.point);
            atom["mass"] = a.mass;
            out["atoms"].push_back(atom);
          }
        } else if constexpr (std::is_same_v<T, SumMeasure>) {
          out["type"] = "sum";
          out["parts"] = OrderedJson::array();
          for (const auto& part : m.parts) out["parts"].push_back(write_measure(part));
        } else {
          out["type"] = "grid";
          out["alpha"] = m.rule->alpha();
          out["n_radial"] = m.rule->n_radial();
          out["n_angular"] = m.rule->n_angular();
          out["values"] = m.values;
        }
      },
      mu.variant());
  return out;
}

OrderedJson write_map(const AnalyticSelfMap& phi) {
  OrderedJson out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IdentityMap>) {
          out["type"] = "identity";
        } else if constexpr (std::is_same_v<T, MonomialMap>) {
          out["type"] = "monomial";
          out["n"] = m.n;
        } else {
          out["type"] = "blaschke";
          out["zeros"] = OrderedJson::array();
          for (const auto& z : m.zeros) out["zeros"].push_back(write_complex(z));
        }
      },
      phi.variant());
  return out;
}

OrderedJson write_grid(const GridSpec& g) {
  OrderedJson out;
  out["min_level"] = g.min_level;
  out["max_level"] = g.max_level;
  out["n_theta"] = g.n_theta;
  out["refine"] = g.refine;
  return out;
}

OrderedJson write_quadrature(const QuadratureConfig& q) {
  OrderedJson out;
  out["n_radial"] = q.n_radial;
  out["n_angular"] = q.n_angular;
  out["n_disk_radial"] = q.n_disk_radial;
  out["n_disk_angular"] = q.n_disk_angular;
  out["angular_margin"] = q.angular_margin;
  out["max_angular_doublings"] = q.max_angular_doublings;
  return out;
}

OrderedJson write_family(const FamilySpec& f) {
  OrderedJson out;
  out["kernels"] = f.kernels;
  out["random_count"] = f.random_count;
  out["random_degree"] = f.random_degree;
  out["seed"] = f.seed;
  out["explicit"] = OrderedJson::array();
  for (const auto& p : f.explicit_polynomials) out["explicit"].push_back(write_polynomial(p));
  return out;
}

OrderedJson write_growth(const GrowthDiagnostics& g) {
  OrderedJson out;
  out["gaps"] = OrderedJson::array();
  for (double x : g.gaps) out["gaps"].push_back(number_or_null(x));
  out["values"] = OrderedJson::array();
  for (double x : g.values) out["values"].push_back(number_or_null(x));
  out["slope"] = number_or_null(g.slope);
  out["divergent"] = g.divergent;
  return out;
}

OrderedJson write_report(const CarlesonReport& rep) {
  OrderedJson out;
  out["verdict"] = rep.verdict;
  out["complete"] = rep.complete;
  out["failures"] = rep.failures;
  out["measure"] = rep.measure;
  out["map"] = rep.map;
  out["p"] = rep.params.p;
  out["alpha"] = rep.params.alpha;
  out["r"] = rep.r;
  out["epsilon"] = rep.epsilon;
  out["mode"] = to_string(rep.mode);
  OrderedJson constants;
  constants["C1"] = number_or_null(rep.c1);
  constants["C2"] = number_or_null(rep.c2);
  constants["C2_normalized"] = number_or_null(rep.c2_normalized);
  constants["C3"] = number_or_null(rep.c3);
  out["constants"] = constants;
  OrderedJson ratios;
  ratios["C1/C2_normalized"] = number_or_null(rep.ratio_c1_c2);
  ratios["C1/C3"] = number_or_null(rep.ratio_c1_c3);
  ratios["C2_normalized/C3"] = number_or_null(rep.ratio_c2_c3);
  ratios["max_pairwise"] = number_or_null(rep.max_pairwise_ratio());
  out["ratios"] = ratios;
  OrderedJson argmax;
  argmax["C1"] = rep.c1_worst;
  argmax["C2"] = write_complex(rep.c2_argmax);
  argmax["C3"] = write_complex(rep.c3_argmax);
  out["argmax"] = argmax;
  OrderedJson growth;
  growth["C1"] = write_growth(rep.c1_growth);
  growth["C2"] = write_growth(rep.c2_growth);
  growth["C3"] = write_growth(rep.c3_growth);
  out["divergence"] = growth;
  OrderedJson lattice;
  lattice["size"] = rep.lattice_size;
  lattice["overlap_bound"] = rep.lattice_overlap;
  lattice["kernel_sum"] = number_or_null(rep.lattice_kernel_sum);
  out["lattice"] = lattice;
  return out;
}

}  // namespace bergman::cli
