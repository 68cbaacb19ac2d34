#include "commands.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <sstream>

#include <bergman/errors.hpp>
#include <bergman/parallel.hpp>

#ifndef BERGMAN_VERSION
#define BERGMAN_VERSION "unknown"
#endif

namespace bergman::cli {
namespace {

OrderedJson num(double x) { return std::isfinite(x) ? OrderedJson(x) : OrderedJson(nullptr); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridSpec resolve_grid(const Node& config, const Overrides& o) {
  GridSpec g = config.has("grid") ? read_grid(config.at("grid")) : GridSpec{};
  if (o.grid_levels) {
    g.max_level = *o.grid_levels;
    g.min_level = std::min(g.min_level, g.max_level);
    g.validate();
  }
  return g;
}

FamilySpec resolve_family(const Node& config, const Overrides& o) {
  FamilySpec f = config.has("family") ? read_family(config.at("family")) : FamilySpec{};
  if (o.seed) f.seed = *o.seed;
  return f;
}

QuadratureConfig resolve_quadrature(const Node& config) {
  return config.has("quadrature") ? read_quadrature(config.at("quadrature")) : QuadratureConfig{};
}

SymmetryMode resolve_mode(const Node& config, const Overrides& o) {
  if (o.mode) return parse_symmetry_mode(*o.mode);
  if (!config.has("mode")) return SymmetryMode::Unconditional;
  const Node n = config.at("mode");
  try {
    return parse_symmetry_mode(n.as_string());
  } catch (const ConfigError& e) {
    n.fail(e.what());
  }
}

SpaceParams read_params(const Node& config, const char* p_key, const char* alpha_key, double alpha_default) {
  SpaceParams sp;
  sp.p = config.number_or(p_key, 2.0);
  sp.alpha = config.number_or(alpha_key, alpha_default);
  try {
    sp.validate();
  } catch (const ConfigError& e) {
    config.fail(e.what());
  }
  return sp;
}

OrderedJson write_point_list(const std::vector<DiskPoint>& pts) {
  OrderedJson out = OrderedJson::array();
  for (const auto& z : pts) out.push_back(write_complex(z));
  return out;
}

OrderedJson write_criterion(const CriterionResult& c) {
  OrderedJson out;
  out["sup"] = num(c.sup);
  out["argmax"] = write_complex(c.argmax);
  out["divergence"] = write_growth(c.growth);
  out["bounded"] = c.bounded();
  return out;
}

}  // namespace

CommandResult run_geom(const Node& config, const Overrides&) {
  config.allow_only({"a", "z", "r", "p", "alpha"});
  const DiskPoint a = read_point(config.at("a"));
  const DiskPoint z = read_point(config.at("z"));
  const double r = config.number_or("r", 1.0);
  if (!(r > 0.0)) config.at("r").fail("r must be positive");
  const SpaceParams sp = read_params(config, "p", "alpha", 0.0);

  CommandResult out;
  out.config["a"] = write_complex(a);
  out.config["z"] = write_complex(z);
  out.config["r"] = r;
  out.config["p"] = sp.p;
  out.config["alpha"] = sp.alpha;

  auto& res = out.result;
  res["mobius"] = write_complex(mobius(a, z));
  res["mobius_derivative"] = write_complex(mobius_derivative(a, z));
  res["pseudo_distance"] = pseudo_distance(a, z);
  res["bergman_distance"] = bergman_distance(a, z);
  const EuclideanDisk d = bergman_disk(a, r);
  const KernelExtrema ext = kernel_extrema_on_disk(a, r);
  OrderedJson disk;
  disk["s"] = std::tanh(r);
  disk["center"] = write_complex(d.center);
  disk["radius"] = d.radius;
  disk["area"] = disk_area(a, r);
  disk["kernel_inf"] = ext.inf;
  disk["kernel_sup"] = ext.sup;
  disk["contains_z"] = d.contains(z);
  res["disk"] = disk;
  res["normalized_kernel"] = write_complex(normalized_kernel(a, z));
  res["weighted_kernel"] = write_complex(weighted_kernel(a, z, sp.alpha));
  res["test_function"] = write_complex(test_function(a, z, sp));
  res["berezin_weight"] = berezin_weight(a, z, 2.0 + sp.alpha);
  res["pointwise_bound"] = pointwise_bound(1.0, z, sp);
  return out;
}

CommandResult run_lattice(const Node& config, const Overrides&) {
  config.allow_only({"r", "epsilon", "cover_samples", "overlap_samples"});
  const double r = config.number_or("r", 1.0);
  const double eps = config.number_or("epsilon", 0.01);
  const int cover_samples = config.int_or("cover_samples", 100000);
  const int overlap_samples = config.int_or("overlap_samples", kOverlapSamples);
  if (cover_samples < 1) config.at("cover_samples").fail("must be positive");
  if (overlap_samples < 1) config.at("overlap_samples").fail("must be positive");

  CommandResult out;
  out.config["r"] = r;
  out.config["epsilon"] = eps;
  out.config["cover_samples"] = cover_samples;
  out.config["overlap_samples"] = overlap_samples;

  HyperbolicLattice lat;
  try {
    lat = build_lattice(r, eps, overlap_samples);
  } catch (const ConfigError& e) {
    config.fail(e.what());
  }
  const CoverReport cover = verify_cover(lat, cover_samples);
  const double sep = min_separation(lat);

  auto& res = out.result;
  res["size"] = lat.size();
  res["shells"] = lat.shell_count();
  res["motif_size"] = lat.motif_size;
  res["overlap_bound"] = lat.overlap_bound;
  res["overlap_truncated"] = measure_overlap(lat, overlap_samples);
  res["min_separation"] = sep;
  res["separation_ok"] = sep >= r / 2 - kGeometryTol;
  res["quarter_disks_disjoint"] = quarter_disks_disjoint(lat);
  OrderedJson c;
  c["samples"] = cover.samples;
  c["uncovered"] = cover.uncovered.size();
  c["ok"] = cover.ok();
  res["cover"] = c;
  res["kernel_sum"] = lattice_kernel_sum(lat);
  const bool ok = cover.ok() && res["separation_ok"].get<bool>();
  res["verdict"] = ok ? "certified" : "failed";

  OrderedJson pts = OrderedJson::array();
  for (const auto& z : lat.points) {
    OrderedJson p;
    p["re"] = z.re();
    p["im"] = z.im();
    pts.push_back(p);
  }
  out.artifacts.push_back({"lattice.json", pts.dump(1) + "\n"});
  out.exit_code = ok ? kExitOk : kExitNegative;
  return out;
}

CommandResult run_condexp(const Node& config, const Overrides&) {
  config.allow_only({"map", "f", "points"});
  const AnalyticSelfMap phi = config.has("map") ? read_map(config.at("map")) : AnalyticSelfMap{};
  const Polynomial f = read_polynomial(config.at("f"));
  const Node list = config.at("points");
  std::vector<DiskPoint> pts;
  for (std::size_t i = 0; i < list.size(); ++i) pts.push_back(read_point(list.at(i)));

  CommandResult out;
  out.config["map"] = write_map(phi);
  out.config["f"] = write_polynomial(f);
  out.config["points"] = write_point_list(pts);

  std::optional<Polynomial> closed;
  if (const auto* m = std::get_if<MonomialMap>(&phi.variant())) closed = cond_expect_poly(m->n, f);

  auto& res = out.result;
  res["map"] = phi.describe();
  res["analytic_image"] = !std::holds_alternative<BlaschkeProduct>(phi.variant());
  if (closed) res["closed_form"] = write_polynomial(*closed);
  res["values"] = OrderedJson::array();
  bool failed = false;
  for (const auto& z : pts) {
    OrderedJson e;
    e["z"] = write_complex(z);
    e["phi"] = write_complex(phi(z));
    try {
      const LevelSet ls = level_set(phi, z);
      e["level_set"] = write_point_list(ls.points);
      e["weights"] = ls.weights;
      OrderedJson rej = OrderedJson::array();
      for (const auto& rp : ls.rejected) {
        OrderedJson j;
        j["point"] = write_complex(rp.point);
        j["reason"] = rp.reason;
        rej.push_back(j);
      }
      e["rejected"] = rej;
      e["E_f"] = write_complex(average(ls, [&](Complex w) { return f(w); }));
      if (closed) e["E_f_closed_form"] = write_complex((*closed)(z));
    } catch (const Error& err) {
      e["error"] = err.what();
      failed = true;
    }
    res["values"].push_back(e);
  }
  out.exit_code = failed ? kExitError : kExitOk;
  return out;
}

CommandResult run_psi(const Node& config, const Overrides&) {
  config.allow_only({"measure", "alpha", "t", "n_radii", "n_theta", "quadrature"});
  const Measure mu = read_measure(config.at("measure"));
  const double alpha = config.number_or("alpha", 0.0);
  if (!(alpha > -1.0)) config.at("alpha").fail("alpha must exceed -1");
  const double t = config.number_or("t", 2.0 + alpha);
  if (!(t > 0.0)) config.at("t").fail("t must be positive");
  const int n_radii = config.int_or("n_radii", 100);
  const int n_theta = config.int_or("n_theta", 32);
  if (n_radii < 1) config.at("n_radii").fail("must be positive");
  if (n_theta < 1) config.at("n_theta").fail("must be positive");
  const QuadratureConfig qc = resolve_quadrature(config);

  CommandResult out;
  out.config["measure"] = write_measure(mu);
  out.config["alpha"] = alpha;
  out.config["t"] = t;
  out.config["n_radii"] = n_radii;
  out.config["n_theta"] = n_theta;
  out.config["quadrature"] = write_quadrature(qc);

  // Polar grid: radius i / n_radii, i = 0 .. n_radii - 1, one node at the origin.
  std::vector<DiskPoint> pts{DiskPoint(0.0)};
  std::vector<std::pair<double, double>> polar{{0.0, 0.0}};
  for (int i = 1; i < n_radii; ++i) {
    const double radius = static_cast<double>(i) / n_radii;
    for (int k = 0; k < n_theta; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / n_theta;
      pts.emplace_back(std::polar(radius, theta));
      polar.emplace_back(radius, theta);
    }
  }
  const Integrator integ(qc);
  std::vector<double> values(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) { values[k] = psi_transform(integ, mu, pts[k], alpha, t); });

  std::ostringstream csv;
  csv << "re,im,radius,theta,psi\n";
  std::size_t best = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (values[k] > values[best]) best = k;
    csv << fmt(pts[k].re()) << ',' << fmt(pts[k].im()) << ',' << fmt(polar[k].first) << ','
        << fmt(polar[k].second) << ',' << fmt(values[k]) << '\n';
  }
  out.artifacts.push_back({"psi_heatmap.csv", csv.str()});
  out.result["points"] = pts.size();
  out.result["max"] = num(values[best]);
  out.result["argmax"] = write_complex(pts[best]);
  out.result["at_origin"] = num(values[0]);
  return out;
}

CommandResult run_carleson_check(const Node& config, const Overrides& o) {
  config.allow_only({"measure", "p", "alpha", "r", "map", "epsilon", "mode", "grid", "family", "quadrature",
                     "overlap_samples"});
  const Measure mu = read_measure(config.at("measure"));
  const SpaceParams sp = read_params(config, "p", "alpha", 0.0);
  const double r = config.number_or("r", 1.0);
  if (!(r > 0.0 && r <= 1.0)) config.at("r").fail("r must lie in (0, 1]");
  const AnalyticSelfMap phi = config.has("map") ? read_map(config.at("map")) : AnalyticSelfMap{};
  CertifyConfig cc;
  cc.grid = resolve_grid(config, o);
  cc.family = resolve_family(config, o);
  cc.mode = resolve_mode(config, o);
  cc.overlap_samples = config.int_or("overlap_samples", cc.overlap_samples);
  if (cc.overlap_samples < 1) config.at("overlap_samples").fail("must be positive");
  if (config.has("epsilon")) {
    cc.epsilon = config.number("epsilon");
    if (!(*cc.epsilon > 0.0 && *cc.epsilon < 1.0)) config.at("epsilon").fail("epsilon must lie in (0, 1)");
  }
  const QuadratureConfig qc = resolve_quadrature(config);

  CommandResult out;
  out.config["measure"] = write_measure(mu);
  out.config["p"] = sp.p;
  out.config["alpha"] = sp.alpha;
  out.config["r"] = r;
  out.config["map"] = write_map(phi);
  out.config["epsilon"] = cc.epsilon.value_or(cc.grid.finest_gap());
  out.config["mode"] = to_string(cc.mode);
  out.config["grid"] = write_grid(cc.grid);
  out.config["family"] = write_family(cc.family);
  out.config["quadrature"] = write_quadrature(qc);
  out.config["overlap_samples"] = cc.overlap_samples;

  const Integrator integ(qc);
  const CarlesonReport rep = certify(integ, mu, sp, r, phi, cc);
  out.result = write_report(rep);
  out.exit_code = rep.verdict == "Carleson" ? kExitOk : rep.verdict == "not-Carleson" ? kExitNegative : kExitError;
  return out;
}

CommandResult run_opnorm(const Node& config, const Overrides& o) {
  config.allow_only({"operator", "grid", "family", "quadrature", "commutation_probe"});
  const Node opn = config.at("operator");
  opn.allow_only({"u", "map", "p", "alpha", "beta"});
  WeightedCondExpOperator op;
  op.u = read_polynomial(opn.at("u"));
  op.phi = opn.has("map") ? read_map(opn.at("map")) : AnalyticSelfMap{};
  op.source = read_params(opn, "p", "alpha", 0.0);
  op.target = op.source;
  op.target.alpha = opn.number_or("beta", op.source.alpha);
  try {
    op.validate();
  } catch (const ConfigError& e) {
    opn.fail(e.what());
  }
  const GridSpec grid = resolve_grid(config, o);
  const FamilySpec family = resolve_family(config, o);
  const QuadratureConfig qc = resolve_quadrature(config);
  const bool probe = config.bool_or("commutation_probe", false);
  if (probe && !std::holds_alternative<MonomialMap>(op.phi.variant()))
    config.at("commutation_probe").fail("the commutation probe needs a monomial map");

  CommandResult out;
  OrderedJson echo;
  echo["u"] = write_polynomial(op.u);
  echo["map"] = write_map(op.phi);
  echo["p"] = op.source.p;
  echo["alpha"] = op.source.alpha;
  echo["beta"] = op.target.alpha;
  out.config["operator"] = echo;
  out.config["grid"] = write_grid(grid);
  out.config["family"] = write_family(family);
  out.config["quadrature"] = write_quadrature(qc);
  out.config["commutation_probe"] = probe;

  const Integrator integ(qc);
  const OpNormEstimate est = opnorm_estimate(integ, op, family, grid);
  const CriterionResult crit = boundedness_criterion(integ, op, grid);

  auto& res = out.result;
  const bool bounded = crit.bounded();
  res["verdict"] = bounded ? "bounded" : "divergent";
  res["analytic_image"] = op.analytic_image();
  OrderedJson norm;
  norm["lower_bound"] = num(est.norm);
  norm["lower_bound_p"] = num(est.norm_p);
  norm["worst"] = est.worst;
  norm["family_size"] = est.family_size;
  norm["divergence"] = write_growth(est.growth);
  res["opnorm"] = norm;
  res["criterion"] = write_criterion(crit);
  res["agreement"] = est.growth.divergent == crit.growth.divergent;
  res["norm_p_over_criterion"] = crit.sup > 0.0 ? num(est.norm_p / crit.sup) : OrderedJson(nullptr);
  if (probe) {
    const std::vector<DiskPoint> pts{DiskPoint(0.3), DiskPoint(Complex(-0.2, 0.45)), DiskPoint(Complex(0.1, -0.6))};
    res["commutation_defect"] =
        commutation_defect(integ, op.phi, op.source.alpha, random_polynomials(4, 4, family.seed), pts);
  }
  out.exit_code = bounded ? kExitOk : kExitNegative;
  return out;
}

CommandResult run_mult_criterion(const Node& config, const Overrides& o) {
  config.allow_only({"u", "p", "q", "alpha", "beta", "grid", "quadrature"});
  const Polynomial u = read_polynomial(config.at("u"));
  const double p = config.number_or("p", 2.0);
  const double q = config.number_or("q", p);
  const double alpha = config.number_or("alpha", 0.0);
  const double beta = config.number_or("beta", alpha);
  const GridSpec grid = resolve_grid(config, o);
  const QuadratureConfig qc = resolve_quadrature(config);

  CommandResult out;
  out.config["u"] = write_polynomial(u);
  out.config["p"] = p;
  out.config["q"] = q;
  out.config["alpha"] = alpha;
  out.config["beta"] = beta;
  out.config["grid"] = write_grid(grid);
  out.config["quadrature"] = write_quadrature(qc);

  const Integrator integ(qc);
  CriterionResult crit;
  try {
    crit = multiplication_criterion(integ, u, p, q, alpha, beta, grid);
  } catch (const ConfigError& e) {
    config.fail(e.what());
  }
  out.result["verdict"] = crit.bounded() ? "bounded" : "divergent";
  out.result["exponent"] = (2.0 + alpha) * q / p;
  out.result["criterion"] = write_criterion(crit);
  out.exit_code = crit.bounded() ? kExitOk : kExitNegative;
  return out;
}

CommandResult run_suite(const Node& config, const Overrides& o, const std::string& base_dir) {
  config.allow_only({"expectations", "grid", "quadrature", "cases"});
  const std::string exp_name = config.string_or("expectations", "suite_expectations.json");
  std::filesystem::path exp_path(exp_name);
  if (exp_path.is_relative()) exp_path = std::filesystem::path(base_dir) / exp_path;

  Json expectations;
  {
    std::ifstream in(exp_path);
    if (!in) config.at("expectations").fail("cannot open " + exp_path.string());
    try {
      expectations = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(exp_path.string() + ": " + e.what());
    }
  }
  const Node exp_root(expectations, "");
  exp_root.allow_only({"cases"});
  const Node expected = exp_root.at("cases");

  const Node cases = config.at("cases");
  CommandResult out;
  out.config["expectations"] = exp_name;
  out.config["cases"] = OrderedJson::array();
  out.result["cases"] = OrderedJson::array();
  int mismatches = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Node c = cases.at(i);
    c.allow_only({"name", "command", "config"});
    const std::string name = c.at("name").as_string();
    const std::string command = c.at("command").as_string();
    if (command == "suite") c.at("command").fail("suites cannot nest");
    // Suite-wide grid and quadrature apply unless the case sets its own.
    Json merged = c.at("config").json();
    if (!merged.is_object()) c.at("config").fail("expected an object");
    for (const char* key : {"grid", "quadrature"}) {
      if (config.has(key) && !merged.contains(key) && command != "geom" && command != "lattice" &&
          command != "condexp" && !(command == "psi" && std::string(key) == "grid"))
        merged[key] = config.at(key).json();
    }
    const CommandResult r = run_command(command, Node(merged, c.at("config").pointer()), o, base_dir);

    std::string verdict = r.result.contains("verdict") ? r.result["verdict"].get<std::string>() : "completed";
    std::string want = expected.has(name) ? expected.at(name).as_string() : "";
    const bool match = verdict == want;
    mismatches += !match;

    OrderedJson echo;
    echo["name"] = name;
    echo["command"] = command;
    echo["config"] = r.config;
    out.config["cases"].push_back(echo);

    OrderedJson entry;
    entry["name"] = name;
    entry["command"] = command;
    entry["verdict"] = verdict;
    entry["expected"] = want.empty() ? OrderedJson(nullptr) : OrderedJson(want);
    entry["match"] = match;
    entry["exit_code"] = r.exit_code;
    entry["result"] = r.result;
    out.result["cases"].push_back(entry);
  }
  out.result["mismatches"] = mismatches;
  out.result["verdict"] = mismatches == 0 ? "pass" : "fail";
  out.exit_code = mismatches == 0 ? kExitOk : kExitError;
  return out;
}

CommandResult run_command(const std::string& name, const Node& config, const Overrides& o,
                          const std::string& base_dir) {
  if (name == "geom") return run_geom(config, o);
  if (name == "lattice") return run_lattice(config, o);
  if (name == "condexp") return run_condexp(config, o);
  if (name == "psi") return run_psi(config, o);
  if (name == "carleson") return run_carleson_check(config, o);
  if (name == "opnorm") return run_opnorm(config, o);
  if (name == "mult-criterion") return run_mult_criterion(config, o);
  if (name == "suite") return run_suite(config, o, base_dir);
  throw ConfigError("unknown command \"" + name + "\"");
}

OrderedJson make_report(const std::string& command, const CommandResult& r) {
  OrderedJson doc;
  doc["tool"] = {{"name", "bergman"}, {"version", BERGMAN_VERSION}};
  doc["command"] = command;
  doc["config"] = r.config;
  doc["result"] = r.result;
  doc["exit_code"] = r.exit_code;
  OrderedJson files = OrderedJson::array();
  for (const auto& a : r.artifacts) files.push_back(a.name);
  doc["artifacts"] = files;
  return doc;
}

}  // namespace bergman::cli
