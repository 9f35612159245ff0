#include "report.hh"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "dense.hh"
#include "errors.hh"
#include "fit.hh"
#include "grid.hh"
#include "heat.hh"
#include "potential.hh"
#include "resolvent.hh"
#include "schechter.hh"
#include "svg.hh"
#include "symbol.hh"
#include "t_operator.hh"

namespace sh {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn10 = 2.30258509299404568;

std::string fmt(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

// JSON has no infinities; they come out as strings.
json jnum(double x) {
  if (std::isfinite(x)) return json(x);
  return json(x > 0 ? "inf" : "-inf");
}

json jarr(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

void atomic_write(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io_error, "report: cannot open " + tmp);
    out.write(body.data(), std::streamsize(body.size()));
    out.flush();
    require(out.good(), ErrorCode::io_error, "report: write failed for " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::io_error,
          "report: rename failed for " + path);
}

// ---- config pieces ----

GridSpec parse_grid(const Config& cfg) {
  return make_grid(cfg.get_int("grid", "n"), cfg.get_double("grid", "r_box"),
                   cfg.get_long("grid", "npoints"));
}

EllipticSymbol parse_symbol(const Config& cfg, int n) {
  const int m = cfg.get_int("symbol", "m");
  std::map<MultiIndex, double> coeffs;
  for (const auto& key : cfg.keys("symbol")) {
    if (key == "m") continue;
    require(key.rfind("c_", 0) == 0, ErrorCode::config_error,
            "symbol: unknown key '" + key + "' (coefficients are c_<e1>[_<e2>[_<e3>]])");
    MultiIndex mi{0, 0, 0};
    int count = 0, total = 0;
    std::istringstream in(key.substr(2));
    std::string tok;
    while (std::getline(in, tok, '_')) {
      require(count < 3 && !tok.empty(), ErrorCode::config_error,
              "symbol: bad coefficient key '" + key + "'");
      for (char c : tok)
        require(std::isdigit(static_cast<unsigned char>(c)), ErrorCode::config_error,
                "symbol: bad coefficient key '" + key + "'");
      mi[std::size_t(count)] = std::stoi(tok);
      total += mi[std::size_t(count)];
      ++count;
    }
    require(count == n, ErrorCode::config_error,
            "symbol: coefficient '" + key + "' needs one exponent per axis");
    require(total == 2 * m, ErrorCode::config_error,
            "symbol: coefficient '" + key + "' is not homogeneous of order 2m");
    coeffs[mi] = cfg.get_double("symbol", key);
  }
  if (coeffs.empty()) return polyharmonic_symbol(m, n);
  return make_symbol(m, n, coeffs);
}

PotentialSpec parse_potential(const Config& cfg) {
  const std::string kind = lower(cfg.get_string("potential", "kind"));
  if (kind == "zero") return make_constant_potential(1, 0.0);
  if (kind == "constant") {
    const double c = cfg.get_double("potential", "c");
    return make_constant_potential(c < 0 ? -1 : 1, std::abs(c));
  }
  if (kind == "power" || kind == "shifted_power") {
    const double c = cfg.get_double("potential", "c");
    const double a = cfg.get_double("potential", "a");
    const int sign = c < 0 ? -1 : 1;
    return kind == "power" ? make_power_potential(a, sign, std::abs(c))
                           : make_shifted_power_potential(a, sign, std::abs(c));
  }
  if (kind == "tabulated")
    return make_tabulated_potential(read_binary(cfg.get_string("potential", "file")));
  fail(ErrorCode::config_error, "potential: unknown kind '" + kind + "'");
}

// A scan is either an explicit ascending list <stem>s or the log-spaced
// triple <stem>_min / <stem>_max / <stem>_count.
std::vector<double> parse_scan(const Config& cfg, const std::string& sec,
                               const std::string& stem, std::size_t min_count) {
  std::vector<double> out;
  if (cfg.has(sec, stem + "s")) {
    out = cfg.get_double_list(sec, stem + "s");
  } else {
    const double lo = cfg.get_double(sec, stem + "_min");
    const double hi = cfg.get_double(sec, stem + "_max");
    const int count = cfg.get_int(sec, stem + "_count");
    require(std::isfinite(lo) && std::isfinite(hi) && lo > 0 && hi > lo && count >= 2,
            ErrorCode::config_error, sec + ": bad " + stem + " scan bounds");
    for (int i = 0; i < count; ++i)
      out.push_back(lo * std::pow(hi / lo, double(i) / double(count - 1)));
  }
  require(out.size() >= min_count, ErrorCode::config_error,
          sec + ": need at least " + std::to_string(min_count) + " " + stem + " values");
  for (std::size_t i = 0; i < out.size(); ++i) {
    require(std::isfinite(out[i]) && out[i] > 0, ErrorCode::config_error,
            sec + ": " + stem + " values must be positive");
    require(i == 0 || out[i] > out[i - 1], ErrorCode::config_error,
            sec + ": " + stem + " values must increase");
  }
  return out;
}

ConditionSet parse_condition_set(const Config& cfg, const std::string& sec, int m, int n) {
  ConditionSet cs;
  const std::string b = lower(cfg.get_string(sec, "branch"));
  if (b == "a2") cs.branch = ConditionBranch::a2;
  else if (b == "a3") cs.branch = ConditionBranch::a3;
  else if (b == "a4") cs.branch = ConditionBranch::a4;
  else if (b == "a5") cs.branch = ConditionBranch::a5;
  else fail(ErrorCode::config_error, sec + ": unknown branch '" + b + "'");
  cs.m = m;
  cs.n = n;
  cs.q = cfg.get_double(sec, "q");
  cs.p = cfg.get_double_or(sec, "p", cs.q);
  cs.s = cfg.get_double(sec, "s");
  cs.alpha = cfg.get_double_or(sec, "alpha", 0.0);
  cs.r = cfg.get_double_or(sec, "r", 0.0);
  cs.t = cfg.get_double_or(sec, "t", 0.0);
  cs.sigma = cfg.get_double_or(sec, "sigma", 0.0);
  cs.constant_product = cfg.get_double_or(sec, "constant_product", 1.0);
  validate_conditions(cs);
  return cs;
}

Region parse_region(const Config& cfg, const std::string& sec, int n) {
  Region reg;
  const std::string kind = lower(cfg.get_string(sec, "kind"));
  if (kind == "box") reg.kind = Region::Kind::box;
  else if (kind == "ball") reg.kind = Region::Kind::ball;
  else fail(ErrorCode::config_error, sec + ": unknown kind '" + kind + "'");
  const auto center = cfg.get_double_list(sec, "center");
  require(center.size() == std::size_t(n), ErrorCode::config_error,
          sec + ": center needs one coordinate per axis");
  for (std::size_t i = 0; i < center.size(); ++i) reg.center[i] = center[i];
  if (reg.kind == Region::Kind::ball) {
    reg.extent[0] = cfg.get_double(sec, "radius");
    require(reg.extent[0] > 0, ErrorCode::config_error, sec + ": radius must be positive");
  } else {
    const auto ext = cfg.get_double_list(sec, "extent");
    require(ext.size() == std::size_t(n), ErrorCode::config_error,
            sec + ": extent needs one half-width per axis");
    for (std::size_t i = 0; i < ext.size(); ++i) {
      require(ext[i] > 0, ErrorCode::config_error, sec + ": extents must be positive");
      reg.extent[i] = ext[i];
    }
  }
  return reg;
}

ContourSpec parse_contour(const Config& cfg, const std::string& sec) {
  ContourSpec cs;
  cs.mu = cfg.get_double_or(sec, "mu", cs.mu);
  cs.radius = cfg.get_double_or(sec, "radius", cs.radius);
  cs.l = cfg.get_int_or(sec, "l", cs.l);
  cs.nodes_arc = cfg.get_int_or(sec, "nodes_arc", cs.nodes_arc);
  cs.nodes_ray = cfg.get_int_or(sec, "nodes_ray", cs.nodes_ray);
  cs.neumann_tol = cfg.get_double_or(sec, "neumann_tol", cs.neumann_tol);
  cs.max_terms = cfg.get_int_or(sec, "max_terms", cs.max_terms);
  return cs;
}

HeatMethod parse_method(const Config& cfg, const std::string& sec) {
  const std::string m = lower(cfg.get_string(sec, "method"));
  if (m == "spectral") return HeatMethod::spectral;
  if (m == "dense") return HeatMethod::dense;
  if (m == "contour") return HeatMethod::contour;
  fail(ErrorCode::config_error, sec + ": unknown method '" + m + "'");
}

GaussianFitOptions parse_fit_options(const Config& cfg, const std::string& sec) {
  GaussianFitOptions fo;
  fo.cap_factor = cfg.get_double_or(sec, "cap_factor", fo.cap_factor);
  fo.cap_absolute = cfg.get_double_or(sec, "cap_absolute", fo.cap_absolute);
  fo.c_max = cfg.get_double_or(sec, "c_max", fo.c_max);
  fo.c_steps = cfg.get_int_or(sec, "c_steps", fo.c_steps);
  fo.allow_local_w = cfg.get_bool_or(sec, "local_w", fo.allow_local_w);
  fo.floor_rel = cfg.get_double_or(sec, "floor_rel", fo.floor_rel);
  return fo;
}

// ---- task runners ----

struct TaskIo {
  json results;
  std::string csv;
  PlotSpec plot;
  bool passed = true;
  std::string summary;
};

std::string short_summary(const char* f, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

TaskIo run_classify(const Config& cfg, std::vector<std::string>& warnings) {
  const GridSpec g = parse_grid(cfg);
  const PotentialSpec V = parse_potential(cfg);
  const SchechterParams sp = make_schechter_params(
      cfg.get_double("classify", "alpha"), cfg.get_double("classify", "r"),
      cfg.get_double_or("classify", "t", kInf), cfg.get_double_or("classify", "s", 0.0));
  const std::vector<double> deltas = parse_scan(cfg, "classify", "delta", 8);

  TaskIo io;
  const SeminormReport rep = scaled_seminorm(V, sp, deltas, g);
  if (sp.alpha == double(g.n) && deltas.back() > 1.0)
    warnings.push_back("classify: log-weight clamp active for delta > 1");
  if (rep.all_zero) warnings.push_back("classify: window norms vanish identically");

  io.results["alpha"] = sp.alpha;
  io.results["r"] = sp.r;
  io.results["t"] = jnum(sp.t);
  io.results["s"] = sp.S;
  io.results["potential"] = potential_label(V);
  io.results["deltas"] = jarr(rep.deltas);
  io.results["values"] = jarr(rep.values);
  io.results["scaled"] = jarr(rep.scaled);
  io.results["sup_scaled"] = jnum(rep.sup_scaled);
  io.results["slope"] = jnum(rep.slope);
  io.results["all_zero"] = rep.all_zero;
  io.results["verdict"] = verdict_name(rep.verdict);

  std::optional<KatoReport> kato;
  if (cfg.get_bool_or("classify", "kato", false)) {
    kato = kato_check(V, sp.alpha, deltas, g);
    io.results["kato"] = {{"slope", jnum(kato->slope)},
                          {"decaying", kato->decaying},
                          {"origin_excluded", kato->origin_excluded},
                          {"values", jarr(kato->values)}};
    if (kato->origin_excluded)
      warnings.push_back("classify: origin window integral diverges; class ruled out");
  }
  if (cfg.has("classify", "morrey_p")) {
    const MorreyReport mo = morrey_norm(V, cfg.get_double("classify", "morrey_p"),
                                        cfg.get_double("classify", "morrey_lambda"), g);
    io.results["morrey"] = {{"value", jnum(mo.value)},
                            {"attained_radius", mo.attained_radius}};
  }
  if (V.family == PotentialFamily::power || V.family == PotentialFamily::shifted_power ||
      V.family == PotentialFamily::constant) {
    const MembershipReport mb = power_membership(V, sp, g.n);
    io.results["closed_form"] = {{"verdict", verdict_name(mb.verdict)},
                                 {"exponent", jnum(mb.exponent)},
                                 {"admissible", mb.admissible},
                                 {"kato", mb.kato},
                                 {"reason", mb.reason}};
    if (mb.admissible && mb.verdict != rep.verdict)
      warnings.push_back("classify: closed-form and windowed verdicts disagree");
  }

  if (cfg.has("check", "expect_verdict"))
    io.passed &= lower(cfg.get_string("check", "expect_verdict")) ==
                 lower(verdict_name(rep.verdict));
  if (cfg.has("check", "slope_min"))
    io.passed &= rep.slope >= cfg.get_double("check", "slope_min");
  if (cfg.has("check", "slope_max"))
    io.passed &= rep.slope <= cfg.get_double("check", "slope_max");
  if (cfg.has("check", "sup_max"))
    io.passed &= rep.sup_scaled <= cfg.get_double("check", "sup_max");
  if (cfg.has("check", "expect_kato")) {
    require(kato.has_value(), ErrorCode::config_error,
            "check: expect_kato needs classify.kato = true");
    io.passed &= kato->decaying == cfg.get_bool("check", "expect_kato");
  }

  std::ostringstream csv;
  csv << "delta,value,scaled\n";
  for (std::size_t i = 0; i < rep.deltas.size(); ++i)
    csv << fmt(rep.deltas[i]) << "," << fmt(rep.values[i]) << "," << fmt(rep.scaled[i])
        << "\n";
  io.csv = csv.str();

  PlotSeries data;
  data.label = "delta^S M_delta";
  data.line = true;
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
    if (rep.scaled[i] > 0) {
      data.xs.push_back(std::log10(rep.deltas[i]));
      data.ys.push_back(std::log10(rep.scaled[i]));
    }
  }
  if (data.xs.size() >= 2) {
    io.plot.title = "scaled window norm";
    io.plot.x_label = "log10 delta";
    io.plot.y_label = "log10 scaled norm";
    io.plot.series.push_back(std::move(data));
  }

  io.summary = std::string("verdict ") + verdict_name(rep.verdict) +
               short_summary(", slope %.3f, sup %.3e", rep.slope, rep.sup_scaled, 0);
  return io;
}

TaskIo run_tnorm(const Config& cfg, const RunOptions& opt, std::vector<std::string>& warnings) {
  const GridSpec g = parse_grid(cfg);
  const EllipticSymbol P = parse_symbol(cfg, g.n);
  const PotentialSpec V = parse_potential(cfg);
  const ConditionSet cs = parse_condition_set(cfg, "tnorm", P.m, g.n);
  const std::vector<double> deltas = parse_scan(cfg, "tnorm", "delta", 2);
  const std::string mode = lower(cfg.get_string_or("tnorm", "mode", "both"));
  require(mode == "both" || mode == "empirical" || mode == "theoretical",
          ErrorCode::config_error, "tnorm: unknown mode '" + mode + "'");
  const int trials = cfg.get_int_or("tnorm", "trials", 16);

  std::vector<double> emp, theo;
  for (double d : deltas) {
    if (mode != "empirical") theo.push_back(theoretical_bound(cs, V, d, g));
    if (mode != "theoretical")
      emp.push_back(empirical_opnorm(V, cs.s, d, cs.p, cs.q, trials, g, opt.seed));
  }

  TaskIo io;
  io.results["branch"] = branch_name(cs.branch);
  io.results["s_index"] = jnum(s_index(cs));
  io.results["delta_power"] = jnum(bound_delta_power(cs));
  io.results["deltas"] = jarr(deltas);

  const auto fit_log = [&warnings](const std::vector<double>& xs,
                                   const std::vector<double>& ys, const char* tag,
                                   double& slope_out) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ys.size(); ++i)
      if (ys[i] > 0) {
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
      }
    if (lx.size() >= 2) {
      slope_out = linear_fit(lx, ly).slope;
      return true;
    }
    warnings.push_back(std::string("tnorm: too few positive ") + tag +
                       " values for a slope");
    return false;
  };

  double emp_slope = 0, theo_slope = 0;
  bool have_emp_slope = false, have_theo_slope = false;
  if (!emp.empty()) {
    io.results["empirical"] = jarr(emp);
    have_emp_slope = fit_log(deltas, emp, "empirical", emp_slope);
    if (have_emp_slope) io.results["empirical_slope"] = jnum(emp_slope);
  }
  if (!theo.empty()) {
    io.results["theoretical"] = jarr(theo);
    have_theo_slope = fit_log(deltas, theo, "theoretical", theo_slope);
    if (have_theo_slope) io.results["theoretical_slope"] = jnum(theo_slope);
  }
  double sup_ratio = 0;
  if (!emp.empty() && !theo.empty()) {
    std::vector<double> ratio(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i)
      ratio[i] = theo[i] > 0 ? emp[i] / theo[i] : (emp[i] > 0 ? kInf : 0.0);
    io.results["ratio"] = jarr(ratio);
    for (double x : ratio) sup_ratio = std::max(sup_ratio, x);
    io.results["sup_ratio"] = jnum(sup_ratio);
  }

  if (cfg.has("check", "ratio_max")) {
    require(mode == "both", ErrorCode::config_error, "check: ratio_max needs mode = both");
    io.passed &= sup_ratio <= cfg.get_double("check", "ratio_max");
  }
  if (cfg.has("check", "slope_deficit_max")) {
    require(have_emp_slope && have_theo_slope, ErrorCode::config_error,
            "check: slope_deficit_max needs both slopes");
    io.passed &= emp_slope >= theo_slope - cfg.get_double("check", "slope_deficit_max");
  }

  std::ostringstream csv;
  csv << "delta,empirical,theoretical\n";
  for (std::size_t i = 0; i < deltas.size(); ++i)
    csv << fmt(deltas[i]) << "," << (emp.empty() ? "" : fmt(emp[i])) << ","
        << (theo.empty() ? "" : fmt(theo[i])) << "\n";
  io.csv = csv.str();

  io.plot.title = "operator norm against window width";
  io.plot.x_label = "log10 delta";
  io.plot.y_label = "log10 norm";
  const auto push_series = [&](const std::vector<double>& ys, const char* label) {
    PlotSeries s;
    s.label = label;
    s.line = true;
    for (std::size_t i = 0; i < deltas.size(); ++i)
      if (ys[i] > 0) {
        s.xs.push_back(std::log10(deltas[i]));
        s.ys.push_back(std::log10(ys[i]));
      }
    if (s.xs.size() >= 2) io.plot.series.push_back(std::move(s));
  };
  if (!emp.empty()) push_series(emp, "empirical");
  if (!theo.empty()) push_series(theo, "bound");

  io.summary = short_summary("sup ratio %.3g, slopes %.3f / %.3f", sup_ratio, emp_slope,
                             theo_slope);
  return io;
}

TaskIo run_conditions(const Config& cfg, std::vector<std::string>& warnings) {
  const GridSpec g = parse_grid(cfg);
  const EllipticSymbol P = parse_symbol(cfg, g.n);
  const PotentialSpec V = parse_potential(cfg);
  const ConditionSet cs = parse_condition_set(cfg, "conditions", P.m, g.n);
  const std::vector<double> lambdas = parse_scan(cfg, "conditions", "lambda", 8);

  const ConditionReport rep = check_conditions(cs, V, lambdas, g);

  TaskIo io;
  io.results["branch"] = branch_name(cs.branch);
  io.results["s_index"] = jnum(rep.s_index);
  io.results["sup_value"] = jnum(rep.sup_value);
  io.results["fitted_exponent"] = jnum(rep.fitted_exponent);
  io.results["status"] = condition_status_name(rep.status);
  io.results["local_threshold"] = jnum(rep.local_threshold);
  json samples = json::array();
  for (const auto& s : rep.samples)
    samples.push_back({{"lambda_abs", jnum(s.lambda_abs)}, {"m_value", jnum(s.m_value)}});
  io.results["samples"] = samples;
  if (rep.status == ConditionStatus::fail)
    warnings.push_back("conditions: no window satisfies the smallness requirement");

  if (cfg.has("check", "expect_status")) {
    io.passed &= lower(cfg.get_string("check", "expect_status")) ==
                 lower(condition_status_name(rep.status));
  } else {
    io.passed &= rep.status != ConditionStatus::fail;
  }
  if (cfg.has("check", "expect_exponent"))
    io.passed &= std::abs(rep.fitted_exponent - cfg.get_double("check", "expect_exponent")) <=
                 cfg.get_double_or("check", "exponent_tol", 0.05);
  if (cfg.has("check", "expect_s_index"))
    io.passed &= std::abs(rep.s_index - cfg.get_double("check", "expect_s_index")) <=
                 cfg.get_double_or("check", "s_index_tol", 0.0);

  std::ostringstream csv;
  csv << "lambda_abs,m_value\n";
  for (const auto& s : rep.samples)
    csv << fmt(s.lambda_abs) << "," << fmt(s.m_value) << "\n";
  io.csv = csv.str();

  PlotSeries data;
  data.label = "M(|lambda|)";
  data.line = true;
  for (const auto& s : rep.samples)
    if (s.m_value > 0) {
      data.xs.push_back(std::log10(s.lambda_abs));
      data.ys.push_back(std::log10(s.m_value));
    }
  if (data.xs.size() >= 2) {
    io.plot.title = "condition profile";
    io.plot.x_label = "log10 |lambda|";
    io.plot.y_label = "log10 M";
    io.plot.series.push_back(std::move(data));
  }

  io.summary = std::string("status ") + condition_status_name(rep.status) +
               short_summary(", sup %.3g, exponent %.3f", rep.sup_value,
                             rep.fitted_exponent, 0);
  return io;
}

TaskIo run_resolvent_check(const Config& cfg, std::vector<std::string>& warnings) {
  const GridSpec g = parse_grid(cfg);
  const EllipticSymbol P = parse_symbol(cfg, g.n);
  const PotentialSpec V = parse_potential(cfg);
  const cd z(cfg.get_double("resolvent", "z_re"),
             cfg.get_double_or("resolvent", "z_im", 0.0));
  const double tol = cfg.get_double_or("resolvent", "tol", 1e-10);
  const int max_terms = cfg.get_int_or("resolvent", "max_terms", 200);
  const double width = cfg.get_double_or("resolvent", "rhs_width", g.r_box / 8.0);
  require(width > 0, ErrorCode::config_error, "resolvent: rhs_width must be positive");

  const GridFunction f = from_function(g, [&](const std::array<double, 3>& x) {
    double d2 = 0;
    for (int d = 0; d < g.n; ++d) d2 += x[d] * x[d];
    return cd(std::exp(-d2 / (2.0 * width * width)), 0.0);
  });

  const ResolventResult res = perturbed_resolvent(P, V, z, f, tol, max_terms);
  TaskIo io;
  io.results["z"] = {jnum(z.real()), jnum(z.imag())};
  io.results["converged"] = res.diag.converged;
  io.results["terms_used"] = res.diag.terms_used;
  io.results["contraction_estimate"] = jnum(res.diag.contraction_estimate);
  io.results["residual"] = jnum(res.diag.residual);
  if (!res.diag.converged)
    warnings.push_back("resolvent: series did not converge at the requested tolerance");
  io.passed &= res.diag.converged;
  io.passed &= res.diag.residual <= cfg.get_double_or("check", "residual_max", 10.0 * tol);

  std::ostringstream csv;
  csv << "quantity,value\n";
  csv << "residual," << fmt(res.diag.residual) << "\n";
  csv << "contraction," << fmt(res.diag.contraction_estimate) << "\n";

  const std::string dense_mode = lower(cfg.get_string_or("resolvent", "dense", "auto"));
  require(dense_mode == "auto" || dense_mode == "on" || dense_mode == "off",
          ErrorCode::config_error, "resolvent: dense must be auto, on, or off");
  const bool do_dense = dense_mode == "on" ||
                        (dense_mode == "auto" && g.total() <= 4096);
  if (do_dense) {
    const GridFunction ud = dense_solve(P, V, z, f);
    const double ref = lp_norm(ud, 2.0);
    const double err = lp_norm(add(res.u, scale(ud, cd(-1.0, 0.0))), 2.0);
    const double rel = ref > 0 ? err / ref : err;
    io.results["dense_rel_error"] = jnum(rel);
    csv << "dense_rel_error," << fmt(rel) << "\n";
    if (cfg.has("check", "dense_max")) io.passed &= rel <= cfg.get_double("check", "dense_max");
  }

  const int shifts = cfg.get_int_or("resolvent", "conjugation_shifts", 0);
  require(shifts >= 0, ErrorCode::config_error, "resolvent: negative shift count");
  if (shifts > 0) {
    json arr = json::array();
    double worst = 0;
    for (int k = 1; k <= shifts; ++k) {
      const double theta = 3.14159265358979323846 * double(k) / g.r_box;
      ComplexShift eta{cd(0, theta), cd(0, 0), cd(0, 0)};
      const double r = conjugation_residual(P, V, z, eta, f, tol, max_terms);
      arr.push_back({{"theta", jnum(theta)}, {"residual", jnum(r)}});
      csv << "conjugation_residual_" << k << "," << fmt(r) << "\n";
      worst = std::max(worst, r);
    }
    io.results["conjugation"] = arr;
    io.results["conjugation_worst"] = jnum(worst);
    if (cfg.has("check", "conjugation_max"))
      io.passed &= worst <= cfg.get_double("check", "conjugation_max");
  }

  io.csv = csv.str();
  io.summary = short_summary("residual %.3e, contraction %.3f, %g terms",
                             res.diag.residual, res.diag.contraction_estimate,
                             double(res.diag.terms_used));
  return io;
}

// Axis-0 profile through y; the cheap cross-section for files and plots.
struct ProfilePoint {
  double x = 0, dist = 0, value = 0;
};
std::vector<ProfilePoint> axis_profile(const GridFunction& col,
                                       const std::array<double, 3>& y) {
  const GridSpec& g = col.spec();
  std::array<long, 3> base{0, 0, 0};
  for (int d = 0; d < g.n; ++d) base[d] = std::lround((y[d] + g.r_box) / g.h);
  std::vector<ProfilePoint> out;
  out.reserve(std::size_t(g.npoints));
  for (long i = 0; i < g.npoints; ++i) {
    auto idx = base;
    idx[0] = i;
    const auto x = coordinate(g, idx);
    double d2 = 0;
    for (int d = 0; d < g.n; ++d) d2 += (x[d] - y[d]) * (x[d] - y[d]);
    out.push_back({x[0], std::sqrt(d2), std::abs(col[flatten(g, idx)])});
  }
  return out;
}

TaskIo run_heat(const Config& cfg, std::vector<std::string>& warnings) {
  const GridSpec g = parse_grid(cfg);
  const EllipticSymbol P = parse_symbol(cfg, g.n);
  const PotentialSpec V = parse_potential(cfg);
  const HeatMethod method = parse_method(cfg, "heat");
  const ContourSpec cspec = parse_contour(cfg, "heat");
  const GaussianFitOptions fo = parse_fit_options(cfg, "heat");
  const std::vector<double> ts = parse_scan(cfg, "heat", "t", 1);

  std::array<double, 3> y{0, 0, 0};
  if (cfg.has("heat", "y")) {
    const auto yy = cfg.get_double_list("heat", "y");
    require(yy.size() == std::size_t(g.n), ErrorCode::config_error,
            "heat: y needs one coordinate per axis");
    for (std::size_t i = 0; i < yy.size(); ++i) y[i] = yy[i];
  }

  TaskIo io;
  std::vector<HeatColumn> columns;
  json per_t = json::array();
  for (double t : ts) {
    ContourDiagnostics cdg;
    const GridFunction col = kernel_column(P, V, t, y, g, method, &cspec, &cdg);
    const double contamination = boundary_contamination(col);
    if (contamination > 1e-3)
      warnings.push_back(short_summary(
          "heat: boundary contamination %.2e at t = %g", contamination, t, 0));
    json row = {{"t", jnum(t)}, {"contamination", jnum(contamination)}};
    if (method == HeatMethod::contour) {
      row["nodes"] = cdg.nodes_total;
      row["max_residual"] = jnum(cdg.max_residual);
      row["worst_contraction"] = jnum(cdg.worst_contraction);
    }
    per_t.push_back(row);
    columns.push_back({t, y, col});
  }
  io.results["per_t"] = per_t;

  const HeatEnvelopeReport rep = gaussian_envelope_fit(columns, P.m, g.n, fo);
  io.results["c_fit"] = jnum(rep.c_fit);
  io.results["c_refined"] = jnum(rep.c_refined);
  io.results["constant"] = jnum(rep.constant);
  io.results["cap"] = jnum(rep.cap);
  io.results["w"] = jnum(rep.w);
  io.results["exponent"] = jnum(rep.exponent);
  io.results["violations"] = rep.violations;
  io.results["samples_used"] = rep.samples_used;
  io.results["samples_censored"] = rep.samples_censored;
  io.results["feasible"] = rep.feasible;
  if (!rep.feasible)
    warnings.push_back("heat: no positive damping keeps the constant under the cap");
  io.passed &= rep.feasible && rep.violations == 0;

  if (cfg.has("heat", "sharpness_shift")) {
    const double shift = cfg.get_double("heat", "sharpness_shift");
    require(shift > 0, ErrorCode::config_error, "heat: sharpness_shift must be positive");
    const double c_probe = std::max(rep.c_refined, rep.c_fit);
    const bool feas = envelope_feasible_at_exponent(columns, P.m, g.n,
                                                    rep.exponent + shift, c_probe, rep.w, fo);
    io.results["sharpness"] = {{"probe_exponent", jnum(rep.exponent + shift)},
                               {"c", jnum(c_probe)},
                               {"feasible", feas}};
    if (cfg.get_bool_or("check", "expect_sharp", false)) io.passed &= !feas;
  }

  if (cfg.has("heat", "holder_steps")) {
    const auto raw = cfg.get_double_list("heat", "holder_steps");
    std::vector<long> steps;
    for (double v : raw) {
      const long s = std::lround(v);
      require(std::abs(v - double(s)) < 1e-9 && s != 0, ErrorCode::config_error,
              "heat: holder_steps must be nonzero integers");
      steps.push_back(s);
    }
    const double ht = cfg.get_double("heat", "holder_t");
    const GridFunction* col = nullptr;
    for (const auto& hc : columns)
      if (std::abs(hc.t - ht) <= 1e-12 * ht) col = &hc.col;
    GridFunction fresh = col ? *col : kernel_column(P, V, ht, y, g, method, &cspec, nullptr);
    const HolderReport h = holder_exponent_estimate(fresh, y, ht, P.m, steps, fo);
    io.results["holder"] = {{"slope", jnum(h.slope)},
                            {"r2", jnum(h.r2)},
                            {"c_fit", jnum(h.c_fit)},
                            {"constant", jnum(h.constant)},
                            {"envelope_feasible", h.envelope_feasible},
                            {"usable_steps", h.usable_steps}};
    if (cfg.has("check", "holder_slope_min"))
      io.passed &= h.slope >= cfg.get_double("check", "holder_slope_min");
    io.passed &= h.envelope_feasible;
  }

  if (cfg.get_bool_or("heat", "record_spectrum", false)) {
    if (g.total() <= 4096) {
      const DenseSemigroup sg(P, V, g);
      io.results["spectrum"] = {{"min", jnum(sg.spectrum_min())},
                                {"max", jnum(sg.spectrum_max())}};
      if (sg.spectrum_min() < -1e-12)
        warnings.push_back(short_summary(
            "heat: negative spectrum edge %.3e; expect e^{wt} mass growth",
            sg.spectrum_min(), 0, 0));
    } else {
      warnings.push_back("heat: spectrum recording skipped, grid beyond the dense gate");
    }
  }

  if (cfg.has("check", "c_min")) io.passed &= rep.c_fit >= cfg.get_double("check", "c_min");
  if (cfg.has("check", "c_max")) io.passed &= rep.c_fit <= cfg.get_double("check", "c_max");

  std::ostringstream csv;
  csv << "t,x0,distance,value\n";
  for (const auto& hc : columns)
    for (const auto& p : axis_profile(hc.col, y))
      csv << fmt(hc.t) << "," << fmt(p.x) << "," << fmt(p.dist) << "," << fmt(p.value)
          << "\n";
  io.csv = csv.str();

  // Collapse plot: every usable point should sit under the envelope line.
  io.plot.title = "kernel collapse";
  io.plot.x_label = "phi";
  io.plot.y_label = "log10 scaled kernel";
  const double kappa = rep.exponent;
  double phi_max = 0;
  for (const auto& hc : columns) {
    PlotSeries s;
    s.label = short_summary("t = %g", hc.t, 0, 0);
    double peak = 0;
    for (std::size_t i = 0; i < hc.col.size(); ++i)
      peak = std::max(peak, std::abs(hc.col[i]));
    for (const auto& p : axis_profile(hc.col, y)) {
      if (p.dist < 2.0 * g.h || std::abs(p.x) > 0.9 * g.r_box) continue;
      if (!(p.value >= fo.floor_rel * peak)) continue;
      const double phi = std::pow(p.dist, kappa) / std::pow(hc.t, kappa - 1.0);
      const double scaled = std::log10(p.value) +
                            (double(g.n) / (2.0 * P.m)) * std::log10(hc.t) +
                            rep.w * hc.t / kLn10;
      s.xs.push_back(phi);
      s.ys.push_back(scaled);
      phi_max = std::max(phi_max, phi);
    }
    if (!s.xs.empty()) io.plot.series.push_back(std::move(s));
  }
  if (rep.constant > 0 && phi_max > 0) {
    PlotSeries env;
    env.label = "envelope";
    env.line = true;
    env.xs = {0.0, phi_max};
    env.ys = {std::log10(rep.constant),
              std::log10(rep.constant) - rep.c_fit * phi_max / kLn10};
    io.plot.series.push_back(std::move(env));
  }
  if (io.plot.series.empty()) io.plot = PlotSpec{};

  io.summary = short_summary("c_fit %.4g, constant %.3g, w %.3g", rep.c_fit, rep.constant,
                             rep.w) +
               (rep.feasible ? "" : " (infeasible)");
  return io;
}

TaskIo run_dg(const Config& cfg, std::vector<std::string>& warnings) {
  const GridSpec g = parse_grid(cfg);
  const EllipticSymbol P = parse_symbol(cfg, g.n);
  const PotentialSpec V = parse_potential(cfg);
  const HeatMethod method = parse_method(cfg, "dg");
  const ContourSpec cspec = parse_contour(cfg, "dg");
  const bool local = cfg.get_bool_or("dg", "local", false);
  const std::vector<double> ts = parse_scan(cfg, "dg", "t", 3);
  const Region e_region = parse_region(cfg, "region_e", g.n);
  const Region f_region = parse_region(cfg, "region_f", g.n);

  const DgReport rep =
      davies_gaffney_measure(P, V, e_region, f_region, ts, g, method, &cspec, local);

  TaskIo io;
  io.results["distance"] = jnum(rep.distance);
  io.results["c5"] = jnum(rep.c5);
  io.results["w"] = jnum(rep.w);
  io.results["r2"] = jnum(rep.r2);
  io.results["censored"] = rep.censored;
  json samples = json::array();
  for (const auto& s : rep.samples)
    samples.push_back({{"t", jnum(s.t)},
                       {"mass_ratio", jnum(s.mass_ratio)},
                       {"censored", s.censored}});
  io.results["samples"] = samples;
  if (rep.censored > 0)
    warnings.push_back(short_summary("dg: %g masses below the floor were censored",
                                     double(rep.censored), 0, 0));

  if (cfg.has("check", "c5_min")) io.passed &= rep.c5 >= cfg.get_double("check", "c5_min");
  if (cfg.has("check", "c5_ref")) {
    const double ref = cfg.get_double("check", "c5_ref");
    const double tol = cfg.get_double_or("check", "c5_rel_tol", 0.2);
    io.passed &= std::abs(rep.c5 - ref) <= tol * std::abs(ref);
  }
  if (cfg.has("check", "r2_min")) io.passed &= rep.r2 >= cfg.get_double("check", "r2_min");

  std::ostringstream csv;
  csv << "t,mass_ratio,censored\n";
  for (const auto& s : rep.samples)
    csv << fmt(s.t) << "," << fmt(s.mass_ratio) << "," << (s.censored ? 1 : 0) << "\n";
  io.csv = csv.str();

  const double kappa = 2.0 * P.m / (2.0 * P.m - 1.0);
  PlotSeries data, line;
  data.label = "measured";
  line.label = "fit";
  line.line = true;
  std::vector<double> xs, ys, tt;
  for (const auto& s : rep.samples) {
    if (s.censored) continue;
    const double x = -std::pow(rep.distance, kappa) * std::pow(s.t, -1.0 / (2.0 * P.m - 1.0));
    xs.push_back(x);
    ys.push_back(std::log10(s.mass_ratio));
    tt.push_back(s.t);
  }
  if (xs.size() >= 2) {
    double b = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      b += ys[i] - (rep.c5 * xs[i] + rep.w * tt[i]) / kLn10;
    b /= double(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      data.xs.push_back(xs[i]);
      data.ys.push_back(ys[i]);
      line.xs.push_back(xs[i]);
      line.ys.push_back((rep.c5 * xs[i] + rep.w * tt[i]) / kLn10 + b);
    }
    io.plot.title = "off-diagonal mass decay";
    io.plot.x_label = "-d^k / t^{1/(2m-1)}";
    io.plot.y_label = "log10 mass ratio";
    io.plot.series.push_back(std::move(data));
    io.plot.series.push_back(std::move(line));
  }

  io.summary = short_summary("c5 %.4f, w %.3f, r2 %.4f", rep.c5, rep.w, rep.r2);
  return io;
}

std::string iso_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string config_hash_hex(const Config& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& sec : cfg.sections()) {
    h = fnv1a(sec + "\x1f", h);
    for (const auto& key : cfg.keys(sec))
      h = fnv1a(key + "\x1f" + cfg.raw_value(sec, key) + "\x1e", h);
  }
  return hex64(h);
}

RunOutcome run_experiment(const Config& cfg, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string task = lower(cfg.get_string("run", "task"));
  const std::string label = cfg.get_string_or("run", "label", "");

  std::vector<std::string> allowed = {"run", "grid", "potential", "check"};
  std::vector<std::string> warnings;
  TaskIo io;
  if (task == "classify") {
    allowed.push_back("classify");
    cfg.check_sections(allowed);
    io = run_classify(cfg, warnings);
  } else if (task == "tnorm") {
    allowed.insert(allowed.end(), {"symbol", "tnorm"});
    cfg.check_sections(allowed);
    io = run_tnorm(cfg, opt, warnings);
  } else if (task == "conditions") {
    allowed.insert(allowed.end(), {"symbol", "conditions"});
    cfg.check_sections(allowed);
    io = run_conditions(cfg, warnings);
  } else if (task == "resolvent-check") {
    allowed.insert(allowed.end(), {"symbol", "resolvent"});
    cfg.check_sections(allowed);
    io = run_resolvent_check(cfg, warnings);
  } else if (task == "heat") {
    allowed.insert(allowed.end(), {"symbol", "heat"});
    cfg.check_sections(allowed);
    io = run_heat(cfg, warnings);
  } else if (task == "dg") {
    allowed.insert(allowed.end(), {"symbol", "dg", "region_e", "region_f"});
    cfg.check_sections(allowed);
    io = run_dg(cfg, warnings);
  } else {
    fail(ErrorCode::config_error, "run: unknown task '" + task + "'");
  }
  cfg.check_all_used();

  json doc;
  doc["task"] = task;
  if (!label.empty()) doc["label"] = label;
  const std::string hash = config_hash_hex(cfg);
  doc["config_hash"] = hash;
  doc["passed"] = io.passed;
  doc["warnings"] = warnings;
  doc["results"] = io.results;

  // Everything above is deterministic for a fixed config and seed; meta is
  // volatile and sits outside the content hash.
  const std::string content_hash = hex64(fnv1a(doc.dump()));
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  doc["meta"] = {{"content_hash", content_hash},
                 {"elapsed_seconds", elapsed},
                 {"seed", opt.seed},
                 {"timestamp_utc", iso_utc_now()}};

  RunOutcome out;
  out.passed = io.passed;
  out.task = task;
  out.summary = io.summary;
  out.warnings = warnings;
  out.json = doc.dump(2) + "\n";

  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    const std::string stem = opt.out_dir + "/" + task + "-" + hash.substr(0, 8);
    out.json_path = stem + ".json";
    atomic_write(out.json_path, out.json);
    if (!io.csv.empty()) {
      out.csv_path = stem + ".csv";
      atomic_write(out.csv_path, io.csv);
    }
    if (!io.plot.series.empty()) {
      out.svg_path = stem + ".svg";
      atomic_write(out.svg_path, render_svg(io.plot));
    }
  }
  return out;
}

}  // namespace sh
