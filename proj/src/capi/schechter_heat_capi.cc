#include "schechter_heat.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "../core/errors.hh"
#include "../core/grid.hh"
#include "../core/heat.hh"
#include "../core/potential.hh"
#include "../core/report.hh"
#include "../core/schechter.hh"
#include "../core/symbol.hh"
#include "../core/t_operator.hh"

// Handle types wrap one core value each; the C surface owns them via
// new/delete behind create/destroy pairs.
struct sh_grid {
  sh::GridSpec rep;
};
struct sh_gridfn {
  sh::GridFunction rep;
};
struct sh_symbol {
  sh::EllipticSymbol rep;
};
struct sh_potential {
  sh::PotentialSpec rep;
};

namespace {

thread_local std::string g_last_error;

sh_status set_error(sh::ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<sh_status>(static_cast<int>(code));
}

// Runs the body, mapping exceptions onto status codes.
template <typename Fn>
sh_status guarded(Fn&& body) {
  try {
    body();
    g_last_error.clear();
    return SH_OK;
  } catch (const sh::Error& e) {
    return set_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return set_error(sh::ErrorCode::internal, e.what());
  } catch (...) {
    return set_error(sh::ErrorCode::internal, "unknown error");
  }
}

sh_status need(bool cond, const char* what) {
  if (cond) return SH_OK;
  return set_error(sh::ErrorCode::invalid_argument, what);
}

}  // namespace

extern "C" {

const char* sh_last_error(void) { return g_last_error.c_str(); }

const char* sh_version(void) { return "0.1.0"; }

sh_status sh_grid_create(int n, double r_box, long npoints, sh_grid** out) {
  if (sh_status s = need(out != nullptr, "grid: null output"); s != SH_OK) return s;
  return guarded([&] { *out = new sh_grid{sh::make_grid(n, r_box, npoints)}; });
}

void sh_grid_destroy(sh_grid* g) { delete g; }

sh_status sh_grid_total(const sh_grid* g, size_t* out) {
  if (sh_status s = need(g && out, "grid: null argument"); s != SH_OK) return s;
  return guarded([&] { *out = g->rep.total(); });
}

sh_status sh_grid_spacing(const sh_grid* g, double* out) {
  if (sh_status s = need(g && out, "grid: null argument"); s != SH_OK) return s;
  return guarded([&] { *out = g->rep.h; });
}

sh_status sh_symbol_polyharmonic(int m, int n, sh_symbol** out) {
  if (sh_status s = need(out != nullptr, "symbol: null output"); s != SH_OK) return s;
  return guarded([&] { *out = new sh_symbol{sh::polyharmonic_symbol(m, n)}; });
}

void sh_symbol_destroy(sh_symbol* s) { delete s; }

sh_status sh_symbol_ellipticity(const sh_symbol* s, double* out) {
  if (sh_status st = need(s && out, "symbol: null argument"); st != SH_OK) return st;
  return guarded([&] { *out = s->rep.ell_const; });
}

sh_status sh_potential_power(double a, int sign, double c, sh_potential** out) {
  if (sh_status s = need(out != nullptr, "potential: null output"); s != SH_OK) return s;
  return guarded([&] { *out = new sh_potential{sh::make_power_potential(a, sign, c)}; });
}

sh_status sh_potential_shifted_power(double a, int sign, double c, sh_potential** out) {
  if (sh_status s = need(out != nullptr, "potential: null output"); s != SH_OK) return s;
  return guarded(
      [&] { *out = new sh_potential{sh::make_shifted_power_potential(a, sign, c)}; });
}

sh_status sh_potential_constant(int sign, double c, sh_potential** out) {
  if (sh_status s = need(out != nullptr, "potential: null output"); s != SH_OK) return s;
  return guarded([&] { *out = new sh_potential{sh::make_constant_potential(sign, c)}; });
}

void sh_potential_destroy(sh_potential* v) { delete v; }

sh_status sh_gridfn_from_values(const sh_grid* g, const double* re, const double* im,
                                size_t count, sh_gridfn** out) {
  if (sh_status s = need(g && re && out, "gridfn: null argument"); s != SH_OK) return s;
  return guarded([&] {
    sh::require(count == g->rep.total(), sh::ErrorCode::invalid_argument,
                "gridfn: count does not match grid total");
    std::vector<sh::cd> values(count);
    for (size_t i = 0; i < count; ++i)
      values[i] = sh::cd(re[i], im ? im[i] : 0.0);
    *out = new sh_gridfn{sh::GridFunction(g->rep, std::move(values))};
  });
}

void sh_gridfn_destroy(sh_gridfn* f) { delete f; }

sh_status sh_gridfn_size(const sh_gridfn* f, size_t* out) {
  if (sh_status s = need(f && out, "gridfn: null argument"); s != SH_OK) return s;
  return guarded([&] { *out = f->rep.size(); });
}

sh_status sh_gridfn_values(const sh_gridfn* f, double* re, double* im, size_t count) {
  if (sh_status s = need(f && re, "gridfn: null argument"); s != SH_OK) return s;
  return guarded([&] {
    sh::require(count == f->rep.size(), sh::ErrorCode::invalid_argument,
                "gridfn: count does not match function size");
    for (size_t i = 0; i < count; ++i) {
      re[i] = f->rep[i].real();
      if (im) im[i] = f->rep[i].imag();
    }
  });
}

sh_status sh_gridfn_lp_norm(const sh_gridfn* f, double p, double* out) {
  if (sh_status s = need(f && out, "gridfn: null argument"); s != SH_OK) return s;
  return guarded([&] { *out = sh::lp_norm(f->rep, p); });
}

sh_status sh_schechter_norm(const sh_potential* v, const sh_grid* g, double alpha,
                            double r, double t, double delta, double* out) {
  if (sh_status s = need(v && g && out, "schechter: null argument"); s != SH_OK) return s;
  return guarded([&] {
    const sh::SchechterParams sp = sh::make_schechter_params(alpha, r, t, 0.0);
    *out = sh::schechter_norm(v->rep, sp, delta, g->rep);
  });
}

sh_status sh_empirical_opnorm(const sh_potential* v, const sh_grid* g, double s,
                              double delta, double p_in, double q_out, int trials,
                              unsigned seed, double* out) {
  if (sh_status st = need(v && g && out, "opnorm: null argument"); st != SH_OK) return st;
  return guarded([&] {
    *out = sh::empirical_opnorm(v->rep, s, delta, p_in, q_out, trials, g->rep, seed);
  });
}

sh_status sh_semigroup_apply(const sh_symbol* p, const sh_potential* v, double t,
                             const sh_gridfn* f, int method, sh_gridfn** out) {
  if (sh_status s = need(p && v && f && out, "semigroup: null argument"); s != SH_OK)
    return s;
  return guarded([&] {
    sh::require(method >= 0 && method <= 2, sh::ErrorCode::invalid_argument,
                "semigroup: method must be 0, 1, or 2");
    const sh::HeatMethod hm = method == 0   ? sh::HeatMethod::spectral
                              : method == 1 ? sh::HeatMethod::dense
                                            : sh::HeatMethod::contour;
    *out = new sh_gridfn{sh::semigroup_apply(p->rep, v->rep, t, f->rep, hm)};
  });
}

namespace {

char* dup_string(const std::string& text) {
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  sh::require(buf != nullptr, sh::ErrorCode::internal, "allocation failed");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return buf;
}

}  // namespace

sh_status sh_config_task(const char* config_path, char** task) {
  if (sh_status s = need(config_path && task, "config: null argument"); s != SH_OK)
    return s;
  return guarded([&] {
    const sh::Config cfg = sh::Config::parse_file(config_path);
    *task = dup_string(cfg.get_string("run", "task"));
  });
}

sh_status sh_run_experiment(const char* config_path, const char* out_dir, unsigned seed,
                            int* passed, char** summary) {
  if (sh_status s = need(config_path && passed, "run: null argument"); s != SH_OK)
    return s;
  return guarded([&] {
    const sh::Config cfg = sh::Config::parse_file(config_path);
    sh::RunOptions opt;
    opt.out_dir = out_dir ? out_dir : "";
    opt.seed = seed;
    const sh::RunOutcome outcome = sh::run_experiment(cfg, opt);
    *passed = outcome.passed ? 1 : 0;
    if (summary) {
      std::string text = outcome.summary;
      for (const auto& w : outcome.warnings) text += "\nwarning: " + w;
      if (!outcome.json_path.empty()) text += "\nreport: " + outcome.json_path;
      *summary = dup_string(text);
    }
  });
}

void sh_string_free(char* s) { std::free(s); }

}  // extern "C"
