// Exercises the shared library through the C header only; no core headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <schechter_heat.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct GridHandle {
  sh_grid* g = nullptr;
  GridHandle(int n, double r, long npoints) {
    REQUIRE(sh_grid_create(n, r, npoints, &g) == SH_OK);
  }
  ~GridHandle() { sh_grid_destroy(g); }
};

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("version and error strings exist") {
  REQUIRE(sh_version() != nullptr);
  CHECK(std::strlen(sh_version()) > 0);
  REQUIRE(sh_last_error() != nullptr);
}

TEST_CASE("grid lifecycle and accessors") {
  sh_grid* g = nullptr;
  REQUIRE(sh_grid_create(1, 8.0, 64, &g) == SH_OK);
  size_t total = 0;
  CHECK(sh_grid_total(g, &total) == SH_OK);
  CHECK(total == 64);
  double h = 0;
  CHECK(sh_grid_spacing(g, &h) == SH_OK);
  CHECK(h == doctest::Approx(0.25));
  sh_grid_destroy(g);

  // Failure paths: bad point count, null outputs.
  g = nullptr;
  CHECK(sh_grid_create(1, 8.0, 48, &g) == SH_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(sh_last_error()) > 0);
  CHECK(sh_grid_create(1, 8.0, 64, nullptr) == SH_INVALID_ARGUMENT);
  CHECK(sh_grid_total(nullptr, &total) == SH_INVALID_ARGUMENT);
}

TEST_CASE("gridfn values roundtrip and norms") {
  GridHandle grid(1, 8.0, 64);
  std::vector<double> re(64), im(64);
  for (int i = 0; i < 64; ++i) {
    re[std::size_t(i)] = std::cos(0.1 * i);
    im[std::size_t(i)] = 0.01 * i;
  }
  sh_gridfn* f = nullptr;
  REQUIRE(sh_gridfn_from_values(grid.g, re.data(), im.data(), 64, &f) == SH_OK);
  size_t sz = 0;
  CHECK(sh_gridfn_size(f, &sz) == SH_OK);
  CHECK(sz == 64);

  std::vector<double> re2(64), im2(64);
  REQUIRE(sh_gridfn_values(f, re2.data(), im2.data(), 64) == SH_OK);
  for (int i = 0; i < 64; ++i) {
    CHECK(re2[std::size_t(i)] == re[std::size_t(i)]);
    CHECK(im2[std::size_t(i)] == im[std::size_t(i)]);
  }

  // L2 norm against a direct sum.
  double want = 0;
  for (int i = 0; i < 64; ++i)
    want += re[std::size_t(i)] * re[std::size_t(i)] + im[std::size_t(i)] * im[std::size_t(i)];
  want = std::sqrt(0.25 * want);
  double got = 0;
  CHECK(sh_gridfn_lp_norm(f, 2.0, &got) == SH_OK);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK(sh_gridfn_lp_norm(f, 0.5, &got) == SH_INVALID_ARGUMENT);

  // Count mismatch is rejected.
  sh_gridfn* bad = nullptr;
  CHECK(sh_gridfn_from_values(grid.g, re.data(), nullptr, 32, &bad) == SH_INVALID_ARGUMENT);
  sh_gridfn_destroy(f);
}

TEST_CASE("symbol creation and ellipticity") {
  sh_symbol* s = nullptr;
  REQUIRE(sh_symbol_polyharmonic(2, 1, &s) == SH_OK);
  double ell = 0;
  CHECK(sh_symbol_ellipticity(s, &ell) == SH_OK);
  CHECK(ell == doctest::Approx(1.0));
  sh_symbol_destroy(s);
  CHECK(sh_symbol_polyharmonic(0, 1, &s) == SH_INVALID_ARGUMENT);
  CHECK(sh_symbol_polyharmonic(1, 4, &s) == SH_INVALID_ARGUMENT);
}

TEST_CASE("windowed norm of a constant matches the weight window mass") {
  GridHandle grid(1, 8.0, 1024);
  sh_potential* v = nullptr;
  REQUIRE(sh_potential_constant(1, 1.0, &v) == SH_OK);
  const double alpha = 0.5, delta = 0.5;
  double got = 0;
  REQUIRE(sh_schechter_norm(v, grid.g, alpha, 1.0, INFINITY, delta, &got) == SH_OK);
  const double want = 2.0 * std::pow(delta, alpha) / alpha;
  CHECK(got == doctest::Approx(want).epsilon(0.01));

  CHECK(sh_schechter_norm(nullptr, grid.g, alpha, 1.0, INFINITY, delta, &got) ==
        SH_INVALID_ARGUMENT);
  // Window narrower than the lattice can resolve.
  GridHandle coarse(1, 8.0, 8);
  CHECK(sh_schechter_norm(v, coarse.g, alpha, 1.0, INFINITY, 0.5, &got) ==
        SH_UNDER_RESOLVED);
  sh_potential_destroy(v);
}

TEST_CASE("empirical operator norm is exact for constant potentials") {
  GridHandle grid(1, 8.0, 256);
  sh_potential* v = nullptr;
  REQUIRE(sh_potential_constant(1, 0.7, &v) == SH_OK);
  double got = 0;
  REQUIRE(sh_empirical_opnorm(v, grid.g, 1.2, 0.8, 2.0, 2.0, 16, 1234, &got) == SH_OK);
  CHECK(got == doctest::Approx(0.7 * std::pow(0.8, -1.2)).epsilon(1e-8));
  CHECK(sh_empirical_opnorm(v, grid.g, 1.2, 0.8, 2.0, 2.0, 4, 1234, &got) ==
        SH_INVALID_ARGUMENT);
  sh_potential_destroy(v);
}

TEST_CASE("semigroup apply conserves the mean and respects gates") {
  GridHandle grid(1, 8.0, 128);
  sh_symbol* p = nullptr;
  REQUIRE(sh_symbol_polyharmonic(1, 1, &p) == SH_OK);
  sh_potential* zero = nullptr;
  REQUIRE(sh_potential_constant(1, 0.0, &zero) == SH_OK);

  std::vector<double> re(128);
  for (int i = 0; i < 128; ++i) {
    const double x = -8.0 + 0.125 * i;
    re[std::size_t(i)] = std::exp(-x * x);
  }
  sh_gridfn* f = nullptr;
  REQUIRE(sh_gridfn_from_values(grid.g, re.data(), nullptr, 128, &f) == SH_OK);

  sh_gridfn* u = nullptr;
  REQUIRE(sh_semigroup_apply(p, zero, 0.5, f, 0, &u) == SH_OK);
  std::vector<double> ure(128);
  REQUIRE(sh_gridfn_values(u, ure.data(), nullptr, 128) == SH_OK);
  double m0 = 0, m1 = 0;
  for (int i = 0; i < 128; ++i) {
    m0 += re[std::size_t(i)];
    m1 += ure[std::size_t(i)];
  }
  CHECK(m1 == doctest::Approx(m0).epsilon(1e-12));
  // Positivity survives the flow.
  for (int i = 0; i < 128; ++i) CHECK(ure[std::size_t(i)] > 0.0);
  sh_gridfn_destroy(u);

  sh_potential* vc = nullptr;
  REQUIRE(sh_potential_constant(-1, 0.5, &vc) == SH_OK);
  CHECK(sh_semigroup_apply(p, vc, 0.5, f, 0, &u) == SH_METHOD_UNAVAILABLE);
  CHECK(sh_semigroup_apply(p, zero, 0.5, f, 7, &u) == SH_INVALID_ARGUMENT);
  CHECK(sh_semigroup_apply(p, zero, -1.0, f, 0, &u) == SH_INVALID_ARGUMENT);

  // Contour route agrees with spectral on the same data.
  sh_gridfn* us = nullptr;
  sh_gridfn* uc = nullptr;
  REQUIRE(sh_semigroup_apply(p, zero, 0.5, f, 0, &us) == SH_OK);
  REQUIRE(sh_semigroup_apply(p, zero, 0.5, f, 2, &uc) == SH_OK);
  std::vector<double> rs(128), rc(128);
  REQUIRE(sh_gridfn_values(us, rs.data(), nullptr, 128) == SH_OK);
  REQUIRE(sh_gridfn_values(uc, rc.data(), nullptr, 128) == SH_OK);
  double num = 0, den = 0;
  for (int i = 0; i < 128; ++i) {
    num += (rs[std::size_t(i)] - rc[std::size_t(i)]) * (rs[std::size_t(i)] - rc[std::size_t(i)]);
    den += rs[std::size_t(i)] * rs[std::size_t(i)];
  }
  CHECK(std::sqrt(num / den) < 1e-6);

  sh_gridfn_destroy(us);
  sh_gridfn_destroy(uc);
  sh_gridfn_destroy(f);
  sh_potential_destroy(vc);
  sh_potential_destroy(zero);
  sh_symbol_destroy(p);
}

TEST_CASE("experiment driver runs a config end to end") {
  const fs::path dir = fs::temp_directory_path() / "sh_capi_tests";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "classify.ini";
  std::ofstream(cfg) << R"([run]
task = classify
[grid]
n = 1
r_box = 8
npoints = 256
[potential]
kind = power
a = -0.5
c = 1.0
[classify]
alpha = 0.9
r = 1
delta_min = 0.25
delta_max = 1.6
delta_count = 8
[check]
expect_verdict = in_tilde
)";

  char* task = nullptr;
  REQUIRE(sh_config_task(cfg.string().c_str(), &task) == SH_OK);
  CHECK(std::string(task) == "classify");
  sh_string_free(task);

  int passed = 0;
  char* summary = nullptr;
  const fs::path out_dir = dir / "out";
  REQUIRE(sh_run_experiment(cfg.string().c_str(), out_dir.string().c_str(), 1234, &passed,
                            &summary) == SH_OK);
  CHECK(passed == 1);
  REQUIRE(summary != nullptr);
  CHECK(std::strlen(summary) > 0);
  sh_string_free(summary);
  bool saw_json = false;
  for (const auto& entry : fs::directory_iterator(out_dir))
    if (entry.path().extension() == ".json") saw_json = true;
  CHECK(saw_json);

  CHECK(sh_config_task((dir / "missing.ini").string().c_str(), &task) == SH_IO_ERROR);
  std::ofstream(dir / "broken.ini") << "[run]\ntask = classify\ntask = tnorm\n";
  CHECK(sh_config_task((dir / "broken.ini").string().c_str(), &task) == SH_CONFIG_ERROR);
  CHECK(sh_run_experiment(nullptr, nullptr, 0, &passed, nullptr) == SH_INVALID_ARGUMENT);
}

TEST_CASE("error codes map one to one onto library failures") {
  GridHandle grid(1, 8.0, 64);
  // Spectrum hit: z on the lattice symbol range. The C surface reports it
  // through semigroup gating instead; exercise a representative pair here.
  sh_potential* v = nullptr;
  REQUIRE(sh_potential_power(-0.5, 1, 1.0, &v) == SH_OK);
  double out = 0;
  // Divergent local integral: |x|^{-1.2} against alpha = 0.2, r = 1.
  sh_potential* vd = nullptr;
  REQUIRE(sh_potential_power(-1.2, 1, 1.0, &vd) == SH_OK);
  CHECK(sh_schechter_norm(vd, grid.g, 0.2, 1.0, INFINITY, 1.0, &out) ==
        SH_DIVERGENT_LOCAL_INTEGRAL);
  CHECK(std::strlen(sh_last_error()) > 0);
  sh_potential_destroy(vd);
  sh_potential_destroy(v);
}
