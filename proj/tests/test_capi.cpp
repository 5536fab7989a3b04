#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "fcv.h"

namespace {

std::vector<double> equispaced_coords(int n) {
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = double(i) / n;
  return c;
}

}  // namespace

TEST_CASE("C API end-to-end on a certified torus problem") {
  const int n = 32;
  fcv_problem* p = nullptr;
  const auto coords = equispaced_coords(n);
  REQUIRE(fcv_problem_create("torus1", "grid", n, coords.data(), n, &p) == FCV_OK);

  size_t nx = 0, ni = 0;
  CHECK(fcv_problem_num_nodes(p, &nx) == FCV_OK);
  CHECK(fcv_problem_num_coefficients(p, &ni) == FCV_OK);
  CHECK(nx == static_cast<size_t>(n));
  CHECK(ni == static_cast<size_t>(n));

  // noisy samples of a smooth random trigonometric polynomial (grid
  // enumeration is [-N/2, N/2), so position i carries frequency i - N/2)
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  std::vector<double> cre(n), cim(n);
  for (int i = 0; i < n; ++i) {
    const double k = std::abs(i - n / 2);
    cre[i] = gauss(rng) / (1.0 + k * k);
    cim[i] = gauss(rng) / (1.0 + k * k);
  }
  fcv_problem* tmp = nullptr;
  REQUIRE(fcv_problem_create("torus1", "grid", n, coords.data(), n, &tmp) == FCV_OK);
  std::vector<double> vre(n), vim(n);
  REQUIRE(fcv_problem_reconstruct(tmp, cre.data(), cim.data(), vre.data(), vim.data()) == FCV_OK);
  fcv_problem_free(tmp);
  for (int i = 0; i < n; ++i) vre[i] += 0.1 * gauss(rng);

  CHECK(fcv_problem_set_values(p, vre.data(), vim.data(), n) == FCV_OK);
  CHECK(fcv_problem_use_uniform_weights(p) == FCV_OK);
  CHECK(fcv_problem_set_frequency_scheme(p, "sobolev:3") == FCV_OK);
  CHECK(fcv_problem_set_truth(p, cre.data(), cim.data(), n) == FCV_OK);

  int certified = 0;
  double gram = 0.0;
  CHECK(fcv_problem_certify(p, 0.0, &certified, &gram) == FCV_OK);
  CHECK(certified == 1);

  double ps = 0.0, vs = 0.0, resid = 0.0;
  CHECK(fcv_problem_score(p, 1e-3, &ps, &vs, &resid) == FCV_OK);
  CHECK(std::isfinite(ps));
  // uniform weights: P == V
  CHECK(std::abs(ps - vs) <= 1e-12 * ps);

  double op = 0.0, ov = 0.0;
  CHECK(fcv_problem_score_oracle(p, 1e-3, &op, &ov) == FCV_OK);
  CHECK(std::abs(ps - op) <= 1e-6 * op);
  double loo = 0.0;
  CHECK(fcv_problem_score_loocv(p, 1e-3, &loo) == FCV_OK);
  CHECK(std::abs(loo - ps) <= 1e-7 * ps);

  fcv_curve* curve = nullptr;
  CHECK(fcv_problem_curve(p, 1e-6, 1e-1, 12, 0, &curve) == FCV_OK);
  size_t rows = 0;
  CHECK(fcv_curve_size(curve, &rows) == FCV_OK);
  CHECK(rows == 12);
  double value = 0.0;
  int present = 0;
  CHECK(fcv_curve_get(curve, 0, "P", &value, &present) == FCV_OK);
  CHECK(present == 1);
  CHECK(fcv_curve_get(curve, 0, "Pt", &value, &present) == FCV_OK);
  CHECK(present == 0);
  CHECK(fcv_curve_get(curve, 0, "l2", &value, &present) == FCV_OK);
  CHECK(present == 1);

  const std::string csv =
      (std::filesystem::temp_directory_path() / "fcv_capi_curve.csv").string();
  CHECK(fcv_curve_write_csv(curve, csv.c_str()) == FCV_OK);
  CHECK(std::filesystem::exists(csv));
  std::filesystem::remove(csv);
  fcv_curve_free(curve);

  double lambda_star = 0.0;
  int boundary = 0;
  CHECK(fcv_problem_minimize(p, "P", 1e-8, 1.0, 25, &lambda_star, &boundary, nullptr) == FCV_OK);
  CHECK(lambda_star > 1e-8);
  CHECK(lambda_star < 1.0);

  std::vector<double> sre(n), sim(n);
  int iters = -1;
  CHECK(fcv_problem_solve(p, lambda_star, sre.data(), sim.data(), &iters) == FCV_OK);
  CHECK(iters == 0);  // diagonal path

  fcv_problem_free(p);
}

TEST_CASE("C API error reporting") {
  fcv_problem* p = nullptr;
  CHECK(fcv_problem_create("torus0", "grid", 4, nullptr, 0, &p) == FCV_ERR_VALIDATION);
  CHECK(std::strlen(fcv_last_error()) > 0);

  const auto coords = equispaced_coords(8);
  REQUIRE(fcv_problem_create("torus1", "grid", 8, coords.data(), 8, &p) == FCV_OK);
  // scores before configuration fail with validation errors
  double s = 0.0;
  CHECK(fcv_problem_score(p, 1e-3, &s, nullptr, nullptr) == FCV_ERR_VALIDATION);
  // exact minimization without certification is a certification error
  std::vector<double> vals(8, 1.0);
  CHECK(fcv_problem_set_values(p, vals.data(), nullptr, 8) == FCV_OK);
  CHECK(fcv_problem_use_uniform_weights(p) == FCV_OK);
  CHECK(fcv_problem_set_frequency_scheme(p, "sobolev:3") == FCV_OK);
  double l = 0.0;
  CHECK(fcv_problem_minimize(p, "P", 1e-6, 1.0, 10, &l, nullptr, nullptr) ==
        FCV_ERR_CERTIFICATION);
  CHECK(fcv_problem_minimize(p, "Q", 1e-6, 1.0, 10, &l, nullptr, nullptr) == FCV_ERR_VALIDATION);
  fcv_problem_free(p);
}

TEST_CASE("C API standalone utilities") {
  size_t size = 0;
  CHECK(fcv_index_size("hyperbolic", 2, 2, &size) == FCV_OK);
  CHECK(size == 21);
  CHECK(fcv_index_size("spherical", 2, 3, &size) == FCV_OK);
  CHECK(size == 16);

  const auto coords = equispaced_coords(10);
  std::vector<double> w(10);
  CHECK(fcv_voronoi_weights("torus1", coords.data(), 10, w.data()) == FCV_OK);
  for (double v : w) CHECK(v == doctest::Approx(0.1).epsilon(1e-14));
  double delta = 0.0;
  CHECK(fcv_mesh_norm("torus1", coords.data(), 10, &delta) == FCV_OK);
  CHECK(delta == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("C API generation and file-based assembly") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fcv_capi_gen";
  fs::remove_all(dir);

  char names[512] = {0};
  CHECK(fcv_preset_list(names, sizeof names) == FCV_OK);
  CHECK(std::strstr(names, "interval-cheb") != nullptr);

  char summary[256] = {0};
  REQUIRE(fcv_generate("interval-cheb", "{\"n\":16,\"seed\":3}", FCV_TEST_DATA_DIR,
                       dir.string().c_str(), summary, sizeof summary) == FCV_OK);
  CHECK(std::strstr(summary, "|X|=16") != nullptr);

  fcv_problem* p = nullptr;
  const std::string rule = (dir / "rule.json").string();
  const std::string values = (dir / "values.csv").string();
  REQUIRE(fcv_problem_create_from_rule(rule.c_str(), "chebyshev", 16, values.c_str(), &p) ==
          FCV_OK);
  CHECK(fcv_problem_set_frequency_scheme(p, "cheb:3") == FCV_OK);
  CHECK(fcv_problem_load_truth(p, (dir / "truth.json").string().c_str()) == FCV_OK);
  int certified = 0;
  CHECK(fcv_problem_certify(p, 0.0, &certified, nullptr) == FCV_OK);
  CHECK(certified == 1);
  double ps = 0.0;
  CHECK(fcv_problem_score(p, 1e-4, &ps, nullptr, nullptr) == FCV_OK);
  CHECK(std::isfinite(ps));

  const std::string spec_json = (dir / "coeff.json").string();
  const std::string recon = (dir / "recon.csv").string();
  CHECK(fcv_problem_save_solution(p, 1e-4, spec_json.c_str(), recon.c_str()) == FCV_OK);
  CHECK(fs::exists(spec_json));
  CHECK(fs::exists(recon));
  fcv_problem_free(p);

  // determinism: same seed, byte-identical values.csv
  const fs::path dir2 = fs::temp_directory_path() / "fcv_capi_gen2";
  fs::remove_all(dir2);
  REQUIRE(fcv_generate("interval-cheb", "{\"n\":16,\"seed\":3}", FCV_TEST_DATA_DIR,
                       dir2.string().c_str(), summary, sizeof summary) == FCV_OK);
  std::ifstream a(dir / "values.csv"), b(dir2 / "values.csv");
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);

  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("C API rank-1 problems") {
  fcv_problem* p = nullptr;
  const long long z[2] = {1, 12};
  REQUIRE(fcv_problem_create_rank1("hyperbolic", 4, z, 2, 54, &p) == FCV_OK);
  size_t nx = 0;
  CHECK(fcv_problem_num_nodes(p, &nx) == FCV_OK);
  CHECK(nx == 54);
  std::vector<double> vals(54, 1.0);
  CHECK(fcv_problem_set_values(p, vals.data(), nullptr, 54) == FCV_OK);
  CHECK(fcv_problem_use_uniform_weights(p) == FCV_OK);
  CHECK(fcv_problem_set_frequency_scheme(p, "poly:2") == FCV_OK);
  int certified = 0;
  CHECK(fcv_problem_certify(p, 0.0, &certified, nullptr) == FCV_OK);
  CHECK(certified == 1);  // structural: reconstructing lattice
  double ps = 0.0;
  CHECK(fcv_problem_score(p, 1e-2, &ps, nullptr, nullptr) == FCV_OK);
  CHECK(std::isfinite(ps));
  fcv_problem_free(p);
}
