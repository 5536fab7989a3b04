#include "fcv.h"

#include <cstring>
#include <optional>
#include <string>

#include "fcv/crossval.hpp"
#include "fcv/error.hpp"
#include "fcv/io.hpp"
#include "fcv/operators.hpp"
#include "fcv/quadrature.hpp"
#include "fcv/tikhonov.hpp"
#include "fcv/voronoi.hpp"

namespace {

thread_local std::string g_last_error;

fcv_status map_kind(fcv::ErrorKind kind) {
  switch (kind) {
    case fcv::ErrorKind::Validation: return FCV_ERR_VALIDATION;
    case fcv::ErrorKind::Certification: return FCV_ERR_CERTIFICATION;
    case fcv::ErrorKind::Numeric: return FCV_ERR_NUMERIC;
    case fcv::ErrorKind::Io: return FCV_ERR_IO;
  }
  return FCV_ERR_NUMERIC;
}

}  // namespace

#define FCV_BEGIN try {
#define FCV_END                                  \
  return FCV_OK;                                 \
  }                                              \
  catch (const fcv::Error& e) {                  \
    g_last_error = e.what();                     \
    return map_kind(e.kind());                   \
  }                                              \
  catch (const std::exception& e) {              \
    g_last_error = e.what();                     \
    return FCV_ERR_NUMERIC;                      \
  }                                              \
  catch (...) {                                  \
    g_last_error = "unknown error";              \
    return FCV_ERR_NUMERIC;                      \
  }

struct fcv_problem {
  std::shared_ptr<const fcv::FourierOperator> op;
  std::optional<fcv::Rank1Lattice> lattice;
  fcv::rvec spatial_weights;
  fcv::rvec frequency_weights;
  fcv::cvec data;
  std::optional<fcv::cvec> truth;
  fcv::LsqrOptions lsqr;
  int threads = 1;
  std::optional<fcv::CertifyResult> cert;
};

struct fcv_curve {
  fcv::ScoreCurve curve;
};

namespace {

using fcv::cplx;
using fcv::cvec;
using fcv::rvec;

void require(bool cond, const char* msg) {
  if (!cond) fcv::fail_validation(msg);
}

fcv::IndexSet make_index_set(const std::string& kind, int dim, int n) {
  if (kind == "grid") return fcv::IndexSet::tensor_grid(dim, n);
  if (kind == "hyperbolic") return fcv::IndexSet::hyperbolic_cross(dim, n);
  if (kind == "chebyshev") return fcv::IndexSet::chebyshev(n);
  if (kind == "spherical") return fcv::IndexSet::spherical(n);
  fcv::fail_validation("unknown index kind '" + kind + "'");
}

// empty kind picks the domain's natural index family
fcv::IndexSet make_index_set_for(const fcv::Domain& dom, const char* kind, int n) {
  std::string k = kind ? kind : "";
  if (k.empty()) {
    switch (dom.kind) {
      case fcv::DomainKind::Torus: k = "grid"; break;
      case fcv::DomainKind::Interval: k = "chebyshev"; break;
      case fcv::DomainKind::Sphere2: k = "spherical"; break;
    }
  }
  fcv::IndexSet set = make_index_set(k, dom.dim, n);
  require(set.domain() == dom, "index kind does not match the domain");
  return set;
}

cvec pack_complex(const double* re, const double* im, std::size_t n) {
  require(re != nullptr, "re array is null");
  cvec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cplx(re[i], im ? im[i] : 0.0);
  return out;
}

void unpack_complex(const cvec& v, double* re, double* im) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (re) re[i] = v[i].real();
    if (im) im[i] = v[i].imag();
  }
}

fcv::TikhonovProblem build_problem(const fcv_problem& p) {
  require(static_cast<bool>(p.op), "problem has no operator");
  require(!p.data.empty(), "problem has no values (fcv_problem_set_values)");
  require(!p.spatial_weights.empty(),
          "problem has no spatial weights (set explicit, uniform, or Voronoi weights)");
  require(!p.frequency_weights.empty(),
          "problem has no frequency weights (set explicit weights or a scheme)");
  return fcv::TikhonovProblem(p.op, p.spatial_weights, p.frequency_weights, p.data);
}

fcv::ScoreEvaluator build_evaluator(const fcv_problem& p, bool with_oracle) {
  fcv::EvaluatorOptions opts;
  opts.certified = p.cert && p.cert->certified;
  opts.with_oracle = with_oracle;
  opts.lsqr = p.lsqr;
  if (p.truth) opts.truth = *p.truth;
  return fcv::ScoreEvaluator(build_problem(p), std::move(opts));
}

}  // namespace

const char* fcv_last_error(void) { return g_last_error.c_str(); }

fcv_status fcv_problem_create(const char* domain, const char* index_kind, int index_n,
                              const double* coords, size_t n_nodes, fcv_problem** out) {
  FCV_BEGIN
  require(out && domain && coords, "null argument");
  const fcv::Domain dom = fcv::parse_domain(domain);
  fcv::IndexSet set = make_index_set_for(dom, index_kind, index_n);
  std::vector<double> c(coords, coords + n_nodes * dom.coord_count());
  fcv::NodeSet nodes(dom, std::move(c));
  auto p = std::make_unique<fcv_problem>();
  p->op = fcv::make_operator(nodes, set);
  *out = p.release();
  FCV_END
}

fcv_status fcv_problem_create_rank1(const char* index_kind, int index_n, const long long* z,
                                    size_t dim, long long m, fcv_problem** out) {
  FCV_BEGIN
  require(out && index_kind && z && dim > 0, "null argument");
  fcv::Rank1Lattice lattice(std::vector<long long>(z, z + dim), m);
  fcv::IndexSet set = make_index_set(index_kind, static_cast<int>(dim), index_n);
  auto p = std::make_unique<fcv_problem>();
  p->op = fcv::rank1_lattice_operator(lattice, set);
  p->lattice = std::move(lattice);
  *out = p.release();
  FCV_END
}

fcv_status fcv_problem_create_from_files(const char* domain, const char* index_kind, int index_n,
                                         const char* nodes_csv, const char* values_csv,
                                         fcv_problem** out) {
  FCV_BEGIN
  require(out && domain && nodes_csv, "null argument");
  const fcv::Domain dom = fcv::parse_domain(domain);
  fcv::NodeSet nodes = fcv::read_nodes_csv(nodes_csv, dom);
  fcv::IndexSet set = make_index_set_for(dom, index_kind, index_n);
  auto p = std::make_unique<fcv_problem>();
  p->op = fcv::make_operator(nodes, set);
  if (values_csv) {
    p->data = fcv::read_values_csv(values_csv);
    require(p->data.size() == nodes.size(), "values.csv row count does not match nodes.csv");
  }
  *out = p.release();
  FCV_END
}

fcv_status fcv_problem_create_from_rule(const char* rule_json, const char* index_kind, int index_n,
                                        const char* values_csv, fcv_problem** out) {
  FCV_BEGIN
  require(out && rule_json, "null argument");
  fcv::RuleDescriptor desc = fcv::load_rule_descriptor(rule_json);
  const fcv::Domain dom = desc.rule.nodes.domain();
  fcv::IndexSet set = make_index_set_for(dom, index_kind, index_n);
  auto p = std::make_unique<fcv_problem>();
  if (desc.lattice) {
    p->op = fcv::rank1_lattice_operator(*desc.lattice, set);
    p->lattice = desc.lattice;
  } else {
    p->op = fcv::make_operator(desc.rule.nodes, set);
  }
  p->spatial_weights = desc.rule.weights;
  if (values_csv) {
    p->data = fcv::read_values_csv(values_csv);
    require(p->data.size() == desc.rule.nodes.size(), "values.csv row count does not match the rule");
  }
  *out = p.release();
  FCV_END
}

void fcv_problem_free(fcv_problem* p) { delete p; }

fcv_status fcv_problem_set_values(fcv_problem* p, const double* re, const double* im, size_t n) {
  FCV_BEGIN
  require(p, "null problem");
  require(n == p->op->node_set().size(), "value count does not match node count");
  p->data = pack_complex(re, im, n);
  FCV_END
}

fcv_status fcv_problem_set_frequency_weights(fcv_problem* p, const double* w, size_t n) {
  FCV_BEGIN
  require(p && w, "null argument");
  p->frequency_weights =
      fcv::validate_frequency_weights(rvec(w, w + n), p->op->index_set());
  FCV_END
}

fcv_status fcv_problem_set_frequency_scheme(fcv_problem* p, const char* scheme) {
  FCV_BEGIN
  require(p && scheme, "null argument");
  p->frequency_weights = fcv::frequency_weights_from_scheme(scheme, p->op->index_set());
  FCV_END
}

fcv_status fcv_problem_set_spatial_weights(fcv_problem* p, const double* w, size_t n) {
  FCV_BEGIN
  require(p && w, "null argument");
  p->spatial_weights = fcv::validate_spatial_weights(rvec(w, w + n), p->op->node_set().size());
  p->cert.reset();
  FCV_END
}

fcv_status fcv_problem_use_voronoi_weights(fcv_problem* p) {
  FCV_BEGIN
  require(p, "null problem");
  p->spatial_weights = fcv::voronoi_weights(p->op->node_set());
  p->cert.reset();
  FCV_END
}

fcv_status fcv_problem_use_uniform_weights(fcv_problem* p) {
  FCV_BEGIN
  require(p, "null problem");
  const fcv::NodeSet& nodes = p->op->node_set();
  p->spatial_weights.assign(nodes.size(),
                            nodes.domain().measure() / static_cast<double>(nodes.size()));
  p->cert.reset();
  FCV_END
}

fcv_status fcv_problem_set_truth(fcv_problem* p, const double* re, const double* im, size_t n) {
  FCV_BEGIN
  require(p, "null problem");
  require(n == p->op->index_set().size(), "truth spectrum size mismatch");
  p->truth = pack_complex(re, im, n);
  FCV_END
}

fcv_status fcv_problem_load_truth(fcv_problem* p, const char* truth_json) {
  FCV_BEGIN
  require(p && truth_json, "null argument");
  auto [set, coeffs] = fcv::read_spectrum_json(truth_json);
  require(set == p->op->index_set(), "truth index set does not match the problem");
  p->truth = std::move(coeffs);
  FCV_END
}

fcv_status fcv_problem_set_lsqr(fcv_problem* p, int max_iterations, double tolerance) {
  FCV_BEGIN
  require(p, "null problem");
  require(max_iterations >= 1, "max_iterations must be >= 1");
  require(tolerance >= 0.0, "tolerance must be >= 0");
  p->lsqr.max_iterations = max_iterations;
  p->lsqr.tolerance = tolerance;
  FCV_END
}

fcv_status fcv_problem_set_threads(fcv_problem* p, int threads) {
  FCV_BEGIN
  require(p, "null problem");
  require(threads >= 1, "threads must be >= 1");
  p->threads = threads;
  FCV_END
}

fcv_status fcv_problem_certify(fcv_problem* p, double threshold, int* certified,
                               double* gram_dev) {
  FCV_BEGIN
  require(p, "null problem");
  require(!p->spatial_weights.empty(), "set spatial weights before certifying");
  const double thr = threshold > 0.0 ? threshold : 1e-8;
  p->cert = fcv::certify_quadrature(*p->op, p->spatial_weights,
                                    p->lattice ? &*p->lattice : nullptr, thr);
  if (certified) *certified = p->cert->certified ? 1 : 0;
  if (gram_dev) *gram_dev = p->cert->gram_dev;
  FCV_END
}

fcv_status fcv_problem_num_nodes(const fcv_problem* p, size_t* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  *out = p->op->node_set().size();
  FCV_END
}

fcv_status fcv_problem_num_coefficients(const fcv_problem* p, size_t* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  *out = p->op->index_set().size();
  FCV_END
}

fcv_status fcv_problem_is_certified(const fcv_problem* p, int* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  *out = (p->cert && p->cert->certified) ? 1 : 0;
  FCV_END
}

fcv_status fcv_problem_get_spatial_weights(const fcv_problem* p, double* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  require(!p->spatial_weights.empty(), "no spatial weights set");
  std::memcpy(out, p->spatial_weights.data(), p->spatial_weights.size() * sizeof(double));
  FCV_END
}

fcv_status fcv_problem_mesh_norm(const fcv_problem* p, double* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  *out = fcv::mesh_norm(p->op->node_set());
  FCV_END
}

fcv_status fcv_problem_solve(const fcv_problem* p, double lambda, double* coeff_re,
                             double* coeff_im, int* iterations) {
  FCV_BEGIN
  require(p, "null problem");
  fcv::TikhonovProblem tp = build_problem(*p);
  const bool certified = p->cert && p->cert->certified;
  fcv::SolveResult res =
      certified ? fcv::solve_diagonal(tp, fcv::exact_gram_diagonal(p->op->index_set()), lambda)
                : fcv::solve_lsqr(tp, lambda, p->lsqr);
  unpack_complex(res.coefficients, coeff_re, coeff_im);
  if (iterations) *iterations = res.report.iterations;
  FCV_END
}

fcv_status fcv_problem_reconstruct(const fcv_problem* p, const double* coeff_re,
                                   const double* coeff_im, double* val_re, double* val_im) {
  FCV_BEGIN
  require(p && coeff_re, "null argument");
  const cvec coeffs = pack_complex(coeff_re, coeff_im, p->op->index_set().size());
  const cvec vals = p->op->apply(coeffs);
  unpack_complex(vals, val_re, val_im);
  FCV_END
}

fcv_status fcv_problem_hat_diagonals(const fcv_problem* p, double lambda, int brute_force,
                                     double* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  require(!p->spatial_weights.empty() && !p->frequency_weights.empty(),
          "weights must be set before computing hat diagonals");
  const fcv::HatDiagonals diag =
      brute_force
          ? fcv::hat_diagonals_bruteforce(*p->op, p->spatial_weights, p->frequency_weights, lambda)
          : fcv::hat_diagonals_closed_form(*p->op, p->spatial_weights, p->frequency_weights,
                                           lambda,
                                           (p->cert && p->cert->certified)
                                               ? fcv::HatKind::Exact
                                               : fcv::HatKind::Approximated);
  std::memcpy(out, diag.values.data(), diag.values.size() * sizeof(double));
  FCV_END
}

fcv_status fcv_problem_score(const fcv_problem* p, double lambda, double* p_score,
                             double* v_score, double* residual) {
  FCV_BEGIN
  require(p, "null problem");
  fcv::ScoreEvaluator ev = build_evaluator(*p, false);
  const fcv::ScoreCurveEntry row = ev.evaluate(lambda);
  const bool certified = p->cert && p->cert->certified;
  if (p_score) *p_score = certified ? *row.p : *row.p_approx;
  if (v_score) *v_score = certified ? *row.v : *row.v_approx;
  if (residual) *residual = row.residual;
  FCV_END
}

fcv_status fcv_problem_score_oracle(const fcv_problem* p, double lambda, double* p_score,
                                    double* v_score) {
  FCV_BEGIN
  require(p, "null problem");
  const fcv::ScoreValues sv = fcv::score_oracle_dense(build_problem(*p), lambda);
  if (p_score) *p_score = sv.p;
  if (v_score) *v_score = sv.v;
  FCV_END
}

fcv_status fcv_problem_score_loocv(const fcv_problem* p, double lambda, double* out) {
  FCV_BEGIN
  require(p && out, "null argument");
  *out = fcv::score_loocv_direct(build_problem(*p), lambda);
  FCV_END
}

fcv_status fcv_problem_curve(const fcv_problem* p, double lambda_min, double lambda_max,
                             int grid_points, int with_oracle, fcv_curve** out) {
  FCV_BEGIN
  require(p && out, "null argument");
  fcv::ScoreEvaluator ev = build_evaluator(*p, with_oracle != 0);
  auto c = std::make_unique<fcv_curve>();
  c->curve = fcv::score_curve(ev, fcv::log_lambda_grid(lambda_min, lambda_max, grid_points),
                              p->threads);
  *out = c.release();
  FCV_END
}

fcv_status fcv_problem_minimize(const fcv_problem* p, const char* score_kind, double lambda_min,
                                double lambda_max, int grid_points, double* lambda_star,
                                int* boundary, fcv_curve** curve_out) {
  FCV_BEGIN
  require(p && score_kind && lambda_star, "null argument");
  const fcv::ScoreKind kind = fcv::parse_score_kind(score_kind);
  const bool certified = p->cert && p->cert->certified;
  if ((kind == fcv::ScoreKind::P || kind == fcv::ScoreKind::V) && !certified)
    fcv::fail_certification("exact score requested but the rule is not certified");
  fcv::ScoreEvaluator ev = build_evaluator(*p, false);
  fcv::MinimizeResult res =
      fcv::minimize_lambda(ev, kind, lambda_min, lambda_max, grid_points, p->threads);
  *lambda_star = res.lambda_star;
  if (boundary) *boundary = res.boundary ? 1 : 0;
  if (curve_out) {
    auto c = std::make_unique<fcv_curve>();
    c->curve = std::move(res.curve);
    *curve_out = c.release();
  }
  FCV_END
}

fcv_status fcv_problem_save_solution(const fcv_problem* p, double lambda,
                                     const char* spectrum_json, const char* reconstruction_csv) {
  FCV_BEGIN
  require(p, "null problem");
  fcv::TikhonovProblem tp = build_problem(*p);
  const bool certified = p->cert && p->cert->certified;
  fcv::SolveResult res =
      certified ? fcv::solve_diagonal(tp, fcv::exact_gram_diagonal(p->op->index_set()), lambda)
                : fcv::solve_lsqr(tp, lambda, p->lsqr);
  if (spectrum_json) {
    fcv::json extra;
    extra["lambda"] = lambda;
    fcv::write_spectrum_json(spectrum_json, p->op->index_set(), res.coefficients, extra);
  }
  if (reconstruction_csv) fcv::write_values_csv(reconstruction_csv, p->op->apply(res.coefficients));
  FCV_END
}

fcv_status fcv_curve_size(const fcv_curve* c, size_t* out) {
  FCV_BEGIN
  require(c && out, "null argument");
  *out = c->curve.entries.size();
  FCV_END
}

fcv_status fcv_curve_get(const fcv_curve* c, size_t row, const char* column, double* value,
                         int* present) {
  FCV_BEGIN
  require(c && column && value && present, "null argument");
  require(row < c->curve.entries.size(), "row out of range");
  const fcv::ScoreCurveEntry& e = c->curve.entries[row];
  const std::string col = column;
  std::optional<double> v;
  if (col == "lambda")
    v = e.lambda;
  else if (col == "P")
    v = e.p;
  else if (col == "V")
    v = e.v;
  else if (col == "Pt")
    v = e.p_approx;
  else if (col == "Vt")
    v = e.v_approx;
  else if (col == "residual")
    v = e.residual;
  else if (col == "l2")
    v = e.l2_error;
  else if (col == "iterations")
    v = static_cast<double>(e.solver_iterations);
  else
    fcv::fail_validation("unknown curve column '" + col + "'");
  *present = v.has_value() ? 1 : 0;
  *value = v.value_or(0.0);
  FCV_END
}

fcv_status fcv_curve_write_csv(const fcv_curve* c, const char* path) {
  FCV_BEGIN
  require(c && path, "null argument");
  fcv::write_curve_csv(path, c->curve);
  FCV_END
}

void fcv_curve_free(fcv_curve* c) { delete c; }

fcv_status fcv_index_size(const char* index_kind, int dim, int n, size_t* out) {
  FCV_BEGIN
  require(index_kind && out, "null argument");
  *out = make_index_set(index_kind, dim, n).size();
  FCV_END
}

fcv_status fcv_voronoi_weights(const char* domain, const double* coords, size_t n_nodes,
                               double* weights) {
  FCV_BEGIN
  require(domain && coords && weights, "null argument");
  const fcv::Domain dom = fcv::parse_domain(domain);
  std::vector<double> c(coords, coords + n_nodes * dom.coord_count());
  const rvec w = fcv::voronoi_weights(fcv::NodeSet(dom, std::move(c)));
  std::memcpy(weights, w.data(), w.size() * sizeof(double));
  FCV_END
}

fcv_status fcv_mesh_norm(const char* domain, const double* coords, size_t n_nodes, double* out) {
  FCV_BEGIN
  require(domain && coords && out, "null argument");
  const fcv::Domain dom = fcv::parse_domain(domain);
  std::vector<double> c(coords, coords + n_nodes * dom.coord_count());
  *out = fcv::mesh_norm(fcv::NodeSet(dom, std::move(c)));
  FCV_END
}

fcv_status fcv_weights_write_csv(const char* path, const double* w, size_t n) {
  FCV_BEGIN
  require(path && w, "null argument");
  fcv::write_weights_csv(path, rvec(w, w + n));
  FCV_END
}

fcv_status fcv_preset_list(char* buf, size_t buflen) {
  FCV_BEGIN
  require(buf && buflen > 0, "null buffer");
  std::string names;
  for (const fcv::ExperimentPreset& p : fcv::builtin_presets())
    names += (names.empty() ? "" : ",") + p.name;
  if (names.size() + 1 > buflen) fcv::fail_validation("buffer too small");
  std::memcpy(buf, names.c_str(), names.size() + 1);
  FCV_END
}

fcv_status fcv_generate(const char* preset_name, const char* overrides_json, const char* data_dir,
                        const char* out_dir, char* summary, size_t summary_len) {
  FCV_BEGIN
  require(preset_name && out_dir, "null argument");
  fcv::ExperimentPreset preset = fcv::find_preset(preset_name);
  if (overrides_json && *overrides_json) {
    fcv::json j;
    try {
      j = fcv::json::parse(overrides_json);
    } catch (const std::exception& e) {
      fcv::fail_validation(std::string("bad overrides JSON: ") + e.what());
    }
    if (j.contains("n")) {
      preset.index_n = j.at("n").get<int>();
      if (preset.scheme == fcv::NodeScheme::Equispaced) {
        preset.node_count = 1;
        for (int k = 0; k < preset.domain.dim; ++k)
          preset.node_count *= static_cast<std::size_t>(preset.index_n);
      } else if (preset.scheme == fcv::NodeScheme::Chebyshev) {
        preset.node_count = static_cast<std::size_t>(preset.index_n);
      } else if (preset.scheme == fcv::NodeScheme::SphereGauss) {
        preset.node_count =
            static_cast<std::size_t>(preset.index_n + 1) * (2 * preset.index_n + 2);
      }
    }
    if (j.contains("count")) preset.node_count = j.at("count").get<std::size_t>();
    if (j.contains("noise")) preset.noise = j.at("noise").get<double>();
    if (j.contains("seed")) preset.seed = j.at("seed").get<std::uint64_t>();
  }
  const std::string dir = data_dir && *data_dir ? data_dir : fcv::default_data_dir();
  const fcv::GeneratedExperiment g = fcv::generate_experiment(preset, dir);
  fcv::write_experiment(g, out_dir);
  if (summary && summary_len > 0) {
    char line[256];
    std::snprintf(line, sizeof line,
                  "preset=%s |X|=%zu |I|=%zu noise=%g seed=%llu exact_rule=%s", preset.name.c_str(),
                  g.nodes.size(), g.index.size(), preset.noise,
                  static_cast<unsigned long long>(preset.seed),
                  g.exact_weights ? "yes" : "no");
    std::snprintf(summary, summary_len, "%s", line);
  }
  FCV_END
}
