#pragma once

#include <optional>
#include <string>

#include "fcv/crossval.hpp"
#include "fcv/quadrature.hpp"
#include "fcv/testbench.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace fcv {

using json = nlohmann::json;

/// Node CSV: one row per node, d coordinate columns (torus), 1 (interval) or
/// 3 (sphere), printed with 17 significant digits so round-trips are
/// bit-exact.
void write_nodes_csv(const std::string& path, const NodeSet& nodes);
NodeSet read_nodes_csv(const std::string& path, const Domain& domain);

/// Value CSV: two columns re,im per node.
void write_values_csv(const std::string& path, const cvec& values);
cvec read_values_csv(const std::string& path);

/// Weight CSV: one column.
void write_weights_csv(const std::string& path, const rvec& weights);
rvec read_weights_csv(const std::string& path);

/// Score curve CSV with the fixed column order
/// lambda,P,V,P_tilde,V_tilde,residual,l2_error; unavailable cells stay
/// blank, guarded non-finite scores are written as "inf".
void write_curve_csv(const std::string& path, const ScoreCurve& curve);

/// Index sets serialize by their defining parameters, never by enumeration.
json index_set_to_json(const IndexSet& set);
IndexSet index_set_from_json(const json& j);

/// Spectrum JSON: {"index": {...}, "coefficients": [[re,im], ...]} plus any
/// extra top-level fields.
void write_spectrum_json(const std::string& path, const IndexSet& set, const cvec& coeffs,
                         const json& extra = json::object());
std::pair<IndexSet, cvec> read_spectrum_json(const std::string& path);

/// External quadrature rule descriptor:
///   { "domain": ..., "nodes_csv": path, "weights": [...] | "uniform",
///     "exactness_degree": int | null, "lattice": {"z": [...], "m": M}? }
/// nodes_csv resolves relative to the descriptor's directory; "uniform"
/// means measure/|X|.
struct RuleDescriptor {
  QuadratureRule rule;
  std::optional<Rank1Lattice> lattice;
};
RuleDescriptor load_rule_descriptor(const std::string& json_path);
void write_rule_descriptor(const std::string& json_path, const Domain& domain,
                           const std::string& nodes_csv_name, const rvec* explicit_weights,
                           std::optional<int> exactness, const Rank1Lattice* lattice);

/// Named test lattices from a data file {"lattices": [{"name", "z", "m"}]}.
Rank1Lattice load_lattice(const std::string& lattices_json_path, const std::string& name);

/// Frequency weight schemes: "sobolev:s" (1 + |n|_2^s), "poly:p"
/// (prod max(|n_j|^p, 1)), "cheb:p" (n^p), "sphere:s" ((2n)^{2s}).
rvec frequency_weights_from_scheme(const std::string& scheme, const IndexSet& set);

/// One experiment definition; serializes round-trip identically.
struct ExperimentPreset {
  std::string name;
  Domain domain = Domain::torus(1);
  NodeScheme scheme = NodeScheme::Equispaced;
  std::size_t node_count = 0;  // scattered schemes; derived for structured ones
  IndexKind index_kind = IndexKind::TensorGrid;
  int index_n = 0;
  std::string fw_scheme;
  TestFunction function = TestFunction::Peaks1D;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double lambda_min = 0.0, lambda_max = 0.0;
  int lambda_grid = 40;
  std::string lattice_name;  // rank1 scheme
  std::string design_file;   // sphere-design scheme

  json to_json() const;
  static ExperimentPreset from_json(const json& j);
};

const std::vector<ExperimentPreset>& builtin_presets();
ExperimentPreset find_preset(const std::string& name);

/// Everything `gen` produces, before touching the filesystem. Values are
/// synthesized from the truth spectrum (the degree-limited reference of the
/// preset's test function) plus seeded noise, so Parseval L2 errors against
/// `truth` are exact.
struct GeneratedExperiment {
  ExperimentPreset preset;
  NodeSet nodes;
  IndexSet index;
  cvec truth;
  cvec values;
  rvec frequency_weights;
  std::optional<rvec> exact_weights;  // when the preset's nodes form a known rule
  std::optional<int> exactness_degree;
  std::optional<Rank1Lattice> lattice;
};
GeneratedExperiment generate_experiment(const ExperimentPreset& preset,
                                        const std::string& data_dir);

/// Writes nodes.csv, values.csv, truth.json and, when an exact rule is
/// attached, rule.json into out_dir.
void write_experiment(const GeneratedExperiment& g, const std::string& out_dir);

/// Directory with the repo's shipped data files (lattices, designs); defaults
/// to the FCV_DATA_DIR environment variable, falling back to "data".
std::string default_data_dir();

}  // namespace fcv
