#include "fcv/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fcv/error.hpp"
#include "fcv/fft.hpp"
#include "fcv/dct.hpp"

namespace fcv {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail_io("non-numeric cell '" + cell + "' in " + path + ":" + std::to_string(lineno));
      }
    }
    if (row.size() != columns)
      fail_io(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) +
              " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail_io(path + " is empty");
  return rows;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_nodes_csv(const std::string& path, const NodeSet& nodes) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto c = nodes.coords(i);
    for (std::size_t j = 0; j < c.size(); ++j) out << (j ? "," : "") << fmt17(c[j]);
    out << "\n";
  }
}

NodeSet read_nodes_csv(const std::string& path, const Domain& domain) {
  const auto rows = read_numeric_csv(path, domain.coord_count());
  std::vector<double> coords;
  coords.reserve(rows.size() * domain.coord_count());
  for (const auto& r : rows) coords.insert(coords.end(), r.begin(), r.end());
  return NodeSet(domain, std::move(coords));
}

void write_values_csv(const std::string& path, const cvec& values) {
  auto out = open_out(path);
  for (const cplx& z : values) out << fmt17(z.real()) << "," << fmt17(z.imag()) << "\n";
}

cvec read_values_csv(const std::string& path) {
  const auto rows = read_numeric_csv(path, 2);
  cvec out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = cplx(rows[i][0], rows[i][1]);
  return out;
}

void write_weights_csv(const std::string& path, const rvec& weights) {
  auto out = open_out(path);
  for (double w : weights) out << fmt17(w) << "\n";
}

rvec read_weights_csv(const std::string& path) {
  const auto rows = read_numeric_csv(path, 1);
  rvec out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][0];
  return out;
}

void write_curve_csv(const std::string& path, const ScoreCurve& curve) {
  auto out = open_out(path);
  out << "lambda,P,V,P_tilde,V_tilde,residual,l2_error\n";
  auto cell = [&](const std::optional<double>& v) -> std::string {
    if (!v) return "";
    if (!std::isfinite(*v)) return "inf";
    return fmt17(*v);
  };
  for (const ScoreCurveEntry& e : curve.entries) {
    out << fmt17(e.lambda) << "," << cell(e.p) << "," << cell(e.v) << "," << cell(e.p_approx)
        << "," << cell(e.v_approx) << "," << fmt17(e.residual) << "," << cell(e.l2_error) << "\n";
  }
}

json index_set_to_json(const IndexSet& set) {
  json j;
  switch (set.kind()) {
    case IndexKind::TensorGrid:
      j["kind"] = "grid";
      j["dim"] = set.index_dim();
      break;
    case IndexKind::HyperbolicCross:
      j["kind"] = "hyperbolic";
      j["dim"] = set.index_dim();
      break;
    case IndexKind::ChebyshevDegrees:
      j["kind"] = "chebyshev";
      break;
    case IndexKind::SphericalDegrees:
      j["kind"] = "spherical";
      break;
  }
  j["n"] = set.param_n();
  return j;
}

IndexSet index_set_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  if (kind == "grid") return IndexSet::tensor_grid(j.at("dim").get<int>(), n);
  if (kind == "hyperbolic") return IndexSet::hyperbolic_cross(j.at("dim").get<int>(), n);
  if (kind == "chebyshev") return IndexSet::chebyshev(n);
  if (kind == "spherical") return IndexSet::spherical(n);
  fail_io("unknown index set kind '" + kind + "'");
}

void write_spectrum_json(const std::string& path, const IndexSet& set, const cvec& coeffs,
                         const json& extra) {
  if (coeffs.size() != set.size()) fail_validation("write_spectrum_json: size mismatch");
  json j = extra;
  j["index"] = index_set_to_json(set);
  json arr = json::array();
  for (const cplx& z : coeffs) arr.push_back({z.real(), z.imag()});
  j["coefficients"] = std::move(arr);
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

std::pair<IndexSet, cvec> read_spectrum_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail_io("malformed JSON in '" + path + "': " + e.what());
  }
  IndexSet set = index_set_from_json(j.at("index"));
  cvec coeffs;
  for (const auto& pair : j.at("coefficients"))
    coeffs.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  if (coeffs.size() != set.size()) fail_io("'" + path + "': coefficient count mismatch");
  return {std::move(set), std::move(coeffs)};
}

RuleDescriptor load_rule_descriptor(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) fail_io("cannot open rule descriptor '" + json_path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail_io("malformed JSON in '" + json_path + "': " + e.what());
  }
  const Domain domain = parse_domain(j.at("domain").get<std::string>());
  const auto dir = std::filesystem::path(json_path).parent_path();
  const std::string nodes_csv = (dir / j.at("nodes_csv").get<std::string>()).string();
  NodeSet nodes = read_nodes_csv(nodes_csv, domain);

  rvec weights;
  const auto& w = j.at("weights");
  if (w.is_string() && w.get<std::string>() == "uniform") {
    weights.assign(nodes.size(), domain.measure() / static_cast<double>(nodes.size()));
  } else if (w.is_array()) {
    weights = w.get<rvec>();
  } else {
    fail_io("rule descriptor 'weights' must be \"uniform\" or an array");
  }
  weights = validate_spatial_weights(std::move(weights), nodes.size());

  std::optional<int> exactness;
  if (j.contains("exactness_degree") && !j.at("exactness_degree").is_null())
    exactness = j.at("exactness_degree").get<int>();

  RuleDescriptor out{QuadratureRule{std::move(nodes), std::move(weights), exactness}, std::nullopt};
  if (j.contains("lattice")) {
    const auto& lj = j.at("lattice");
    out.lattice = Rank1Lattice(lj.at("z").get<std::vector<long long>>(),
                               lj.at("m").get<long long>());
  }
  return out;
}

void write_rule_descriptor(const std::string& json_path, const Domain& domain,
                           const std::string& nodes_csv_name, const rvec* explicit_weights,
                           std::optional<int> exactness, const Rank1Lattice* lattice) {
  json j;
  j["domain"] = domain.name();
  j["nodes_csv"] = nodes_csv_name;
  if (explicit_weights)
    j["weights"] = *explicit_weights;
  else
    j["weights"] = "uniform";
  if (exactness)
    j["exactness_degree"] = *exactness;
  else
    j["exactness_degree"] = nullptr;
  if (lattice) j["lattice"] = {{"z", lattice->z}, {"m", lattice->m}};
  auto out = open_out(json_path);
  out << j.dump(2) << "\n";
}

Rank1Lattice load_lattice(const std::string& lattices_json_path, const std::string& name) {
  std::ifstream in(lattices_json_path);
  if (!in) fail_io("cannot open lattice data '" + lattices_json_path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail_io("malformed JSON in '" + lattices_json_path + "': " + e.what());
  }
  for (const auto& entry : j.at("lattices")) {
    if (entry.at("name").get<std::string>() == name)
      return Rank1Lattice(entry.at("z").get<std::vector<long long>>(),
                          entry.at("m").get<long long>());
  }
  fail_io("lattice '" + name + "' not found in " + lattices_json_path);
}

rvec frequency_weights_from_scheme(const std::string& scheme, const IndexSet& set) {
  const auto colon = scheme.find(':');
  if (colon == std::string::npos)
    fail_validation("frequency weight scheme must look like name:param, got '" + scheme + "'");
  const std::string name = scheme.substr(0, colon);
  double param = 0.0;
  try {
    param = std::stod(scheme.substr(colon + 1));
  } catch (const std::exception&) {
    fail_validation("bad frequency weight parameter in '" + scheme + "'");
  }

  rvec w(set.size());
  if (name == "sobolev") {
    if (set.index_dim() < 1 || set.kind() == IndexKind::SphericalDegrees ||
        set.kind() == IndexKind::ChebyshevDegrees)
      fail_validation("sobolev weights apply to torus index sets");
    for (std::size_t i = 0; i < set.size(); ++i) {
      auto idx = set.index(i);
      double n2 = 0.0;
      for (int v : idx) n2 += static_cast<double>(v) * v;
      w[i] = 1.0 + std::pow(std::sqrt(n2), param);
    }
  } else if (name == "poly") {
    if (set.kind() != IndexKind::TensorGrid && set.kind() != IndexKind::HyperbolicCross)
      fail_validation("poly weights apply to torus index sets");
    for (std::size_t i = 0; i < set.size(); ++i) {
      auto idx = set.index(i);
      double prod = 1.0;
      for (int v : idx) prod *= std::max(std::pow(std::abs(static_cast<double>(v)), param), 1.0);
      w[i] = prod;
    }
  } else if (name == "cheb") {
    if (set.kind() != IndexKind::ChebyshevDegrees)
      fail_validation("cheb weights apply to Chebyshev index sets");
    for (std::size_t i = 0; i < set.size(); ++i)
      w[i] = std::pow(static_cast<double>(set.index(i)[0]), param);
  } else if (name == "sphere") {
    if (set.kind() != IndexKind::SphericalDegrees)
      fail_validation("sphere weights apply to spherical index sets");
    for (std::size_t i = 0; i < set.size(); ++i)
      w[i] = std::pow(2.0 * set.index(i)[0], 2.0 * param);
  } else {
    fail_validation("unknown frequency weight scheme '" + name + "'");
  }
  return validate_frequency_weights(std::move(w), set);
}

json ExperimentPreset::to_json() const {
  json j;
  j["name"] = name;
  j["domain"] = domain.name();
  j["nodes"] = {{"scheme", node_scheme_name(scheme)}, {"count", node_count}};
  json idx;
  switch (index_kind) {
    case IndexKind::TensorGrid: idx["kind"] = "grid"; idx["dim"] = domain.dim; break;
    case IndexKind::HyperbolicCross: idx["kind"] = "hyperbolic"; idx["dim"] = domain.dim; break;
    case IndexKind::ChebyshevDegrees: idx["kind"] = "chebyshev"; break;
    case IndexKind::SphericalDegrees: idx["kind"] = "spherical"; break;
  }
  idx["n"] = index_n;
  j["index"] = idx;
  j["frequency_weights"] = fw_scheme;
  j["test_function"] = test_function_name(function);
  j["noise"] = noise;
  j["seed"] = seed;
  j["lambda"] = {{"min", lambda_min}, {"max", lambda_max}, {"grid", lambda_grid}};
  if (!lattice_name.empty()) j["lattice_name"] = lattice_name;
  if (!design_file.empty()) j["design_file"] = design_file;
  return j;
}

ExperimentPreset ExperimentPreset::from_json(const json& j) {
  ExperimentPreset p;
  p.name = j.at("name").get<std::string>();
  p.domain = parse_domain(j.at("domain").get<std::string>());
  p.scheme = parse_node_scheme(j.at("nodes").at("scheme").get<std::string>());
  p.node_count = j.at("nodes").at("count").get<std::size_t>();
  const IndexSet set = index_set_from_json(j.at("index"));
  p.index_kind = set.kind();
  p.index_n = set.param_n();
  p.fw_scheme = j.at("frequency_weights").get<std::string>();
  p.function = parse_test_function(j.at("test_function").get<std::string>());
  p.noise = j.at("noise").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.lambda_min = j.at("lambda").at("min").get<double>();
  p.lambda_max = j.at("lambda").at("max").get<double>();
  p.lambda_grid = j.at("lambda").at("grid").get<int>();
  if (j.contains("lattice_name")) p.lattice_name = j.at("lattice_name").get<std::string>();
  if (j.contains("design_file")) p.design_file = j.at("design_file").get<std::string>();
  return p;
}

const std::vector<ExperimentPreset>& builtin_presets() {
  static const std::vector<ExperimentPreset> presets = [] {
    std::vector<ExperimentPreset> v;
    auto add = [&](ExperimentPreset p) { v.push_back(std::move(p)); };

    {
      ExperimentPreset p;
      p.name = "torus2d-equispaced";
      p.domain = Domain::torus(2);
      p.scheme = NodeScheme::Equispaced;
      p.index_kind = IndexKind::TensorGrid;
      p.index_n = 64;
      p.node_count = 64ull * 64ull;
      p.fw_scheme = "sobolev:3";
      p.function = TestFunction::Peaks2D;
      p.noise = 0.10;
      p.lambda_min = std::pow(2.0, -18);
      p.lambda_max = std::pow(2.0, -8);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "torus1d-equispaced";
      p.domain = Domain::torus(1);
      p.scheme = NodeScheme::Equispaced;
      p.index_kind = IndexKind::TensorGrid;
      p.index_n = 256;
      p.node_count = 256;
      p.fw_scheme = "sobolev:3";
      p.function = TestFunction::Peaks1D;
      p.noise = 0.10;
      p.lambda_min = std::pow(2.0, -18);
      p.lambda_max = std::pow(2.0, -6);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "torus1d-scattered";
      p.domain = Domain::torus(1);
      p.scheme = NodeScheme::SquaredUniform;
      p.index_kind = IndexKind::TensorGrid;
      p.index_n = 64;
      p.node_count = 128;
      p.fw_scheme = "sobolev:3";
      p.function = TestFunction::Peaks1D;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -18);
      p.lambda_max = std::pow(2.0, -4);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "torus2d-scattered";
      p.domain = Domain::torus(2);
      p.scheme = NodeScheme::SquaredUniform;
      p.index_kind = IndexKind::TensorGrid;
      p.index_n = 32;
      p.node_count = 2048;
      p.fw_scheme = "sobolev:3";
      p.function = TestFunction::Peaks2D;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -18);
      p.lambda_max = std::pow(2.0, -4);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "torus7-rank1";
      p.domain = Domain::torus(7);
      p.scheme = NodeScheme::Rank1;
      p.index_kind = IndexKind::HyperbolicCross;
      p.index_n = 2;
      p.node_count = 0;  // from the lattice
      p.fw_scheme = "poly:2";
      p.function = TestFunction::TensorBSpline2;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -9);
      p.lambda_max = 1.0;
      p.lattice_name = "hc7-n2";
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "interval-cheb";
      p.domain = Domain::interval();
      p.scheme = NodeScheme::Chebyshev;
      p.index_kind = IndexKind::ChebyshevDegrees;
      p.index_n = 128;
      p.node_count = 128;
      p.fw_scheme = "cheb:3";
      p.function = TestFunction::Peaks1D;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -18);
      p.lambda_max = std::pow(2.0, -6);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "interval-uniform";
      p.domain = Domain::interval();
      p.scheme = NodeScheme::UniformInterval;
      p.index_kind = IndexKind::ChebyshevDegrees;
      p.index_n = 128;
      p.node_count = 128;
      p.fw_scheme = "cheb:3";
      p.function = TestFunction::Peaks1D;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -18);
      p.lambda_max = std::pow(2.0, -6);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "sphere-gauss";
      p.domain = Domain::sphere();
      p.scheme = NodeScheme::SphereGauss;
      p.index_kind = IndexKind::SphericalDegrees;
      p.index_n = 16;
      p.node_count = 17ull * 34ull;
      p.fw_scheme = "sphere:3";
      p.function = TestFunction::SphereBSplineSum;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -38);
      p.lambda_max = std::pow(2.0, -18);
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "sphere-design";
      p.domain = Domain::sphere();
      p.scheme = NodeScheme::SphereDesign;
      p.index_kind = IndexKind::SphericalDegrees;
      p.index_n = 2;
      p.node_count = 12;
      p.fw_scheme = "sphere:3";
      p.function = TestFunction::SphereBSplineSum;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -16);
      p.lambda_max = 1.0;
      p.design_file = "sphere_design_12.csv";
      add(p);
    }
    {
      ExperimentPreset p;
      p.name = "sphere-random";
      p.domain = Domain::sphere();
      p.scheme = NodeScheme::SphereRandom;
      p.index_kind = IndexKind::SphericalDegrees;
      p.index_n = 16;
      p.node_count = 2ull * 17ull * 17ull;
      p.fw_scheme = "sphere:3";
      p.function = TestFunction::SphereBSplineSum;
      p.noise = 0.05;
      p.lambda_min = std::pow(2.0, -38);
      p.lambda_max = std::pow(2.0, -18);
      add(p);
    }
    return v;
  }();
  return presets;
}

ExperimentPreset find_preset(const std::string& name) {
  for (const ExperimentPreset& p : builtin_presets())
    if (p.name == name) return p;
  std::string known;
  for (const ExperimentPreset& p : builtin_presets()) known += (known.empty() ? "" : ", ") + p.name;
  fail_validation("unknown preset '" + name + "' (known: " + known + ")");
}

namespace {

IndexSet preset_index_set(const ExperimentPreset& p) {
  switch (p.index_kind) {
    case IndexKind::TensorGrid: return IndexSet::tensor_grid(p.domain.dim, p.index_n);
    case IndexKind::HyperbolicCross: return IndexSet::hyperbolic_cross(p.domain.dim, p.index_n);
    case IndexKind::ChebyshevDegrees: return IndexSet::chebyshev(p.index_n);
    case IndexKind::SphericalDegrees: return IndexSet::spherical(p.index_n);
  }
  fail_validation("preset_index_set: bad kind");
}

// reference Fourier coefficients of a torus test function by analysis on a
// fine equispaced grid (4x the index resolution)
cvec torus_reference_coefficients(TestFunction f, const IndexSet& set) {
  const int d = set.index_dim();
  const int fine = 4 * std::max(set.param_n(), 8);
  NodeSet grid = equispaced_grid_nodes(d, fine);
  const cvec samples = eval_test_function(f, grid);
  cvec packed(samples.begin(), samples.end());
  std::vector<int> shape(d, fine);
  fft_nd(packed, shape, /*forward=*/true);
  const double scale = 1.0 / static_cast<double>(packed.size());
  cvec out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto idx = set.index(i);
    std::size_t bin = 0;
    for (int j = 0; j < d; ++j) bin = bin * fine + static_cast<std::size_t>(((idx[j] % fine) + fine) % fine);
    out[i] = packed[bin] * scale;
  }
  return out;
}

// reference Chebyshev coefficients by DCT-II analysis at a fine node set
cvec interval_reference_coefficients(TestFunction f, const IndexSet& set) {
  const int fine = std::max(1024, 4 * set.param_n());
  NodeSet nodes = chebyshev_nodes(fine);
  const cvec samples = eval_test_function(f, nodes);
  rvec re(fine);
  for (int i = 0; i < fine; ++i) re[i] = samples[i].real();
  const rvec t = dct_ii(re);
  cvec out(set.size());
  for (std::size_t n = 0; n < set.size(); ++n) {
    const double a = n == 0 ? t[0] / std::sqrt(static_cast<double>(fine))
                            : t[n] * std::sqrt(2.0 / fine);
    out[n] = a;
  }
  return out;
}

// degree-limited reference on the sphere by Gauss-tensor analysis
cvec sphere_reference_coefficients(TestFunction f, const IndexSet& set) {
  QuadratureRule rule = gauss_tensor_sphere_rule(set.param_n());
  auto op = spherical_operator(rule.nodes, set.param_n());
  cvec samples = eval_test_function(f, rule.nodes);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] *= rule.weights[i];
  return op->adjoint_apply(samples);
}

}  // namespace

GeneratedExperiment generate_experiment(const ExperimentPreset& preset,
                                        const std::string& data_dir) {
  GeneratedExperiment g{preset,
                        NodeSet(Domain::torus(1), {0.0}),
                        preset_index_set(preset),
                        {},
                        {},
                        {},
                        std::nullopt,
                        std::nullopt,
                        std::nullopt};

  // nodes and, where known, the exact rule
  switch (preset.scheme) {
    case NodeScheme::Equispaced: {
      QuadratureRule r = equispaced_torus_rule(preset.domain.dim, preset.index_n);
      g.nodes = r.nodes;
      g.exact_weights = r.weights;
      g.exactness_degree = r.exactness_degree;
      break;
    }
    case NodeScheme::Rank1: {
      const Rank1Lattice lattice =
          load_lattice(data_dir + "/lattices.json", preset.lattice_name);
      Rank1RuleResult r = rank1_rule(lattice, g.index);
      if (!r.reconstructing)
        fail_certification("lattice '" + preset.lattice_name +
                           "' does not reconstruct the preset index set");
      g.nodes = r.rule.nodes;
      g.exact_weights = r.rule.weights;
      g.lattice = lattice;
      break;
    }
    case NodeScheme::Chebyshev: {
      QuadratureRule r = chebyshev_rule(preset.index_n);
      g.nodes = r.nodes;
      g.exact_weights = r.weights;
      g.exactness_degree = r.exactness_degree;
      break;
    }
    case NodeScheme::SphereGauss: {
      QuadratureRule r = gauss_tensor_sphere_rule(preset.index_n);
      g.nodes = r.nodes;
      g.exact_weights = r.weights;
      g.exactness_degree = r.exactness_degree;
      break;
    }
    case NodeScheme::SphereDesign: {
      RuleDescriptor desc = load_rule_descriptor(data_dir + "/" + preset.design_file + ".json");
      g.nodes = desc.rule.nodes;
      g.exact_weights = desc.rule.weights;
      g.exactness_degree = desc.rule.exactness_degree;
      break;
    }
    case NodeScheme::SquaredUniform:
    case NodeScheme::UniformInterval:
    case NodeScheme::SphereRandom:
      g.nodes = make_scattered_nodes(preset.scheme, preset.domain, preset.node_count, preset.seed);
      break;
  }

  // degree-limited truth, synthesized samples, seeded noise
  switch (preset.function) {
    case TestFunction::TensorBSpline2:
      g.truth = bspline_fourier_coefficients(g.index);
      break;
    case TestFunction::Peaks1D:
      g.truth = preset.domain.kind == DomainKind::Interval
                    ? interval_reference_coefficients(preset.function, g.index)
                    : torus_reference_coefficients(preset.function, g.index);
      break;
    case TestFunction::Peaks2D:
      g.truth = torus_reference_coefficients(preset.function, g.index);
      break;
    case TestFunction::SphereBSplineSum:
      g.truth = sphere_reference_coefficients(preset.function, g.index);
      break;
  }

  auto op = g.lattice ? rank1_lattice_operator(*g.lattice, g.index) : make_operator(g.nodes, g.index);
  g.values = add_noise(op->apply(g.truth), preset.noise, preset.seed);
  g.frequency_weights = frequency_weights_from_scheme(preset.fw_scheme, g.index);
  return g;
}

void write_experiment(const GeneratedExperiment& g, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = [&](const char* f) { return (std::filesystem::path(out_dir) / f).string(); };
  write_nodes_csv(path("nodes.csv"), g.nodes);
  write_values_csv(path("values.csv"), g.values);
  json extra;
  extra["preset"] = g.preset.to_json();
  write_spectrum_json(path("truth.json"), g.index, g.truth, extra);
  if (g.exact_weights) {
    const double uniform = g.nodes.domain().measure() / static_cast<double>(g.nodes.size());
    bool is_uniform = true;
    for (double w : *g.exact_weights) is_uniform &= w == uniform;
    write_rule_descriptor(path("rule.json"), g.nodes.domain(), "nodes.csv",
                          is_uniform ? nullptr : &*g.exact_weights, g.exactness_degree,
                          g.lattice ? &*g.lattice : nullptr);
  }
}

std::string default_data_dir() {
  if (const char* env = std::getenv("FCV_DATA_DIR")) return env;
  return "data";
}

}  // namespace fcv
