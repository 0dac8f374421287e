#include "config.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace stcmc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // TOML floats need a dot or exponent.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out + "]";
}

std::string fmt_list(const std::vector<std::string>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quote(v[i]);
  return out + "]";
}

}  // namespace

const std::vector<std::string>& known_analyses() {
  static const std::vector<std::string> names = {
      "geometry",    "spectrum", "stability-cmc", "stability-stcmc",
      "energies",    "inequalities", "foliation", "residuals"};
  return names;
}

AnalysisConfig AnalysisConfig::from_text(const std::string& toml_text) {
  const toml::Table t = toml::Table::parse(toml_text);
  AnalysisConfig c;

  if (!t.has_section("model") && !t.has("model.kind"))
    throw ConfigError("missing [model] section");
  c.model.kind = t.str("model.kind", "");
  c.model.mass = t.number("model.mass", c.model.mass);
  c.model.curvature = t.number("model.curvature", c.model.curvature);
  c.model.lambda = t.number("model.lambda", c.model.lambda);
  c.model.phi = t.str("model.phi", "");
  if (t.has("model.k")) c.model.k_exprs = t.string_list("model.k");
  c.model.einstein_policy = t.str("model.einstein_policy", "");
  c.model.einstein_nn = t.str("model.einstein_nn", "");

  c.surface.kind = t.str("surface.kind", c.surface.kind);
  c.surface.radius = t.number("surface.radius", c.surface.radius);
  if (t.has("surface.center")) {
    const auto v = t.number_list("surface.center");
    if (v.size() != 3) throw ConfigError("surface.center needs 3 components");
    c.surface.center = Vec3(v[0], v[1], v[2]);
  }
  c.surface.level = static_cast<int>(t.integer("surface.level", c.surface.level));
  c.surface.rho = t.str("surface.rho", "");
  c.surface.path = t.str("surface.path", "");

  c.solver.eigen_tol = t.number("solver.eigen_residual_tol", c.solver.eigen_tol);
  c.solver.max_iterations =
      static_cast<int>(t.integer("solver.max_iterations", c.solver.max_iterations));
  c.solver.seed = static_cast<std::uint64_t>(t.integer("solver.seed", c.solver.seed));
  c.solver.stcmc_cov_tol = t.number("solver.stcmc_cov_tol", c.solver.stcmc_cov_tol);
  c.solver.equality_tol = t.number("solver.equality_tol", c.solver.equality_tol);
  c.solver.vertex_area = t.str("solver.vertex_area", c.solver.vertex_area);
  c.solver.hersch_tol = t.number("solver.hersch_tol", c.solver.hersch_tol);
  c.solver.hersch_max_iterations = static_cast<int>(
      t.integer("solver.hersch_max_iterations", c.solver.hersch_max_iterations));
  c.solver.roundness_cov_tol = t.number("solver.roundness_cov_tol", c.solver.roundness_cov_tol);

  if (t.has("analyses.run")) c.analyses.run = t.string_list("analyses.run");
  c.analyses.lambda = t.number("analyses.lambda", c.analyses.lambda);
  c.analyses.spectrum_count =
      static_cast<int>(t.integer("analyses.spectrum_count", c.analyses.spectrum_count));
  if (t.has("analyses.sigma_list")) c.analyses.sigma_list = t.number_list("analyses.sigma_list");
  if (t.has("analyses.r_list")) c.analyses.r_list = t.number_list("analyses.r_list");
  c.analyses.foliation_level =
      static_cast<int>(t.integer("analyses.foliation_level", c.analyses.foliation_level));

  c.output.directory = t.str("output.directory", c.output.directory);
  c.output.json = t.str("output.json", c.output.json);
  c.output.csv = t.boolean("output.csv", c.output.csv);
  c.output.mesh = t.boolean("output.mesh", c.output.mesh);

  c.validate();
  return c;
}

AnalysisConfig AnalysisConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string AnalysisConfig::to_toml() const {
  std::ostringstream os;
  os << "[model]\n";
  os << "kind = " << quote(model.kind) << "\n";
  os << "mass = " << fmt(model.mass) << "\n";
  os << "curvature = " << fmt(model.curvature) << "\n";
  os << "lambda = " << fmt(model.lambda) << "\n";
  if (!model.phi.empty()) os << "phi = " << quote(model.phi) << "\n";
  if (!model.k_exprs.empty()) os << "k = " << fmt_list(model.k_exprs) << "\n";
  if (!model.einstein_policy.empty())
    os << "einstein_policy = " << quote(model.einstein_policy) << "\n";
  if (!model.einstein_nn.empty()) os << "einstein_nn = " << quote(model.einstein_nn) << "\n";

  os << "\n[surface]\n";
  os << "kind = " << quote(surface.kind) << "\n";
  os << "radius = " << fmt(surface.radius) << "\n";
  os << "center = [" << fmt(surface.center(0)) << ", " << fmt(surface.center(1)) << ", "
     << fmt(surface.center(2)) << "]\n";
  os << "level = " << surface.level << "\n";
  if (!surface.rho.empty()) os << "rho = " << quote(surface.rho) << "\n";
  if (!surface.path.empty()) os << "path = " << quote(surface.path) << "\n";

  os << "\n[solver]\n";
  os << "eigen_residual_tol = " << fmt(solver.eigen_tol) << "\n";
  os << "max_iterations = " << solver.max_iterations << "\n";
  os << "seed = " << solver.seed << "\n";
  os << "stcmc_cov_tol = " << fmt(solver.stcmc_cov_tol) << "\n";
  os << "equality_tol = " << fmt(solver.equality_tol) << "\n";
  os << "vertex_area = " << quote(solver.vertex_area) << "\n";
  os << "hersch_tol = " << fmt(solver.hersch_tol) << "\n";
  os << "hersch_max_iterations = " << solver.hersch_max_iterations << "\n";
  os << "roundness_cov_tol = " << fmt(solver.roundness_cov_tol) << "\n";

  os << "\n[analyses]\n";
  os << "run = " << fmt_list(analyses.run) << "\n";
  os << "lambda = " << fmt(analyses.lambda) << "\n";
  os << "spectrum_count = " << analyses.spectrum_count << "\n";
  os << "sigma_list = " << fmt_list(analyses.sigma_list) << "\n";
  os << "r_list = " << fmt_list(analyses.r_list) << "\n";
  os << "foliation_level = " << analyses.foliation_level << "\n";

  os << "\n[output]\n";
  os << "directory = " << quote(output.directory) << "\n";
  os << "json = " << quote(output.json) << "\n";
  os << "csv = " << (output.csv ? "true" : "false") << "\n";
  os << "mesh = " << (output.mesh ? "true" : "false") << "\n";
  return os.str();
}

void AnalysisConfig::validate() const {
  static const std::vector<std::string> kinds = {"minkowski",   "schwarzschild", "hyperbolic",
                                                 "spherical",   "cosmological",  "conformal"};
  if (model.kind.empty()) throw ConfigError("model.kind is required");
  if (std::find(kinds.begin(), kinds.end(), model.kind) == kinds.end())
    throw ConfigError("unknown model.kind '" + model.kind + "'");
  if (model.kind == "conformal" && model.phi.empty())
    throw ConfigError("conformal model requires model.phi");
  if (!model.k_exprs.empty() && model.k_exprs.size() != 6)
    throw ConfigError("model.k needs 6 components (xx, xy, xz, yy, yz, zz)");
  if (!model.einstein_policy.empty() && model.einstein_policy != "assume-vacuum" &&
      model.einstein_policy != "constant-lambda" && model.einstein_policy != "explicit-field")
    throw ConfigError("unknown model.einstein_policy '" + model.einstein_policy + "'");

  if (surface.kind != "sphere" && surface.kind != "radial-graph" && surface.kind != "off")
    throw ConfigError("unknown surface.kind '" + surface.kind + "'");
  if (surface.kind == "radial-graph" && surface.rho.empty())
    throw ConfigError("radial-graph surface requires surface.rho");
  if (surface.kind == "off") {
    if (surface.path.empty()) throw ConfigError("off surface requires surface.path");
    if (!std::filesystem::exists(surface.path))
      throw ConfigError("surface.path does not exist: " + surface.path);
  }
  if (surface.level < 0 || surface.level > 8)
    throw ConfigError("surface.level must be in [0, 8]");

  if (solver.vertex_area != "mixed" && solver.vertex_area != "barycentric")
    throw ConfigError("solver.vertex_area must be 'mixed' or 'barycentric'");

  if (analyses.run.empty()) throw ConfigError("analyses.run must request at least one analysis");
  for (const std::string& a : analyses.run) {
    const auto& known = known_analyses();
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw ConfigError("unknown analysis '" + a + "'");
  }
}

void AnalysisConfig::set_override(const std::string& key, const std::string& value) {
  auto as_int = [&] { return std::stoll(value); };
  auto as_num = [&] { return std::stod(value); };
  if (key == "surface.level") surface.level = static_cast<int>(as_int());
  else if (key == "surface.radius") surface.radius = as_num();
  else if (key == "surface.kind") surface.kind = value;
  else if (key == "surface.rho") surface.rho = value;
  else if (key == "surface.path") surface.path = value;
  else if (key == "solver.seed") solver.seed = static_cast<std::uint64_t>(as_int());
  else if (key == "solver.vertex_area") solver.vertex_area = value;
  else if (key == "model.kind") model.kind = value;
  else if (key == "model.mass") model.mass = as_num();
  else if (key == "model.lambda") model.lambda = as_num();
  else if (key == "analyses.lambda") analyses.lambda = as_num();
  else if (key == "analyses.spectrum_count") analyses.spectrum_count = static_cast<int>(as_int());
  else if (key == "analyses.foliation_level")
    analyses.foliation_level = static_cast<int>(as_int());
  else if (key == "analyses.run") {
    analyses.run.clear();
    std::istringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) analyses.run.push_back(tok);
    }
  } else if (key == "output.directory") output.directory = value;
  else if (key == "output.json") output.json = value;
  else if (key == "output.csv") output.csv = value == "true" || value == "1";
  else if (key == "output.mesh") output.mesh = value == "true" || value == "1";
  else throw ConfigError("unknown override key '" + key + "'");
  validate();
}

AmbientModel AnalysisConfig::build_model() const {
  if (model.kind == "minkowski") return AmbientModel::minkowski();
  if (model.kind == "schwarzschild") return AmbientModel::schwarzschild(model.mass);
  if (model.kind == "hyperbolic") return AmbientModel::hyperbolic(model.curvature);
  if (model.kind == "spherical") return AmbientModel::spherical(model.curvature);
  if (model.kind == "cosmological") return AmbientModel::cosmological(model.lambda);
  if (model.kind == "conformal") {
    std::array<FieldExpr, 6> k{};
    for (size_t i = 0; i < model.k_exprs.size(); ++i)
      if (!model.k_exprs[i].empty()) k[i] = FieldExpr::parse(model.k_exprs[i]);
    EinsteinPolicy policy = EinsteinPolicy::unavailable;
    if (model.einstein_policy == "assume-vacuum") policy = EinsteinPolicy::assume_vacuum;
    if (model.einstein_policy == "constant-lambda") policy = EinsteinPolicy::constant_lambda;
    if (model.einstein_policy == "explicit-field") policy = EinsteinPolicy::explicit_field;
    FieldExpr nn;
    if (!model.einstein_nn.empty()) nn = FieldExpr::parse(model.einstein_nn);
    return AmbientModel::conformal(FieldExpr::parse(model.phi), std::move(k), policy, model.lambda,
                                   std::move(nn));
  }
  throw ConfigError("unknown model kind '" + model.kind + "'");
}

SurfaceMesh AnalysisConfig::build_mesh() const {
  if (surface.kind == "sphere") return build_icosphere(surface.level, surface.radius, surface.center);
  if (surface.kind == "radial-graph") {
    const SurfaceMesh base = build_icosphere(surface.level, 1.0);
    const FieldExpr rho = FieldExpr::parse(surface.rho);
    return embed_radial_graph(
        base, [&](const Vec3& u) { return rho.eval(u(0), u(1), u(2)); }, surface.center);
  }
  if (surface.kind == "off") return read_off(surface.path);
  throw ConfigError("unknown surface kind '" + surface.kind + "'");
}

GeometryOptions AnalysisConfig::geometry_options() const {
  GeometryOptions g;
  g.area_type =
      solver.vertex_area == "barycentric" ? VertexAreaType::barycentric : VertexAreaType::mixed;
  return g;
}

EigOptions AnalysisConfig::eig_options() const {
  EigOptions e;
  e.tol = solver.eigen_tol;
  e.max_iterations = solver.max_iterations;
  e.seed = solver.seed;
  return e;
}

StabilityOptions AnalysisConfig::stability_options() const {
  StabilityOptions s;
  s.stcmc_cov_tol = solver.stcmc_cov_tol;
  s.eig = eig_options();
  return s;
}

}  // namespace stcmc
