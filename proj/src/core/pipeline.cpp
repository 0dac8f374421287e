#include "pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "checks.hpp"
#include "energies.hpp"
#include "errors.hpp"
#include "foliation.hpp"

namespace stcmc {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSchemaVersion = "1";

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

Json verdict_json(const InequalityVerdict& v) {
  return Json{{"name", v.name}, {"lhs", v.lhs},     {"rhs", v.rhs},
              {"slack", v.slack}, {"holds", v.holds}, {"equality", v.equality}};
}

Json assessment_json(const StabilityAssessment& a) {
  Json j;
  j["kind"] = a.kind == StabilityAssessment::Kind::cmc ? "cmc" : "stcmc";
  j["constant_mode_value"] = a.constant_mode_value;
  j["variational_minimum"] = a.variational_minimum;
  j["threshold"] = a.threshold;
  j["margin"] = a.margin;
  j["verdict_constant_mode"] = a.verdict_constant_mode;
  j["verdict_variational"] = a.verdict_variational;
  j["h2_mean"] = a.h2_mean;
  if (a.kind == StabilityAssessment::Kind::stcmc) {
    j["theta_product_cov"] = a.theta_product_cov;
    j["stcmc_within_tol"] = a.stcmc_within_tol;
  } else {
    j["hersch_integral"] = a.hersch_integral;
    j["hersch_bound"] = 8.0 * M_PI;
  }
  return j;
}

Json leaf_json(const FoliationLeafRecord& rec) {
  return Json{{"sigma", rec.sigma},
              {"areal_radius", rec.areal_radius},
              {"hawking", rec.hawking},
              {"constant_mode", rec.constant_mode_value},
              {"variational_margin", rec.variational_margin},
              {"relation_residual", rec.relation_residual},
              {"closed_form_constant_mode", rec.closed_form_constant_mode}};
}

// Lazily shared state across analyses of one run.
struct RunState {
  const AnalysisConfig& cfg;
  std::optional<AmbientModel> model;
  std::optional<SurfaceMesh> mesh;
  std::optional<InducedGeometry> geom;
  std::optional<PotentialField> potential;
  std::optional<RegimeInfo> regime;

  explicit RunState(const AnalysisConfig& c) : cfg(c) {}

  const AmbientModel& get_model() {
    if (!model) model = cfg.build_model();
    return *model;
  }
  const SurfaceMesh& get_mesh() {
    if (!mesh) mesh = cfg.build_mesh();
    return *mesh;
  }
  const InducedGeometry& get_geom() {
    if (!geom) geom = induced_geometry(get_mesh(), get_model(), cfg.geometry_options());
    return *geom;
  }
  const PotentialField& get_potential() {
    if (!potential) potential = stcmc_potential(get_geom(), get_model(), cfg.stability_options());
    return *potential;
  }
  const RegimeInfo& get_regime() {
    if (!regime) regime = stcmc_regime(get_geom(), cfg.stability_options());
    return *regime;
  }
};

Json run_geometry(RunState& st) {
  const InducedGeometry& g = st.get_geom();
  Json j;
  j["vertex_count"] = g.vertex_count();
  j["face_count"] = g.mesh.face_count();
  j["euler_characteristic"] = 2;
  j["total_area"] = g.total_area;
  j["area_radius"] = g.area_radius();
  j["total_curvature"] = g.integrate(g.scal);
  j["h_mean"] = g.area_mean(g.H);
  j["p_mean"] = g.area_mean(g.P);
  const VectorXd prod = g.theta_l.array() * g.theta_k.array();
  const double mean = g.area_mean(prod);
  j["theta_product_mean"] = mean;
  const VectorXd dev = prod.array() - mean;
  j["theta_product_cov"] =
      std::sqrt(g.area_mean(dev.array().square().matrix())) / std::max(std::abs(mean), 1e-300);
  j["roundness_cov"] = intrinsic_roundness_cov(g);
  return j;
}

Json run_spectrum(RunState& st) {
  const OperatorForms forms = assemble_laplacian(st.get_geom());
  const auto pairs = generalized_eigs(forms, st.cfg.analyses.spectrum_count, 1.0,
                                      st.cfg.eig_options());
  Json vals = Json::array();
  for (const auto& p : pairs) vals.push_back(p.value);
  return Json{{"count", st.cfg.analyses.spectrum_count},
              {"weight", 1.0},
              {"eigenvalues", vals},
              {"eigen_residual_tol", st.cfg.solver.eigen_tol}};
}

Json run_stability_cmc(RunState& st) {
  const auto a = cmc_jacobi_margin(st.get_geom(), st.get_model(), st.cfg.analyses.lambda,
                                   st.cfg.stability_options());
  Json j = assessment_json(a);
  j["lambda"] = st.cfg.analyses.lambda;
  return j;
}

Json run_stability_stcmc(RunState& st) {
  const auto a =
      variational_margin_stcmc(st.get_geom(), st.get_potential(), st.cfg.stability_options());
  Json j = assessment_json(a);
  j["potential_integral"] = st.get_geom().integrate(st.get_potential().V);
  return j;
}

Json run_energies(RunState& st) {
  const InducedGeometry& g = st.get_geom();
  Json j;
  j["hawking"] = hawking_energy(g);
  j["area_radius"] = g.area_radius();
  try {
    j["kly_round"] = kly_energy_round(g, st.cfg.solver.roundness_cov_tol);
  } catch (const Error& e) {
    j["kly_round"] = nullptr;
    j["kly_note"] = e.what();
  }
  try {
    const DeficitTerms t = deficit_decomposition(g, st.get_potential(), st.get_regime());
    j["deficit"] = Json{{"value", t.deficit},
                        {"energy_density_term", t.energy_density_term},
                        {"shear_term", t.shear_term},
                        {"twist_term", t.twist_term},
                        {"constant_mode_slack", t.constant_mode_slack},
                        {"identity_residual", t.identity_residual},
                        {"stcmc_within_tol", st.get_regime().stcmc_within_tol}};
  } catch (const Error& e) {
    j["deficit"] = nullptr;
    j["deficit_note"] = e.what();
  }
  return j;
}

Json run_inequalities(RunState& st) {
  const auto verdicts = inequality_report(st.get_geom(), st.get_model(), st.cfg.analyses.lambda,
                                          st.cfg.solver.equality_tol);
  Json arr = Json::array();
  for (const auto& v : verdicts) arr.push_back(verdict_json(v));
  return Json{{"tolerance", st.cfg.solver.equality_tol}, {"verdicts", arr}};
}

Json run_foliation(RunState& st) {
  const AmbientModel& model = st.get_model();
  if (model.kind() != ModelKind::minkowski && model.kind() != ModelKind::schwarzschild)
    throw UnavailableError("foliation analysis supports the minkowski and schwarzschild models");
  const double m = model.kind() == ModelKind::schwarzschild ? model.mass() : 0.0;

  Json j;
  const RelationCheck rel = area_radius_relation_check(model, st.cfg.analyses.sigma_list);
  Json rel_leaves = Json::array();
  for (const auto& rec : rel.leaves) rel_leaves.push_back(leaf_json(rec));
  j["relation"] = Json{{"leaves", rel_leaves},
                       {"fitted_exponent", rel.residual_zero ? Json(nullptr) : Json(rel.fitted_exponent)},
                       {"residual_zero", rel.residual_zero}};

  const int level =
      st.cfg.analyses.foliation_level > 0 ? st.cfg.analyses.foliation_level : st.cfg.surface.level;
  const auto table = schwarzschild_margin_table(m, st.cfg.analyses.r_list, level,
                                                st.cfg.stability_options());
  Json tbl = Json::array();
  for (const auto& rec : table) tbl.push_back(leaf_json(rec));
  j["margin_table"] = tbl;
  j["margin_table_level"] = level;

  Json nulls = Json::array();
  for (double sigma : st.cfg.analyses.sigma_list) {
    const NullLeafMargin nl = null_leaf_margin(sigma, m);
    nulls.push_back(Json{{"sigma", sigma},
                         {"lhs", nl.lhs},
                         {"threshold", nl.threshold},
                         {"margin", nl.margin}});
  }
  j["null_leaf"] = nulls;
  return j;
}

Json run_residuals(RunState& st) {
  const GaussResiduals res = gauss_residual(st.get_geom(), st.get_model());
  return Json{{"l1_riemannian", res.l1_riemannian},
              {"l1_spacetime", res.l1_spacetime},
              {"total_curvature", res.total_curvature}};
}

}  // namespace

RunResult run(const AnalysisConfig& cfg) {
  cfg.validate();
  RunState st(cfg);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["generator"] = Json{{"name", "stcmc"}, {"version", kVersion}};
  report["config_toml"] = cfg.to_toml();
  report["provenance"] =
      Json{{"artifact_version", kVersion},
           {"mesh_level", cfg.surface.level},
           {"vertex_area", cfg.solver.vertex_area},
           {"seed", cfg.solver.seed},
           {"tolerances", Json{{"eigen_residual_tol", cfg.solver.eigen_tol},
                               {"equality_tol", cfg.solver.equality_tol},
                               {"stcmc_cov_tol", cfg.solver.stcmc_cov_tol},
                               {"hersch_tol", cfg.solver.hersch_tol},
                               {"roundness_cov_tol", cfg.solver.roundness_cov_tol}}}};

  Json analyses = Json::object();
  Json timings = Json::object();
  bool ok = true;

  for (const std::string& name : cfg.analyses.run) {
    const double t0 = now_ms();
    try {
      if (name == "geometry") analyses[name] = run_geometry(st);
      else if (name == "spectrum") analyses[name] = run_spectrum(st);
      else if (name == "stability-cmc") analyses[name] = run_stability_cmc(st);
      else if (name == "stability-stcmc") analyses[name] = run_stability_stcmc(st);
      else if (name == "energies") analyses[name] = run_energies(st);
      else if (name == "inequalities") analyses[name] = run_inequalities(st);
      else if (name == "foliation") analyses[name] = run_foliation(st);
      else if (name == "residuals") analyses[name] = run_residuals(st);
      else throw ConfigError("unknown analysis '" + name + "'");
    } catch (const Error& e) {
      analyses[name] = Json{{"error", Json{{"code", static_cast<int>(e.code())},
                                           {"message", e.what()}}}};
      ok = false;
    }
    timings[name] = now_ms() - t0;
  }

  report["analyses"] = analyses;
  report["ok"] = ok;
  report["digest"] = "";
  report["timings_ms"] = timings;
  report["digest"] = report_digest(report);
  return RunResult{std::move(report), ok};
}

std::string report_digest(const Json& report) {
  Json clean = report;
  clean.erase("timings_ms");
  clean.erase("digest");
  const std::string dump = clean.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_csvs(const RunResult& result, const AnalysisConfig& cfg, const fs::path& dir) {
  const Json& analyses = result.report.at("analyses");

  if (analyses.contains("spectrum") && !analyses["spectrum"].contains("error")) {
    std::string csv = "index,eigenvalue\n";
    const auto& vals = analyses["spectrum"]["eigenvalues"];
    for (size_t i = 0; i < vals.size(); ++i)
      csv += std::to_string(i) + "," + csv_num(vals[i].get<double>()) + "\n";
    write_text(dir / "spectrum.csv", csv);
  }

  if (analyses.contains("foliation") && !analyses["foliation"].contains("error")) {
    auto leaf_csv = [&](const Json& leaves) {
      std::string csv = "sigma,r,hawking,constant_mode,variational_margin,relation_residual\n";
      for (const auto& l : leaves) {
        csv += csv_num(l["sigma"].get<double>()) + "," + csv_num(l["areal_radius"].get<double>()) +
               "," + csv_num(l["hawking"].get<double>()) + "," +
               csv_num(l["constant_mode"].get<double>()) + "," +
               csv_num(l["variational_margin"].get<double>()) + "," +
               csv_num(l["relation_residual"].get<double>()) + "\n";
      }
      return csv;
    };
    write_text(dir / "foliation_relation.csv", leaf_csv(analyses["foliation"]["relation"]["leaves"]));
    write_text(dir / "foliation_margins.csv", leaf_csv(analyses["foliation"]["margin_table"]));
    std::string csv = "sigma,lhs,threshold,margin\n";
    for (const auto& l : analyses["foliation"]["null_leaf"])
      csv += csv_num(l["sigma"].get<double>()) + "," + csv_num(l["lhs"].get<double>()) + "," +
             csv_num(l["threshold"].get<double>()) + "," + csv_num(l["margin"].get<double>()) + "\n";
    write_text(dir / "foliation_null_leaf.csv", csv);
  }

  // Per-vertex field tables need the geometry; rebuild only if requested.
  const bool want_fields = analyses.contains("geometry") && !analyses["geometry"].contains("error");
  const bool want_residuals =
      analyses.contains("residuals") && !analyses["residuals"].contains("error");
  if (want_fields || want_residuals) {
    const AmbientModel model = cfg.build_model();
    const SurfaceMesh mesh = cfg.build_mesh();
    const InducedGeometry geom = induced_geometry(mesh, model, cfg.geometry_options());
    if (want_fields) {
      std::string csv =
          "vertex,x,y,z,area,H,P,theta_l,theta_k,scal,B0_norm2,chi_l0_norm2,chi_k0_norm2\n";
      for (int i = 0; i < geom.vertex_count(); ++i) {
        const Vec3& x = geom.mesh.vertices[i];
        csv += std::to_string(i) + "," + csv_num(x(0)) + "," + csv_num(x(1)) + "," +
               csv_num(x(2)) + "," + csv_num(geom.area(i)) + "," + csv_num(geom.H(i)) + "," +
               csv_num(geom.P(i)) + "," + csv_num(geom.theta_l(i)) + "," +
               csv_num(geom.theta_k(i)) + "," + csv_num(geom.scal(i)) + "," +
               csv_num(geom.B0_norm2(i)) + "," + csv_num(geom.chi_l0_norm2(i)) + "," +
               csv_num(geom.chi_k0_norm2(i)) + "\n";
      }
      write_text(dir / "fields.csv", csv);
    }
    if (want_residuals) {
      const GaussResiduals res = gauss_residual(geom, model);
      std::string csv = "vertex,riemannian,spacetime\n";
      for (int i = 0; i < geom.vertex_count(); ++i)
        csv += std::to_string(i) + "," + csv_num(res.riemannian(i)) + "," +
               csv_num(res.spacetime(i)) + "\n";
      write_text(dir / "residuals.csv", csv);
    }
  }
}

}  // namespace

void emit(const RunResult& result, const AnalysisConfig& cfg,
          const std::string& directory_override) {
  const fs::path dir =
      directory_override.empty() ? fs::path(cfg.output.directory) : fs::path(directory_override);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::exists(dir)) throw IoError("cannot create output directory " + dir.string());

  write_text(dir / cfg.output.json, result.report.dump(2) + "\n");
  if (cfg.output.csv) emit_csvs(result, cfg, dir);
  if (cfg.output.mesh) write_off(cfg.build_mesh(), (dir / "surface.off").string());
}

namespace {

struct SuiteCheck {
  std::string name;
  double value;
  double reference;
  double tolerance;  // absolute
  bool pass;
};

Json check_json(const SuiteCheck& c) {
  return Json{{"name", c.name},
              {"value", c.value},
              {"reference", c.reference},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
}

SuiteCheck near(const std::string& name, double value, double reference, double tol) {
  return {name, value, reference, tol, std::abs(value - reference) <= tol};
}

SuiteCheck at_least(const std::string& name, double value, double reference) {
  return {name, value, reference, 0.0, value >= reference};
}

std::vector<SuiteCheck> suite_round_sphere(int level, std::uint64_t seed) {
  AnalysisConfig cfg;
  cfg.model.kind = "minkowski";
  cfg.surface.level = level;
  cfg.solver.seed = seed;
  cfg.analyses.run = {"geometry"};
  const AmbientModel model = cfg.build_model();
  const InducedGeometry geom = induced_geometry(cfg.build_mesh(), model, cfg.geometry_options());
  const PotentialField pot = stcmc_potential(geom, model, cfg.stability_options());
  const auto a = variational_margin_stcmc(geom, pot, cfg.stability_options());

  std::vector<SuiteCheck> cs;
  cs.push_back(near("variational-minimum", a.variational_minimum, 16.0, 0.32));
  cs.push_back(near("threshold", a.threshold, 16.0, 0.32));
  cs.push_back(near("constant-mode", a.constant_mode_value, 0.0, 0.32));
  cs.push_back(near("hawking", hawking_energy(geom), 0.0, 5e-3));
  const auto verdicts = inequality_report(geom, model, 0.0, cfg.solver.equality_tol);
  cs.push_back(near("cy-equality-flag", verdicts[0].equality ? 1.0 : 0.0, 1.0, 0.0));
  const auto esi = el_soufi_ilias_check(geom, VectorXd::Zero(geom.vertex_count()),
                                        cfg.eig_options(), cfg.solver.equality_tol);
  cs.push_back(near("el-soufi-ilias", esi.lhs, 8.0 * M_PI, 0.01 * 8.0 * M_PI));
  return cs;
}

std::vector<SuiteCheck> suite_schwarzschild(int level, std::uint64_t seed) {
  AnalysisConfig cfg;
  cfg.model.kind = "schwarzschild";
  cfg.model.mass = 1.0;
  cfg.surface.radius = 10.0;
  cfg.surface.level = level;
  cfg.solver.seed = seed;
  cfg.analyses.run = {"geometry"};
  const AmbientModel model = cfg.build_model();
  const InducedGeometry geom = induced_geometry(cfg.build_mesh(), model, cfg.geometry_options());
  const PotentialField pot = stcmc_potential(geom, model, cfg.stability_options());
  const RegimeInfo regime = stcmc_regime(geom, cfg.stability_options());

  const double h2 = 0.04 * 0.8;
  std::vector<SuiteCheck> cs;
  cs.push_back(near("hawking", hawking_energy(geom), 1.0, 5e-3));
  const DeficitTerms t = deficit_decomposition(geom, pot, regime);
  cs.push_back(near("deficit", t.deficit, 0.008, 1e-4));
  cs.push_back(near("deficit-identity-residual", t.identity_residual, 0.0, 1e-9));
  cs.push_back(near("constant-mode", constant_mode_stcmc(geom, pot),
                    16.0 * M_PI * h2 / 10.0, 0.01 * 16.0 * M_PI * h2 / 10.0));
  cs.push_back(near("kly-round", kly_energy_round(geom), 10.0 * (1.0 - std::sqrt(0.8)), 1e-2));
  return cs;
}

std::vector<SuiteCheck> suite_foliation() {
  const AmbientModel model = AmbientModel::schwarzschild(1.0);
  const RelationCheck rel = area_radius_relation_check(model, {50, 100, 200, 400, 800});
  std::vector<SuiteCheck> cs;
  cs.push_back(at_least("relation-exponent", rel.fitted_exponent, 3.9));
  double worst = 0;
  bool monotone = true;
  double prev = 0;
  for (const auto& leaf : rel.leaves) {
    worst = std::max(worst, std::abs(leaf.hawking - 1.0));
    if (leaf.areal_radius <= prev || leaf.areal_radius >= leaf.sigma) monotone = false;
    prev = leaf.areal_radius;
  }
  cs.push_back(near("leaf-hawking-max-error", worst, 0.0, 1e-6));
  cs.push_back(near("radius-monotone-below-sigma", monotone ? 1.0 : 0.0, 1.0, 0.0));
  const NullLeafMargin nl = null_leaf_margin(100.0, 1.0);
  cs.push_back(near("null-margin", nl.margin, 2.0 / 1e6, 1e-18));
  cs.push_back(near("null-margin-flat", null_leaf_margin(100.0, 0.0).margin, 0.0, 0.0));
  return cs;
}

}  // namespace

RunResult run_suite(const std::string& name, int level, std::uint64_t seed) {
  const int lvl = level > 0 ? level : 4;
  const std::uint64_t sd = seed ? seed : 12345;

  std::vector<std::pair<std::string, std::vector<SuiteCheck>>> groups;
  if (name == "round-sphere" || name == "all")
    groups.emplace_back("round-sphere", suite_round_sphere(lvl, sd));
  if (name == "schwarzschild" || name == "all")
    groups.emplace_back("schwarzschild", suite_schwarzschild(lvl, sd));
  if (name == "foliation" || name == "all") groups.emplace_back("foliation", suite_foliation());
  if (groups.empty())
    throw ConfigError("unknown suite '" + name +
                      "' (known: round-sphere, schwarzschild, foliation, all)");

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["generator"] = Json{{"name", "stcmc"}, {"version", kVersion}};
  report["suite"] = name;
  report["level"] = lvl;
  bool ok = true;
  Json out = Json::object();
  for (const auto& [gname, checks] : groups) {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back(check_json(c));
      ok = ok && c.pass;
    }
    out[gname] = arr;
  }
  report["checks"] = out;
  report["ok"] = ok;
  return RunResult{std::move(report), ok};
}

}  // namespace stcmc
