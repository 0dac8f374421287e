#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ambient.hpp"
#include "geometry.hpp"
#include "mesh.hpp"
#include "stability.hpp"
#include "toml.hpp"

namespace stcmc {

struct ModelConfig {
  std::string kind = "minkowski";
  double mass = 1.0;
  double curvature = -1.0;
  double lambda = 0.0;
  std::string phi;
  std::vector<std::string> k_exprs;  // xx, xy, xz, yy, yz, zz
  std::string einstein_policy;       // assume-vacuum | constant-lambda | explicit-field
  std::string einstein_nn;
};

struct SurfaceConfig {
  std::string kind = "sphere";  // sphere | radial-graph | off
  double radius = 1.0;
  Vec3 center = Vec3::Zero();
  int level = 5;
  std::string rho;   // radial-graph expression in the unit direction (x, y, z)
  std::string path;  // off file
};

struct SolverConfig {
  double eigen_tol = 1e-9;
  int max_iterations = 5000;
  std::uint64_t seed = 12345;
  double stcmc_cov_tol = 1e-3;
  double equality_tol = 0.01;
  std::string vertex_area = "mixed";  // mixed | barycentric
  double hersch_tol = 1e-8;
  int hersch_max_iterations = 500;
  double roundness_cov_tol = 0.05;
};

struct AnalysesConfig {
  std::vector<std::string> run;
  double lambda = 0.0;
  int spectrum_count = 8;
  std::vector<double> sigma_list = {50, 100, 200, 400, 800};
  std::vector<double> r_list = {5, 10, 20};
  int foliation_level = -1;  // -1: use surface.level
};

struct OutputConfig {
  std::string directory = ".";
  std::string json = "report.json";
  bool csv = true;
  bool mesh = false;
};

struct AnalysisConfig {
  ModelConfig model;
  SurfaceConfig surface;
  SolverConfig solver;
  AnalysesConfig analyses;
  OutputConfig output;

  static AnalysisConfig from_text(const std::string& toml_text);
  static AnalysisConfig from_file(const std::string& path);

  /// Canonical serialization; parsing it back reproduces the run.
  std::string to_toml() const;

  void validate() const;
  void set_override(const std::string& dotted_key, const std::string& value);

  AmbientModel build_model() const;
  SurfaceMesh build_mesh() const;
  GeometryOptions geometry_options() const;
  StabilityOptions stability_options() const;
  EigOptions eig_options() const;
};

/// Analyses the pipeline knows how to run, in their canonical order.
const std::vector<std::string>& known_analyses();

}  // namespace stcmc
