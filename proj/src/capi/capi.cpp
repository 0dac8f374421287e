#include "stcmc/stcmc.h"

#include <string>

#include "../core/config.hpp"
#include "../core/errors.hpp"
#include "../core/mesh.hpp"
#include "../core/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

stcmc_status to_status(const stcmc::Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case stcmc::ErrorCode::domain: return STCMC_ERR_DOMAIN;
    case stcmc::ErrorCode::geometry: return STCMC_ERR_GEOMETRY;
    case stcmc::ErrorCode::regime: return STCMC_ERR_REGIME;
    case stcmc::ErrorCode::numerical: return STCMC_ERR_NUMERICAL;
    case stcmc::ErrorCode::config: return STCMC_ERR_CONFIG;
    case stcmc::ErrorCode::io: return STCMC_ERR_IO;
    case stcmc::ErrorCode::unavailable: return STCMC_ERR_UNAVAILABLE;
    case stcmc::ErrorCode::size: return STCMC_ERR_SIZE;
    case stcmc::ErrorCode::invalid: return STCMC_ERR_INVALID;
    default: return STCMC_ERR_UNKNOWN;
  }
}

template <typename F>
stcmc_status guarded(F&& fn) {
  try {
    fn();
    return STCMC_OK;
  } catch (const stcmc::Error& e) {
    return to_status(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STCMC_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return STCMC_ERR_UNKNOWN;
  }
}

stcmc_status invalid(const char* msg) {
  g_last_error = msg;
  return STCMC_ERR_INVALID;
}

}  // namespace

extern "C" {

struct stcmc_config {
  stcmc::AnalysisConfig rep;
  mutable std::string toml_cache;
};

struct stcmc_report {
  stcmc::RunResult rep;
  mutable std::string json_cache;
};

struct stcmc_mesh {
  stcmc::SurfaceMesh rep;
};

const char* stcmc_version(void) { return "0.1.0"; }

const char* stcmc_last_error_message(void) { return g_last_error.c_str(); }

stcmc_status stcmc_config_load(const char* path, stcmc_config** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new stcmc_config{stcmc::AnalysisConfig::from_file(path), {}}; });
}

stcmc_status stcmc_config_parse(const char* toml_text, stcmc_config** out) {
  if (!toml_text || !out) return invalid("null argument");
  return guarded([&] { *out = new stcmc_config{stcmc::AnalysisConfig::from_text(toml_text), {}}; });
}

stcmc_status stcmc_config_set(stcmc_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return invalid("null argument");
  return guarded([&] { cfg->rep.set_override(key, value); });
}

stcmc_status stcmc_config_toml(const stcmc_config* cfg, const char** out_text) {
  if (!cfg || !out_text) return invalid("null argument");
  return guarded([&] {
    cfg->toml_cache = cfg->rep.to_toml();
    *out_text = cfg->toml_cache.c_str();
  });
}

void stcmc_config_free(stcmc_config* cfg) { delete cfg; }

stcmc_status stcmc_run(const stcmc_config* cfg, stcmc_report** out) {
  if (!cfg || !out) return invalid("null argument");
  return guarded([&] { *out = new stcmc_report{stcmc::run(cfg->rep), {}}; });
}

stcmc_status stcmc_run_suite(const char* name, int level, uint64_t seed, stcmc_report** out) {
  if (!name || !out) return invalid("null argument");
  return guarded([&] { *out = new stcmc_report{stcmc::run_suite(name, level, seed), {}}; });
}

stcmc_status stcmc_report_json(const stcmc_report* report, const char** out_text) {
  if (!report || !out_text) return invalid("null argument");
  return guarded([&] {
    report->json_cache = report->rep.report.dump(2);
    *out_text = report->json_cache.c_str();
  });
}

int stcmc_report_ok(const stcmc_report* report) { return report && report->rep.ok ? 1 : 0; }

stcmc_status stcmc_report_write(const stcmc_report* report, const stcmc_config* cfg,
                                const char* directory) {
  if (!report || !cfg) return invalid("null argument");
  return guarded([&] { stcmc::emit(report->rep, cfg->rep, directory ? directory : ""); });
}

void stcmc_report_free(stcmc_report* report) { delete report; }

stcmc_status stcmc_mesh_icosphere(int level, double radius, double cx, double cy, double cz,
                                  stcmc_mesh** out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    *out = new stcmc_mesh{stcmc::build_icosphere(level, radius, stcmc::Vec3(cx, cy, cz))};
  });
}

stcmc_status stcmc_mesh_counts(const stcmc_mesh* mesh, int* vertices, int* faces) {
  if (!mesh) return invalid("null argument");
  if (vertices) *vertices = mesh->rep.vertex_count();
  if (faces) *faces = mesh->rep.face_count();
  return STCMC_OK;
}

stcmc_status stcmc_mesh_write_off(const stcmc_mesh* mesh, const char* path) {
  if (!mesh || !path) return invalid("null argument");
  return guarded([&] { stcmc::write_off(mesh->rep, path); });
}

stcmc_status stcmc_mesh_read_off(const char* path, stcmc_mesh** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new stcmc_mesh{stcmc::read_off(path)}; });
}

void stcmc_mesh_free(stcmc_mesh* mesh) { delete mesh; }

}  // extern "C"
