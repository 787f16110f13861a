#include "lcfopt.h"

#include <cstring>
#include <exception>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "material.hpp"
#include "pipeline.hpp"
#include "json.hpp"

// Definition of the opaque handle declared in the public header.
struct lcf_config {
  lcf::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

lcf_status map_code(lcf::ErrorCode code) {
  switch (code) {
    case lcf::ErrorCode::kInvalidArgument: return LCF_INVALID_ARGUMENT;
    case lcf::ErrorCode::kParse: return LCF_PARSE;
    case lcf::ErrorCode::kConstraint: return LCF_CONSTRAINT;
    case lcf::ErrorCode::kMesh: return LCF_MESH;
    case lcf::ErrorCode::kSolver: return LCF_SOLVER;
    case lcf::ErrorCode::kIo: return LCF_IO;
    case lcf::ErrorCode::kInternal: return LCF_INTERNAL;
  }
  return LCF_INTERNAL;
}

/// Runs `body`, translating exceptions into status codes + g_last_error.
template <typename F>
lcf_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const lcf::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LCF_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LCF_INTERNAL;
  }
}

lcf_status invalid(const char* msg) {
  g_last_error = msg;
  return LCF_INVALID_ARGUMENT;
}

lcf::MaterialParams to_params(const lcf_material& m) {
  lcf::MaterialParams p;
  p.lambda = m.lambda;
  p.mu = m.mu;
  p.K = m.K;
  p.n_prime = m.n_prime;
  p.sigma_f = m.sigma_f;
  p.eps_f = m.eps_f;
  p.b = m.b;
  p.c = m.c;
  p.m = m.m;
  p.amplitude_factor = m.amplitude_factor;
  p.validate();
  return p;
}

void fill_report(const lcf::ReliabilityReport& in, lcf_report* out) {
  if (!out) return;
  out->h = in.h;
  out->eta = in.eta;
  out->pof = in.pof;
  out->survival = in.survival;
  out->t_det = in.t_det;
  out->m = in.m;
  out->t_star = in.t_star;
}

/// Shared shape of the material-chain entry points: validate pointers,
/// convert the POD material, store one double.
template <typename F>
lcf_status chain_call(const lcf_material* mat, double* out, F&& eval) {
  if (!mat || !out) return invalid("material and output pointers must not be NULL");
  return guarded([&]() {
    *out = eval(to_params(*mat));
    return LCF_OK;
  });
}

}  // namespace

extern "C" {

const char* lcf_version(void) { return "0.1.0"; }

const char* lcf_last_error(void) { return g_last_error.c_str(); }

lcf_status lcf_config_load(const char* path, lcf_config** out) {
  if (!path || !out) return invalid("path and output pointers must not be NULL");
  *out = nullptr;
  return guarded([&]() {
    auto handle = new lcf_config{lcf::load_config(path)};
    *out = handle;
    return LCF_OK;
  });
}

lcf_status lcf_config_parse(const char* json_text, lcf_config** out) {
  if (!json_text || !out) return invalid("text and output pointers must not be NULL");
  *out = nullptr;
  return guarded([&]() {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      lcf::fail(lcf::ErrorCode::kParse, e.what());
    }
    auto handle = new lcf_config{lcf::parse_config(doc)};
    *out = handle;
    return LCF_OK;
  });
}

void lcf_config_free(lcf_config* cfg) { delete cfg; }

lcf_status lcf_config_set_seed(lcf_config* cfg, uint64_t seed) {
  if (!cfg) return invalid("config must not be NULL");
  g_last_error.clear();
  cfg->cfg.seed = seed;
  return LCF_OK;
}

lcf_status lcf_config_set_threads(lcf_config* cfg, int threads) {
  if (!cfg) return invalid("config must not be NULL");
  if (threads < 1) return invalid("threads must be >= 1");
  g_last_error.clear();
  cfg->cfg.threads = threads;
  return LCF_OK;
}

lcf_status lcf_config_set_output_dir(lcf_config* cfg, const char* dir) {
  if (!cfg || !dir) return invalid("config and dir must not be NULL");
  g_last_error.clear();
  cfg->cfg.output_dir = dir;
  return LCF_OK;
}

lcf_status lcf_run_life(lcf_config* cfg) {
  if (!cfg) return invalid("config must not be NULL");
  return guarded([&]() {
    lcf::run_life(cfg->cfg);
    return LCF_OK;
  });
}

lcf_status lcf_run_assess(lcf_config* cfg, lcf_report* out) {
  if (!cfg) return invalid("config must not be NULL");
  return guarded([&]() {
    fill_report(lcf::run_assess(cfg->cfg), out);
    return LCF_OK;
  });
}

lcf_status lcf_run_sample(lcf_config* cfg) {
  if (!cfg) return invalid("config must not be NULL");
  return guarded([&]() {
    lcf::run_sample(cfg->cfg);
    return LCF_OK;
  });
}

lcf_status lcf_run_optimize(lcf_config* cfg, lcf_report* out) {
  if (!cfg) return invalid("config must not be NULL");
  return guarded([&]() {
    const lcf::OptimizerState st = lcf::run_optimize(cfg->cfg);
    fill_report(st.final_eval.report, out);
    return LCF_OK;
  });
}

lcf_status lcf_youngs_modulus(const lcf_material* mat, double* out) {
  return chain_call(mat, out, [](const lcf::MaterialParams& p) { return lcf::youngs_modulus(p); });
}

lcf_status lcf_von_mises(const double stress[9], double* out) {
  if (!stress || !out) return invalid("stress and output pointers must not be NULL");
  return guarded([&]() {
    lcf::Mat3 s;
    std::memcpy(s.data(), stress, sizeof s);
    *out = lcf::von_mises(s);
    return LCF_OK;
  });
}

lcf_status lcf_ramberg_osgood(const lcf_material* mat, double stress_amplitude, double* out) {
  return chain_call(
      mat, out, [&](const lcf::MaterialParams& p) { return lcf::ramberg_osgood(stress_amplitude, p); });
}

lcf_status lcf_neuber_shakedown(const lcf_material* mat, double sigma_v, double* out) {
  return chain_call(
      mat, out, [&](const lcf::MaterialParams& p) { return lcf::neuber_shakedown(sigma_v, p); });
}

lcf_status lcf_cmb_strain(const lcf_material* mat, double n_cycles, double* out) {
  return chain_call(mat, out,
                    [&](const lcf::MaterialParams& p) { return lcf::cmb_strain(n_cycles, p); });
}

lcf_status lcf_cmb_inverse(const lcf_material* mat, double eps_a, double* out) {
  return chain_call(mat, out,
                    [&](const lcf::MaterialParams& p) { return lcf::cmb_inverse(eps_a, p); });
}

lcf_status lcf_phi(const lcf_material* mat, double sigma_v, double* out) {
  return chain_call(mat, out, [&](const lcf::MaterialParams& p) { return lcf::phi(sigma_v, p); });
}

lcf_status lcf_n_det(const lcf_material* mat, const double grad_u[9], double* out) {
  if (!mat || !grad_u || !out) return invalid("material, gradient, and output must not be NULL");
  return guarded([&]() {
    lcf::Mat3 g;
    std::memcpy(g.data(), grad_u, sizeof g);
    *out = lcf::n_det(g, to_params(*mat));
    return LCF_OK;
  });
}

}  // extern "C"
