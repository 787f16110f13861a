#include "config.hpp"

#include <algorithm>
#include <limits>

#include "errors.hpp"
#include "io.hpp"

namespace lcf {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail(ErrorCode::kParse, path + ": " + msg);
}

/// One JSON object being consumed key by key; tracks what was read so that
/// unknown (typically misspelled) keys can be reported with their path.
class Block {
 public:
  Block(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) bad(path_, "expected a JSON object");
  }

  const std::string& path() const { return path_; }
  bool has(const char* key) const { return obj_.contains(key); }

  const json& raw(const char* key) {
    if (!obj_.contains(key)) bad(field(key), "required field is missing");
    consumed_.push_back(key);
    return obj_.at(key);
  }

  double num(const char* key, double def) { return has(key) ? num_req(key) : def; }

  double num_req(const char* key) {
    const json& v = raw(key);
    if (!v.is_number()) bad(field(key), "expected a number");
    return v.get<double>();
  }

  int integer(const char* key, int def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_integer()) bad(field(key), "expected an integer");
    const auto raw64 = v.get<int64_t>();
    if (raw64 < std::numeric_limits<int>::min() || raw64 > std::numeric_limits<int>::max())
      bad(field(key), "integer out of range");
    return static_cast<int>(raw64);
  }

  uint64_t u64(const char* key, uint64_t def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_unsigned()) bad(field(key), "expected a non-negative integer");
    return v.get<uint64_t>();
  }

  std::string str(const char* key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_string()) bad(field(key), "expected a string");
    return v.get<std::string>();
  }

  Vec3 vec3(const char* key, const Vec3& def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 3) bad(field(key), "expected an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) bad(field(key), "expected an array of 3 numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  std::vector<double> num_array(const char* key) {
    const json& v = raw(key);
    if (!v.is_array()) bad(field(key), "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) {
      if (!e.is_number()) bad(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Block block(const char* key) {
    const json& v = raw(key);
    return Block(v, field(key));
  }

  std::string field(const char* key) const { return path_ + "." + key; }

  /// Call after all known keys were consumed.
  void finish() const {
    for (const auto& item : obj_.items())
      if (std::find(consumed_.begin(), consumed_.end(), item.key()) == consumed_.end())
        bad(path_ + "." + item.key(), "unknown field");
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string> consumed_;
};

/// Runs a downstream validate() and reattaches the block path to its message.
template <typename F>
void validated(const std::string& path, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    fail(ErrorCode::kParse, path + ": " + e.what());
  }
}

FaceTag parse_tag(const std::string& s, const std::string& path) {
  if (s == "neumann") return FaceTag::kNeumann;
  if (s == "designed") return FaceTag::kDesigned;
  if (s == "dirichlet") return FaceTag::kDirichlet;
  bad(path, "unknown surface tag '" + s + "' (expected neumann, designed, or dirichlet)");
}

std::string tag_name(FaceTag t) {
  switch (t) {
    case FaceTag::kNeumann: return "neumann";
    case FaceTag::kDesigned: return "designed";
    case FaceTag::kDirichlet: return "dirichlet";
  }
  fail(ErrorCode::kInternal, "unreachable face tag");
}

void parse_material(Block b, RunConfig& cfg) {
  cfg.has_material = true;
  MaterialParams& m = cfg.material;
  m.lambda = b.num_req("lambda");
  m.mu = b.num_req("mu");
  m.K = b.num_req("K");
  m.n_prime = b.num_req("n_prime");
  m.sigma_f = b.num_req("sigma_f");
  m.eps_f = b.num_req("eps_f");
  m.b = b.num_req("b");
  m.c = b.num_req("c");
  m.amplitude_factor = b.num("amplitude_factor", 0.5);
  b.finish();
}

void parse_life(Block b, RunConfig& cfg) {
  LifeConfig& l = cfg.life;
  l.n_points = b.integer("n_points", l.n_points);
  l.n_lo = b.num("n_lo", l.n_lo);
  l.n_hi = b.num("n_hi", l.n_hi);
  if (b.has("probe_sigma_v")) {
    l.has_probe = true;
    l.probe_sigma_v = b.num_req("probe_sigma_v");
    if (!(l.probe_sigma_v >= 0)) bad(b.field("probe_sigma_v"), "must be >= 0");
  }
  if (l.n_points < 2) bad(b.field("n_points"), "must be >= 2");
  if (!(l.n_lo > 0) || !(l.n_hi > l.n_lo))
    bad(b.path(), "life grid needs 0 < n_lo < n_hi");
  b.finish();
}

void parse_design(Block b, RunConfig& cfg) {
  cfg.has_design = true;
  BasicDesign& d = cfg.design;
  d.box = b.vec3("box", d.box);
  d.alpha_min = b.num_req("alpha_min");
  d.alpha_max = b.num_req("alpha_max");
  d.clamp_center = b.vec3("clamp_center", d.clamp_center);
  d.clamp_radius = b.num_req("clamp_radius");
  d.ext_radius = b.num_req("ext_radius");
  cfg.alpha_csv = b.str("alpha_csv", "");
  b.finish();
  validated(b.path(), [&] { d.validate(); });
}

void parse_constraints(Block b, RunConfig& cfg) {
  cfg.has_constraints = true;
  DesignConstraints& c = cfg.constraints;
  c.volume = b.num_req("volume");
  c.ck_bound = b.num_req("ck_bound");
  c.lipschitz = b.num_req("lipschitz");
  c.k = b.integer("k", c.k);
  if (b.has("boundary_derivatives")) c.boundary_derivatives = b.num_array("boundary_derivatives");
  cfg.admis_tol = b.num("tolerance", cfg.admis_tol);
  if (!(cfg.admis_tol > 0)) bad(b.field("tolerance"), "must be > 0");
  b.finish();
  validated(b.path(), [&] { c.validate(); });
}

void parse_load(Block b, RunConfig& cfg) {
  cfg.has_load = true;
  cfg.body_force = b.vec3("body_force", {0, 0, 0});
  cfg.traction = b.vec3("traction", {0, 0, 0});
  if (b.has("traction_surfaces")) {
    const json& v = b.raw("traction_surfaces");
    if (!v.is_array() || v.empty()) bad(b.field("traction_surfaces"), "expected a non-empty array");
    cfg.traction_tags.clear();
    for (const json& e : v) {
      if (!e.is_string()) bad(b.field("traction_surfaces"), "expected strings");
      cfg.traction_tags.push_back(parse_tag(e.get<std::string>(), b.field("traction_surfaces")));
    }
  }
  cfg.t_star = b.num_req("t_star");
  if (!(cfg.t_star >= 0)) bad(b.field("t_star"), "must be >= 0");
  b.finish();
}

void parse_discretization(Block b, RunConfig& cfg) {
  cfg.has_discretization = true;
  cfg.n1 = b.integer("n1", cfg.n1);
  cfg.n2 = b.integer("n2", cfg.n2);
  cfg.h = b.num_req("h");
  cfg.solver_rel_tol = b.num("solver_rel_tol", cfg.solver_rel_tol);
  cfg.solver_max_iter = b.integer("solver_max_iter", cfg.solver_max_iter);
  if (cfg.n1 < 2 || cfg.n2 < 2) bad(b.path(), "grid needs n1, n2 >= 2");
  if (!(cfg.h > 0)) bad(b.field("h"), "must be > 0");
  if (!(cfg.solver_rel_tol > 0)) bad(b.field("solver_rel_tol"), "must be > 0");
  if (cfg.solver_max_iter < 1) bad(b.field("solver_max_iter"), "must be >= 1");
  b.finish();
}

void parse_reliability(Block b, RunConfig& cfg) {
  cfg.has_reliability = true;
  cfg.m = b.num_req("m");
  if (!(cfg.m >= 1)) bad(b.field("m"), "must be >= 1");
  const std::string dom = b.str("hazard_domain", "full");
  if (dom == "full")
    cfg.hazard_domain = HazardDomain::kFull;
  else if (dom == "free")
    cfg.hazard_domain = HazardDomain::kFree;
  else
    bad(b.field("hazard_domain"), "expected 'full' or 'free'");
  cfg.n_histories = b.integer("n_histories", 0);
  if (cfg.n_histories < 0) bad(b.field("n_histories"), "must be >= 0");
  cfg.t_max = b.num("t_max", 0.0);
  if (cfg.n_histories > 0 && !(cfg.t_max > 0))
    bad(b.field("t_max"), "must be > 0 when histories are requested");
  b.finish();
}

void parse_optimizer(Block b, RunConfig& cfg) {
  cfg.has_optimizer = true;
  if (b.has("basis")) {
    Block bb = b.block("basis");
    cfg.basis.nb1 = bb.integer("nb1", cfg.basis.nb1);
    cfg.basis.nb2 = bb.integer("nb2", cfg.basis.nb2);
    cfg.basis.margin = bb.num("margin", cfg.basis.margin);
    bb.finish();
    if (cfg.basis.nb1 < 1 || cfg.basis.nb2 < 1) bad(bb.path(), "basis needs nb1, nb2 >= 1");
    if (!(cfg.basis.margin >= 0) || cfg.basis.margin > 0.4)
      bad(bb.field("margin"), "must lie in [0, 0.4]");
  }
  const int nb = cfg.basis.size();
  if (b.has("initial_coefficients")) {
    const json& v = b.raw("initial_coefficients");
    if (v.is_number()) {
      cfg.initial_coeffs.assign(nb, v.get<double>());
    } else if (v.is_array()) {
      cfg.initial_coeffs.clear();
      for (const json& e : v) {
        if (!e.is_number()) bad(b.field("initial_coefficients"), "expected numbers");
        cfg.initial_coeffs.push_back(e.get<double>());
      }
      if (static_cast<int>(cfg.initial_coeffs.size()) != nb)
        bad(b.field("initial_coefficients"),
            "expected " + std::to_string(nb) + " entries (one per basis function)");
    } else {
      bad(b.field("initial_coefficients"), "expected a number or an array");
    }
  } else {
    cfg.initial_coeffs.assign(nb, 0.0);
  }
  const std::string cost = b.str("cost", "pof");
  if (cost == "pof")
    cfg.cost = CostKind::kPof;
  else if (cost == "det_life")
    cfg.cost = CostKind::kDetLife;
  else
    bad(b.field("cost"), "expected 'pof' or 'det_life'");
  cfg.step = b.num("step", cfg.step);
  cfg.shrink = b.num("shrink", cfg.shrink);
  cfg.step_min = b.num("step_min", cfg.step_min);
  cfg.max_iterations = b.integer("max_iterations", cfg.max_iterations);
  b.finish();
  validated(b.path(), [&] {
    OptimizerOptions probe;  // n1/n2/threads come from elsewhere; check the rest
    probe.step = cfg.step;
    probe.shrink = cfg.shrink;
    probe.step_min = cfg.step_min;
    probe.max_iterations = cfg.max_iterations;
    probe.validate();
  });
}

}  // namespace

RunConfig parse_config(const json& doc) {
  Block top(doc, "config");
  RunConfig cfg;
  cfg.seed = top.u64("seed", 0);
  cfg.threads = top.integer("threads", 1);
  if (cfg.threads < 1) bad("config.threads", "must be >= 1");
  cfg.output_dir = top.str("output_dir", "");
  if (top.has("material")) parse_material(top.block("material"), cfg);
  if (top.has("life")) parse_life(top.block("life"), cfg);
  if (top.has("design")) parse_design(top.block("design"), cfg);
  if (top.has("constraints")) parse_constraints(top.block("constraints"), cfg);
  if (top.has("load")) parse_load(top.block("load"), cfg);
  if (top.has("discretization")) parse_discretization(top.block("discretization"), cfg);
  if (top.has("reliability")) parse_reliability(top.block("reliability"), cfg);
  if (top.has("optimizer")) parse_optimizer(top.block("optimizer"), cfg);
  top.finish();

  if (cfg.has_material) {
    cfg.material.m = cfg.has_reliability ? cfg.m : 1.0;
    validated("material", [&] { cfg.material.validate(); });
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, path + ": " + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json resolved_config(const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["seed"] = cfg.seed;
  out["threads"] = cfg.threads;
  out["output_dir"] = cfg.output_dir;
  if (cfg.has_material) {
    auto& m = out["material"];
    m["lambda"] = cfg.material.lambda;
    m["mu"] = cfg.material.mu;
    m["K"] = cfg.material.K;
    m["n_prime"] = cfg.material.n_prime;
    m["sigma_f"] = cfg.material.sigma_f;
    m["eps_f"] = cfg.material.eps_f;
    m["b"] = cfg.material.b;
    m["c"] = cfg.material.c;
    m["amplitude_factor"] = cfg.material.amplitude_factor;

    auto& l = out["life"];
    l["n_points"] = cfg.life.n_points;
    l["n_lo"] = cfg.life.n_lo;
    l["n_hi"] = cfg.life.n_hi;
    if (cfg.life.has_probe) l["probe_sigma_v"] = cfg.life.probe_sigma_v;
  }
  if (cfg.has_design) {
    auto& d = out["design"];
    d["box"] = cfg.design.box;
    d["alpha_min"] = cfg.design.alpha_min;
    d["alpha_max"] = cfg.design.alpha_max;
    d["clamp_center"] = cfg.design.clamp_center;
    d["clamp_radius"] = cfg.design.clamp_radius;
    d["ext_radius"] = cfg.design.ext_radius;
    if (!cfg.alpha_csv.empty()) d["alpha_csv"] = cfg.alpha_csv;
  }
  if (cfg.has_constraints) {
    auto& c = out["constraints"];
    c["volume"] = cfg.constraints.volume;
    c["ck_bound"] = cfg.constraints.ck_bound;
    c["lipschitz"] = cfg.constraints.lipschitz;
    c["k"] = cfg.constraints.k;
    c["boundary_derivatives"] = cfg.constraints.boundary_derivatives;
    c["tolerance"] = cfg.admis_tol;
  }
  if (cfg.has_load) {
    auto& l = out["load"];
    l["body_force"] = cfg.body_force;
    l["traction"] = cfg.traction;
    auto tags = nlohmann::ordered_json::array();
    for (FaceTag t : cfg.traction_tags) tags.push_back(tag_name(t));
    l["traction_surfaces"] = tags;
    l["t_star"] = cfg.t_star;
  }
  if (cfg.has_discretization) {
    auto& d = out["discretization"];
    d["n1"] = cfg.n1;
    d["n2"] = cfg.n2;
    d["h"] = cfg.h;
    d["solver_rel_tol"] = cfg.solver_rel_tol;
    d["solver_max_iter"] = cfg.solver_max_iter;
  }
  if (cfg.has_reliability) {
    auto& r = out["reliability"];
    r["m"] = cfg.m;
    r["hazard_domain"] = cfg.hazard_domain == HazardDomain::kFull ? "full" : "free";
    r["n_histories"] = cfg.n_histories;
    r["t_max"] = cfg.t_max;
  }
  if (cfg.has_optimizer) {
    auto& o = out["optimizer"];
    auto& b = o["basis"];
    b["nb1"] = cfg.basis.nb1;
    b["nb2"] = cfg.basis.nb2;
    b["margin"] = cfg.basis.margin;
    o["initial_coefficients"] = cfg.initial_coeffs;
    o["cost"] = cfg.cost == CostKind::kPof ? "pof" : "det_life";
    o["step"] = cfg.step;
    o["shrink"] = cfg.shrink;
    o["step_min"] = cfg.step_min;
    o["max_iterations"] = cfg.max_iterations;
  }
  return out;
}

void require_blocks(const RunConfig& cfg, const std::string& subcommand) {
  auto need = [&](bool present, const char* block) {
    if (!present)
      fail(ErrorCode::kParse,
           "config: subcommand '" + subcommand + "' needs the '" + block + "' block");
  };
  need(cfg.has_material, "material");
  if (subcommand == "life") return;
  need(cfg.has_design, "design");
  need(cfg.has_load, "load");
  need(cfg.has_discretization, "discretization");
  need(cfg.has_reliability, "reliability");
  if (subcommand == "assess" || subcommand == "sample") return;
  if (subcommand == "optimize") {
    need(cfg.has_constraints, "constraints");
    need(cfg.has_optimizer, "optimizer");
    return;
  }
  fail(ErrorCode::kInternal, "unknown subcommand '" + subcommand + "'");
}

}  // namespace lcf
