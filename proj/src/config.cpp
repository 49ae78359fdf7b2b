#include "quermass/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "quermass/error.hpp"

namespace quermass {

using nlohmann::json;

namespace {

// Reads the members of one object, remembering which keys were used so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ConfigError(prefix_, "expected an object");
  }

  std::string key(const std::string& name) const {
    return prefix_.empty() ? name : prefix_ + "." + name;
  }

  bool has(const std::string& name) {
    used_.insert(name);
    return j_.contains(name) && !j_.at(name).is_null();
  }

  const json& at(const std::string& name) {
    if (!has(name)) throw ConfigError(key(name), "required key is missing");
    return j_.at(name);
  }

  double number(const std::string& name, std::optional<double> fallback = {}) {
    if (!has(name)) {
      if (fallback) return *fallback;
      throw ConfigError(key(name), "required key is missing");
    }
    const auto& v = j_.at(name);
    if (!v.is_number()) throw ConfigError(key(name), "expected a number");
    return v.get<double>();
  }

  long long integer(const std::string& name,
                    std::optional<long long> fallback = {}) {
    if (!has(name)) {
      if (fallback) return *fallback;
      throw ConfigError(key(name), "required key is missing");
    }
    const auto& v = j_.at(name);
    if (!v.is_number_integer()) {
      throw ConfigError(key(name), "expected an integer");
    }
    return v.get<long long>();
  }

  std::string text(const std::string& name,
                   std::optional<std::string> fallback = {}) {
    if (!has(name)) {
      if (fallback) return *fallback;
      throw ConfigError(key(name), "required key is missing");
    }
    const auto& v = j_.at(name);
    if (!v.is_string()) throw ConfigError(key(name), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [name, value] : j_.items()) {
      if (!used_.count(name)) throw ConfigError(key(name), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> used_;
};

int to_int(long long v, const std::string& key) {
  if (v < -1000000000LL || v > 1000000000LL) {
    throw ConfigError(key, "value out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t to_u64(long long v, const std::string& key) {
  if (v < 0) throw ConfigError(key, "must be >= 0");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

ShapeSpec shape_from_json(const json& j, const std::string& prefix) {
  Section s(j, prefix);
  const std::string type = s.text("type");
  std::optional<json> params_doc;
  if (s.has("params")) params_doc = s.at("params");
  std::uint64_t seed = 0;
  if (s.has("seed")) seed = to_u64(s.integer("seed"), s.key("seed"));
  s.finish();

  const json empty = json::object();
  Section p(params_doc ? *params_doc : empty, s.key("params"));
  ShapeSpec out;
  if (type == "sphere") {
    out = shape::Sphere{p.number("R", 1.0)};
  } else if (type == "ellipse") {
    out = shape::Ellipse{p.number("a", 2.0), p.number("b", 1.0)};
  } else if (type == "ellipsoid_of_revolution") {
    out = shape::EllipsoidOfRevolution{p.number("a", 1.5), p.number("c", 1.0)};
  } else if (type == "perturbed_sphere") {
    shape::PerturbedSphere ps;
    ps.R = p.number("R", 1.0);
    ps.eps = p.number("eps", 0.1);
    if (p.has("mode")) ps.mode = to_int(p.integer("mode"), p.key("mode"));
    ps.seed = seed;
    out = ps;
  } else {
    throw ConfigError(s.key("type"),
                      "unknown shape '" + type +
                          "' (expected sphere, ellipse, "
                          "ellipsoid_of_revolution or perturbed_sphere)");
  }
  p.finish();
  return out;
}

json shape_to_json(const ShapeSpec& spec) {
  json j;
  j["type"] = shape_name(spec);
  json p = json::object();
  std::uint64_t seed = 0;
  if (const auto* s = std::get_if<shape::Sphere>(&spec)) {
    p["R"] = s->R;
  } else if (const auto* e = std::get_if<shape::Ellipse>(&spec)) {
    p["a"] = e->a;
    p["b"] = e->b;
  } else if (const auto* q = std::get_if<shape::EllipsoidOfRevolution>(&spec)) {
    p["a"] = q->a;
    p["c"] = q->c;
  } else {
    const auto& ps = std::get<shape::PerturbedSphere>(spec);
    p["R"] = ps.R;
    p["eps"] = ps.eps;
    if (ps.mode) p["mode"] = *ps.mode;
    seed = ps.seed;
  }
  j["params"] = p;
  j["seed"] = seed;
  return j;
}

namespace {

void check_shape_fits(const ShapeSpec& spec, int n, std::size_t grid,
                      const std::string& key) {
  try {
    make_shape(spec, n, grid);
  } catch (const InvalidInput& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  Section root(doc, "");
  RunConfig cfg;
  FlowConfig& f = cfg.flow;
  {
    Section s(root.at("problem"), "problem");
    f.n = to_int(s.integer("n"), "problem.n");
    f.k = to_int(s.integer("k"), "problem.k");
    f.mode = parse_flow_mode(s.text("mode"));
    s.finish();
  }
  cfg.shape = shape_from_json(root.at("shape"), "shape");
  {
    Section s(root.at("grid"), "grid");
    const long long n = s.integer("N");
    if (n < 0) throw ConfigError("grid.N", "must be positive");
    f.grid = static_cast<std::size_t>(n);
    s.finish();
  }
  {
    Section s(root.at("stepping"), "stepping");
    f.t_max = s.number("t_max");
    f.dt_init = s.number("dt_init", f.dt_init);
    f.dt_max = s.number("dt_max", f.dt_max);
    f.cfl_coefficient = s.number("cfl_coefficient", f.cfl_coefficient);
    f.sample_every =
        to_int(s.integer("sample_every", f.sample_every), "stepping.sample_every");
    s.finish();
  }
  if (root.has("tolerances")) {
    Section s(root.at("tolerances"), "tolerances");
    f.tol_conserve = s.number("tol_conserve", f.tol_conserve);
    f.tol_round = s.number("tol_round", f.tol_round);
    f.cone_tol = s.number("cone_tol", f.cone_tol);
    s.finish();
  }
  if (root.has("output")) {
    Section s(root.at("output"), "output");
    auto& o = cfg.output;
    o.trajectory_path = s.text("trajectory_path", o.trajectory_path);
    o.snapshot_every =
        to_int(s.integer("snapshot_every", o.snapshot_every), "output.snapshot_every");
    if (o.snapshot_every < 0) {
      throw ConfigError("output.snapshot_every", "must be >= 0");
    }
    o.snapshot_dir = s.text("snapshot_dir", o.snapshot_dir);
    o.report_path = s.text("report_path", o.report_path);
    s.finish();
  }
  f.validate();
  if (root.has("sweep")) {
    Section s(root.at("sweep"), "sweep");
    SweepConfig sw;
    const auto& shapes = s.at("shapes");
    if (!shapes.is_array() || shapes.empty()) {
      throw ConfigError("sweep.shapes", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      sw.shapes.push_back(
          shape_from_json(shapes[i], "sweep.shapes[" + std::to_string(i) + "]"));
    }
    auto list = [&](const std::string& name) -> json {
      if (!s.has(name)) return json::array();
      const auto& v = s.at(name);
      if (!v.is_array()) throw ConfigError(s.key(name), "expected an array");
      return v;
    };
    for (const auto& v : list("eps")) {
      if (!v.is_number()) throw ConfigError("sweep.eps", "expected numbers");
      sw.eps.push_back(v.get<double>());
    }
    for (const auto& v : list("modes")) {
      if (!v.is_number_integer()) {
        throw ConfigError("sweep.modes", "expected integers");
      }
      sw.modes.push_back(v.get<int>());
    }
    for (const auto& v : list("k")) {
      if (!v.is_number_integer()) throw ConfigError("sweep.k", "expected integers");
      sw.k.push_back(v.get<int>());
    }
    if (sw.k.empty()) sw.k.push_back(f.k);
    if (s.has("seeds")) {
      Section seeds(s.at("seeds"), "sweep.seeds");
      sw.seed_first = to_u64(seeds.integer("first", 0), "sweep.seeds.first");
      sw.seed_count = to_u64(seeds.integer("count", 0), "sweep.seeds.count");
      seeds.finish();
    }
    sw.output_dir = s.text("output_dir", sw.output_dir);
    s.finish();
    for (int k : sw.k) {
      FlowConfig probe = f;
      probe.k = k;
      try {
        probe.validate();
      } catch (const ConfigError& e) {
        throw ConfigError("sweep.k", "k = " + std::to_string(k) + ": " + e.what());
      }
    }
    for (std::size_t i = 0; i < sw.shapes.size(); ++i) {
      const std::string key = "sweep.shapes[" + std::to_string(i) + "]";
      if (std::holds_alternative<shape::PerturbedSphere>(sw.shapes[i])) {
        if (sw.eps.empty()) {
          throw ConfigError("sweep.eps",
                            "perturbed_sphere in a sweep needs eps values");
        }
        if (sw.modes.empty() && sw.seed_count == 0) {
          throw ConfigError("sweep.modes",
                            "perturbed_sphere in a sweep needs modes or seeds");
        }
      } else {
        check_shape_fits(sw.shapes[i], f.n, f.grid, key);
      }
    }
    cfg.sweep = std::move(sw);
  }
  root.finish();

  check_shape_fits(cfg.shape, f.n, f.grid, "shape");
  return cfg;
}

json to_json(const RunConfig& cfg) {
  const FlowConfig& f = cfg.flow;
  json j;
  j["problem"] = {{"n", f.n}, {"k", f.k}, {"mode", to_string(f.mode)}};
  j["shape"] = shape_to_json(cfg.shape);
  j["grid"] = {{"N", f.grid}};
  j["stepping"] = {{"t_max", f.t_max},
                   {"dt_init", f.dt_init},
                   {"dt_max", f.dt_max},
                   {"cfl_coefficient", f.cfl_coefficient},
                   {"sample_every", f.sample_every}};
  j["tolerances"] = {{"tol_conserve", f.tol_conserve},
                     {"tol_round", f.tol_round},
                     {"cone_tol", f.cone_tol}};
  j["output"] = {{"trajectory_path", cfg.output.trajectory_path},
                 {"snapshot_every", cfg.output.snapshot_every},
                 {"snapshot_dir", cfg.output.snapshot_dir},
                 {"report_path", cfg.output.report_path}};
  if (cfg.sweep) {
    const auto& sw = *cfg.sweep;
    json shapes = json::array();
    for (const auto& s : sw.shapes) shapes.push_back(shape_to_json(s));
    j["sweep"] = {{"shapes", shapes},
                  {"eps", sw.eps},
                  {"modes", sw.modes},
                  {"k", sw.k},
                  {"seeds", {{"first", sw.seed_first}, {"count", sw.seed_count}}},
                  {"output_dir", sw.output_dir}};
  }
  return j;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError(key, "empty component in key");
    if (!node->is_object()) {
      throw ConfigError(key, "cannot descend into a non-object value");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/false);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

}  // namespace quermass
