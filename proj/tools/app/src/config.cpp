#include "fibflow/app/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fibflow/error.hpp"
#include "fibflow/serialization.hpp"
#include <toml++/toml.hpp>

namespace fibflow::app {
namespace {

std::string located(const toml::node& node, const std::string& field) {
  const auto& src = node.source();
  if (src.begin.line == 0) return field;
  return fmt::format("{} (line {})", field, src.begin.line);
}

[[noreturn]] void fail(const toml::node& node, const std::string& field, const std::string& what) {
  throw ConfigError(located(node, field) + ": " + what);
}

void allow_keys(const toml::table& t, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : t) {
    if (!allowed.count(std::string(k.str()))) {
      fail(v, where.empty() ? std::string(k.str()) : where + "." + std::string(k.str()), "unknown key");
    }
  }
}

const toml::table* section(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) fail(*n, name, "expected a table");
  return n->as_table();
}

double get_number(const toml::node& n, const std::string& field) {
  if (auto v = n.value<double>()) return *v;
  fail(n, field, "expected a number");
}

std::int64_t get_integer(const toml::node& n, const std::string& field) {
  if (n.is_integer()) return *n.value<std::int64_t>();
  fail(n, field, "expected an integer");
}

template <class F>
void with(const toml::table& t, const char* key, const std::string& where, F&& apply) {
  if (const toml::node* n = t.get(key)) apply(*n, where + "." + key);
}

std::vector<double> get_numbers(const toml::node& n, const std::string& field) {
  const toml::array* arr = n.as_array();
  if (!arr) fail(n, field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr->size(); ++i) out.push_back(get_number((*arr)[i], fmt::format("{}[{}]", field, i)));
  return out;
}

CohomologyClass get_class(const toml::node& n, const std::string& field) {
  const auto v = get_numbers(n, field);
  if (v.size() != 2) fail(n, field, "expected [n1, n2]");
  return {v[0], v[1]};
}

BoundaryJet get_jet(const toml::node& n, const std::string& field) {
  const auto v = get_numbers(n, field);
  if (v.size() != 4) fail(n, field, "expected [p, q, dp, dq]");
  return {v[0], v[1], v[2], v[3]};
}

Normalization get_normalization(const toml::node& n, const std::string& field) {
  const auto s = n.value<std::string>();
  if (s == "probability") return Normalization::probability;
  if (s == "lebesgue") return Normalization::lebesgue;
  fail(n, field, "expected \"probability\" or \"lebesgue\"");
}

ScalarFn get_fn(const toml::node& n, const std::string& field) {
  const toml::table* t = n.as_table();
  if (!t) fail(n, field, "expected {family = ..., params = [...]}");
  allow_keys(*t, field, {"family", "params"});
  const auto family = (*t)["family"].value<std::string>();
  if (!family) fail(n, field + ".family", "expected a string");
  const toml::node* params = t->get("params");
  if (!params) fail(n, field + ".params", "missing");
  try {
    return make_scalar_fn(*family, get_numbers(*params, field + ".params"));
  } catch (const Error& e) {
    fail(n, field, e.what());
  }
}

void parse_profiles(const toml::table& t, ExperimentConfig& cfg) {
  for (const auto& [name, node] : t) {
    const std::string where = "profiles." + std::string(name.str());
    const toml::table* p = node.as_table();
    if (!p) fail(node, where, "expected a table with f and g");
    allow_keys(*p, where, {"f", "g"});
    const toml::node* f = p->get("f");
    const toml::node* g = p->get("g");
    if (!f || !g) fail(node, where, "needs both f and g");
    // Not validated here: a vanishing field is a computation failure.
    cfg.profiles.push_back({std::string(name.str()), Profile{get_fn(*f, where + ".f"), get_fn(*g, where + ".g")}});
  }
}

void parse_measure(const toml::table& t, ExperimentConfig& cfg) {
  allow_keys(t, "measure", {"kind", "normalization", "p", "q", "t0"});
  MeasureSpec& m = cfg.measure;
  with(t, "kind", "measure", [&](const toml::node& n, const std::string& f) {
    const auto s = n.value<std::string>();
    if (s == "volume") m.kind = MeasureKind::volume;
    else if (s == "dirac_orbit") m.kind = MeasureKind::dirac_orbit;
    else fail(n, f, "expected \"volume\" or \"dirac_orbit\"");
  });
  with(t, "normalization", "measure",
       [&](const toml::node& n, const std::string& f) { m.normalization = get_normalization(n, f); });
  with(t, "p", "measure", [&](const toml::node& n, const std::string& f) { m.p = static_cast<int>(get_integer(n, f)); });
  with(t, "q", "measure", [&](const toml::node& n, const std::string& f) { m.q = static_cast<int>(get_integer(n, f)); });
  with(t, "t0", "measure", [&](const toml::node& n, const std::string& f) {
    m.t0 = get_number(n, f);
    if (!(m.t0 >= 0.0 && m.t0 <= 1.0)) fail(n, f, "must lie in [0, 1]");
  });
  if (m.kind == MeasureKind::dirac_orbit && m.p == 0 && m.q == 0) {
    throw ConfigError("measure: orbit slope (p, q) = (0, 0)");
  }
}

void parse_mc(const toml::table& t, ExperimentConfig& cfg) {
  allow_keys(t, "mc", {"epsilon", "n", "seed", "theta_grid", "epsilon_list", "n_list", "profiles"});
  McSection mc;
  with(t, "epsilon", "mc", [&](const toml::node& n, const std::string& f) {
    mc.epsilon = get_number(n, f);
    if (!(mc.epsilon > 0.0 && mc.epsilon <= 1e-2)) fail(n, f, "must lie in (0, 1e-2]");
  });
  with(t, "n", "mc", [&](const toml::node& n, const std::string& f) {
    const auto v = get_integer(n, f);
    if (v < 1000) fail(n, f, "must be >= 1000");
    mc.n = static_cast<std::uint64_t>(v);
  });
  with(t, "seed", "mc", [&](const toml::node& n, const std::string& f) {
    const auto v = get_integer(n, f);
    if (v < 0) fail(n, f, "must be non-negative");
    mc.seed = static_cast<std::uint64_t>(v);
  });
  with(t, "theta_grid", "mc", [&](const toml::node& n, const std::string& f) {
    const auto v = get_integer(n, f);
    if (v < 8 || v > 4096) fail(n, f, "must lie in [8, 4096]");
    mc.theta_grid = static_cast<int>(v);
  });
  with(t, "epsilon_list", "mc", [&](const toml::node& n, const std::string& f) {
    mc.epsilon_list = get_numbers(n, f);
    if (mc.epsilon_list.empty()) fail(n, f, "must not be empty");
    for (std::size_t i = 0; i < mc.epsilon_list.size(); ++i) {
      const double e = mc.epsilon_list[i];
      if (!(e > 0.0 && e <= 1e-2)) fail(n, f, "entries must lie in (0, 1e-2]");
      if (i > 0 && !(e < mc.epsilon_list[i - 1])) fail(n, f, "must be strictly descending");
    }
  });
  with(t, "n_list", "mc", [&](const toml::node& n, const std::string& f) {
    const toml::array* arr = n.as_array();
    if (!arr || arr->empty()) fail(n, f, "expected a non-empty array of integers");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto v = get_integer((*arr)[i], fmt::format("{}[{}]", f, i));
      if (v < 1000) fail((*arr)[i], f, "entries must be >= 1000");
      mc.n_list.push_back(static_cast<std::uint64_t>(v));
    }
  });
  with(t, "profiles", "mc", [&](const toml::node& n, const std::string& f) {
    const toml::array* arr = n.as_array();
    if (!arr) fail(n, f, "expected an array of profile names");
    for (const auto& e : *arr) {
      const auto s = e.value<std::string>();
      if (!s) fail(e, f, "expected a string");
      mc.profiles.push_back(*s);
    }
  });
  if (mc.n_list.empty()) mc.n_list.push_back(mc.n);
  cfg.mc = std::move(mc);
}

void parse_sweep(const toml::table& t, ExperimentConfig& cfg) {
  allow_keys(t, "sweep", {"a", "b", "Q", "correction"});
  SweepSection s;
  with(t, "a", "sweep", [&](const toml::node& n, const std::string& f) { s.a = get_number(n, f); });
  with(t, "b", "sweep", [&](const toml::node& n, const std::string& f) { s.b = get_number(n, f); });
  with(t, "Q", "sweep", [&](const toml::node& n, const std::string& f) { s.q_values = get_numbers(n, f); });
  with(t, "correction", "sweep", [&](const toml::node& n, const std::string& f) { s.correction = get_class(n, f); });
  if (s.a == 0.0 || s.b == 0.0) throw ConfigError("sweep: a and b must be non-zero");
  if (s.q_values.empty()) throw ConfigError("sweep.Q: at least one value is required");
  cfg.sweep = std::move(s);
}

void parse_sew(const toml::table& t, ExperimentConfig& cfg) {
  allow_keys(t, "sew", {"left", "right", "extra_turns", "samples"});
  SewSection s;
  const toml::node* left = t.get("left");
  const toml::node* right = t.get("right");
  if (!left || !right) throw ConfigError("sew: left and right jets are required");
  s.left = get_jet(*left, "sew.left");
  s.right = get_jet(*right, "sew.right");
  with(t, "extra_turns", "sew", [&](const toml::node& n, const std::string& f) {
    const auto v = get_integer(n, f);
    if (v < 0 || v > 1000) fail(n, f, "must lie in [0, 1000]");
    s.extra_turns = static_cast<int>(v);
  });
  with(t, "samples", "sew", [&](const toml::node& n, const std::string& f) {
    const auto v = get_integer(n, f);
    if (v < 2 || v > 1'000'000) fail(n, f, "must lie in [2, 1000000]");
    s.samples = static_cast<int>(v);
  });
  cfg.sew = s;
}

void parse_invariants(const toml::table& t, ExperimentConfig& cfg) {
  allow_keys(t, "invariants", {"beta", "correction", "normalization"});
  auto& s = cfg.invariants;
  with(t, "beta", "invariants", [&](const toml::node& n, const std::string& f) { s.beta = get_class(n, f); });
  with(t, "correction", "invariants", [&](const toml::node& n, const std::string& f) { s.correction = get_class(n, f); });
  with(t, "normalization", "invariants",
       [&](const toml::node& n, const std::string& f) { s.normalization = get_normalization(n, f); });
}

}  // namespace

const NamedProfile* ExperimentConfig::find_profile(const std::string& name) const {
  for (const auto& p : profiles) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

ExperimentConfig parse_config(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("line {}, column {}: {}", e.source().begin.line, e.source().begin.column,
                                  e.description()));
  }
  allow_keys(root, "", {"profiles", "measure", "mc", "sweep", "sew", "invariants", "output"});
  ExperimentConfig cfg;
  if (const auto* t = section(root, "profiles")) parse_profiles(*t, cfg);
  if (const auto* t = section(root, "measure")) parse_measure(*t, cfg);
  if (const auto* t = section(root, "mc")) parse_mc(*t, cfg);
  if (const auto* t = section(root, "sweep")) parse_sweep(*t, cfg);
  if (const auto* t = section(root, "sew")) parse_sew(*t, cfg);
  if (const auto* t = section(root, "invariants")) parse_invariants(*t, cfg);
  if (const auto* t = section(root, "output")) {
    allow_keys(*t, "output", {"dir"});
    with(*t, "dir", "output", [&](const toml::node& n, const std::string& f) {
      const auto s = n.value<std::string>();
      if (!s || s->empty()) fail(n, f, "expected a non-empty path");
      cfg.output_dir = *s;
    });
  }
  if (cfg.mc) {
    for (const auto& name : cfg.mc->profiles) {
      if (!cfg.find_profile(name)) throw ConfigError("mc.profiles: unknown profile '" + name + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fibflow::app
