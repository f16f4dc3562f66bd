#include "fibflow/serialization.hpp"

#include <cmath>
#include <sstream>

#include "fibflow/error.hpp"
#include <toml++/toml.hpp>

namespace fibflow {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::parse_error, what); }

toml::array to_array(std::span<const double> values) {
  toml::array out;
  for (double v : values) out.push_back(v);
  return out;
}

double number_at(const toml::node& node, const std::string& where) {
  if (auto v = node.value<double>()) return *v;
  fail(where + ": expected a number");
}

std::vector<double> numbers_at(const toml::node* node, const std::string& where) {
  const toml::array* arr = node ? node->as_array() : nullptr;
  if (!arr) fail(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(number_at((*arr)[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

const toml::table& table_at(const toml::node* node, const std::string& where) {
  const toml::table* t = node ? node->as_table() : nullptr;
  if (!t) fail(where + ": expected a table");
  return *t;
}

toml::table fn_table(const ScalarFn& fn) {
  if (fn.family() == FnFamily::sewn || fn.family() == FnFamily::derived) {
    throw Error(ErrorKind::invalid_argument,
                std::string(to_string(fn.family())) + " functions have no closed-form serialization");
  }
  return toml::table{{"family", std::string(to_string(fn.family()))}, {"params", to_array(fn.params())}};
}

ScalarFn fn_from(const toml::node* node, const std::string& where) {
  const toml::table& t = table_at(node, where);
  const auto family = t["family"].value<std::string>();
  if (!family) fail(where + ".family: expected a string");
  try {
    return make_scalar_fn(*family, numbers_at(t.get("params"), where + ".params"));
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
}

double number_or(const toml::table& t, const char* key, double fallback, const std::string& where) {
  const toml::node* n = t.get(key);
  return n ? number_at(*n, where + "." + key) : fallback;
}

bool bool_or(const toml::table& t, const char* key, bool fallback, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto b = n->value<bool>()) return *b;
  fail(where + "." + key + ": expected a boolean");
}

BoundaryRef ref_from(const toml::node* node, const std::string& where) {
  const toml::table& t = table_at(node, where);
  const auto block = t["block"].value<std::string>();
  const auto index = t["index"].value<std::int64_t>();
  if (!block || !index) fail(where + ": expected {block = \"...\", index = N}");
  return {*block, static_cast<int>(*index)};
}

}  // namespace

ScalarFn make_scalar_fn(std::string_view family, std::span<const double> p) {
  auto need = [&](std::size_t n) {
    if (p.size() != n) {
      std::ostringstream os;
      os << family << " takes " << n << " parameters, got " << p.size();
      fail(os.str());
    }
  };
  if (family == "constant") {
    need(1);
    return ScalarFn::constant(p[0]);
  }
  if (family == "affine") {
    need(2);
    return ScalarFn::affine(p[0], p[1]);
  }
  if (family == "sinusoid") {
    need(4);
    if (p[1] != std::round(p[1])) fail("sinusoid half-wave count must be an integer");
    return ScalarFn::sinusoid(p[0], static_cast<int>(p[1]), p[2], p[3]);
  }
  if (family == "poly") return ScalarFn::polynomial({p.begin(), p.end()});
  if (family == "pwl") {
    if (p.size() < 4 || p.size() % 2 != 0) fail("pwl takes pairs t0, v0, t1, v1, ... (at least two)");
    std::vector<double> knots, values;
    for (std::size_t i = 0; i < p.size(); i += 2) {
      knots.push_back(p[i]);
      values.push_back(p[i + 1]);
    }
    try {
      return ScalarFn::piecewise_linear(std::move(knots), std::move(values));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  fail("unknown function family '" + std::string(family) + "'");
}

std::string scalar_fn_to_toml(const ScalarFn& fn) {
  std::ostringstream os;
  os << fn_table(fn);
  return os.str();
}

std::string assembly_to_toml(const Assembly& assembly) {
  toml::array blocks;
  for (const auto& b : assembly.blocks) {
    toml::table t{{"id", b.id}, {"correction", toml::array{b.correction.n1, b.correction.n2}}};
    if (const auto* a = std::get_if<BlockA>(&b.block)) {
      t.insert("kind", "A");
      t.insert("phi", fn_table(a->phi));
      t.insert("radius", a->radius);
      t.insert("collar_width", a->collar_width);
      t.insert("unknotted", a->unknotted);
    } else if (const auto* pants = std::get_if<BlockB>(&b.block)) {
      t.insert("kind", "B");
      toml::array collars;
      for (const auto& c : pants->collars) collars.push_back(toml::table{{"phi", fn_table(c.phi)}, {"h", fn_table(c.h)}});
      t.insert("collars", std::move(collars));
    } else {
      const auto& c = std::get<BlockC>(b.block);
      t.insert("kind", "C");
      t.insert("unknotted", c.unknotted);
      if (c.profile) {
        t.insert("f", fn_table(c.profile->f));
        t.insert("g", fn_table(c.profile->g));
      }
    }
    blocks.push_back(std::move(t));
  }
  toml::array gluings;
  for (const auto& g : assembly.gluings) {
    const auto& m = g.matrix;
    gluings.push_back(toml::table{
        {"a", toml::table{{"block", g.a.block}, {"index", g.a.index}}},
        {"b", toml::table{{"block", g.b.block}, {"index", g.b.index}}},
        {"matrix", toml::array{toml::array{m.a, m.b}, toml::array{m.c, m.d}}}});
  }
  toml::table root{{"blocks", std::move(blocks)}, {"gluings", std::move(gluings)}};
  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

Assembly assembly_from_toml(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
       << e.description();
    fail(os.str());
  }
  Assembly out;
  if (const toml::node* node = root.get("blocks")) {
    const toml::array* arr = node->as_array();
    if (!arr) fail("blocks: expected an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string where = "blocks[" + std::to_string(i) + "]";
      const toml::table& t = table_at(&(*arr)[i], where);
      AssemblyBlock block;
      const auto id = t["id"].value<std::string>();
      const auto kind = t["kind"].value<std::string>();
      if (!id || !kind) fail(where + ": id and kind are required");
      block.id = *id;
      if (const toml::node* corr = t.get("correction")) {
        const auto c = numbers_at(corr, where + ".correction");
        if (c.size() != 2) fail(where + ".correction: expected [n1, n2]");
        block.correction = {c[0], c[1]};
      }
      if (*kind == "A") {
        BlockA a;
        if (t.get("phi")) a.phi = fn_from(t.get("phi"), where + ".phi");
        a.radius = number_or(t, "radius", a.radius, where);
        a.collar_width = number_or(t, "collar_width", a.collar_width, where);
        a.unknotted = bool_or(t, "unknotted", false, where);
        block.block = a;
      } else if (*kind == "B") {
        BlockB pants;
        const toml::array* collars = t["collars"].as_array();
        if (!collars || collars->size() != 3) fail(where + ".collars: expected three collar tables");
        for (int k = 0; k < 3; ++k) {
          const std::string cw = where + ".collars[" + std::to_string(k) + "]";
          const toml::table& ct = table_at(&(*collars)[k], cw);
          pants.collars[k] = {fn_from(ct.get("phi"), cw + ".phi"), fn_from(ct.get("h"), cw + ".h")};
        }
        block.block = pants;
      } else if (*kind == "C") {
        BlockC c;
        c.unknotted = bool_or(t, "unknotted", false, where);
        const bool has_f = t.contains("f");
        if (has_f != t.contains("g")) fail(where + ": give both f and g or neither");
        if (has_f) c.profile = Profile{fn_from(t.get("f"), where + ".f"), fn_from(t.get("g"), where + ".g")};
        block.block = std::move(c);
      } else {
        fail(where + ".kind: expected A, B or C");
      }
      out.blocks.push_back(std::move(block));
    }
  }
  if (const toml::node* node = root.get("gluings")) {
    const toml::array* arr = node->as_array();
    if (!arr) fail("gluings: expected an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string where = "gluings[" + std::to_string(i) + "]";
      const toml::table& t = table_at(&(*arr)[i], where);
      Gluing g;
      g.a = ref_from(t.get("a"), where + ".a");
      g.b = ref_from(t.get("b"), where + ".b");
      const toml::array* m = t["matrix"].as_array();
      int cells[4];
      bool good = m && m->size() == 2;
      for (int r = 0; good && r < 2; ++r) {
        const toml::array* row = (*m)[r].as_array();
        good = row && row->size() == 2;
        for (int c = 0; good && c < 2; ++c) {
          const auto v = (*row)[c].value<std::int64_t>();
          good = v.has_value();
          if (good) cells[2 * r + c] = static_cast<int>(*v);
        }
      }
      if (!good) fail(where + ".matrix: expected [[a, b], [c, d]] with integers");
      g.matrix = {cells[0], cells[1], cells[2], cells[3]};
      out.gluings.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace fibflow
