#include "fibflow/assembly.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fibflow/error.hpp"

namespace fibflow {
namespace {

std::string ref_name(const BoundaryRef& ref) {
  std::ostringstream os;
  os << ref.block << "[" << ref.index << "]";
  return os.str();
}

const Profile& require_profile(const AssemblyBlock& block) {
  const auto& c = std::get<BlockC>(block.block);
  if (!c.profile) throw Error(ErrorKind::incomplete_assembly, "block " + block.id + " has no profile");
  return *c.profile;
}

bool has_boundary_data(const AssemblyBlock& block) {
  if (const auto* c = std::get_if<BlockC>(&block.block)) return c->profile.has_value();
  return true;
}

LutzPair reversed(const LutzPair& pair) {
  const ScalarFn p = pair.p;
  const ScalarFn q = pair.q;
  return {ScalarFn(FnFamily::derived, [p](double t) { return p(1.0 - t); },
                   [p](double t) { return -p.deriv(1.0 - t); }),
          ScalarFn(FnFamily::derived, [q](double t) { return q(1.0 - t); },
                   [q](double t) { return -q.deriv(1.0 - t); })};
}

void block_findings(const AssemblyBlock& block, std::vector<Violation>& out) {
  std::string problem;
  if (const auto* a = std::get_if<BlockA>(&block.block)) {
    const BlockAReport r = check_block_a(*a);
    if (!r.phi_positive) problem = "phi is not positive on [0, radius]";
    else if (!r.core_smooth) problem = "phi'(0) != 0, the field is singular on the core";
    else if (!r.boundary.is_valid) problem = "boundary collar is not Lutz";
  } else if (const auto* b = std::get_if<BlockB>(&block.block)) {
    const BlockBReport r = check_block_b(*b);
    for (int i = 0; i < 3 && problem.empty(); ++i) {
      if (!r.h_increasing[i]) problem = "h is not increasing on collar " + std::to_string(i);
      else if (!r.phi_nondecreasing[i]) problem = "phi decreases on collar " + std::to_string(i);
      else if (!r.boundary[i].is_valid) problem = "collar " + std::to_string(i) + " is not Lutz";
    }
  }
  if (!problem.empty()) out.push_back({ViolationKind::block_invalid, -1, block.id + ": " + problem});
}

}  // namespace

const AssemblyBlock* Assembly::find(std::string_view id) const {
  for (const auto& b : blocks) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::unknown_block: return "unknown_block";
    case ViolationKind::boundary_index: return "boundary_index";
    case ViolationKind::boundary_reused: return "boundary_reused";
    case ViolationKind::duplicate_block_id: return "duplicate_block_id";
    case ViolationKind::determinant: return "determinant";
    case ViolationKind::block_invalid: return "block_invalid";
    case ViolationKind::lutz_invalid: return "lutz_invalid";
    case ViolationKind::boundary_mismatch: return "boundary_mismatch";
    case ViolationKind::sewability: return "sewability";
  }
  return "unknown";
}

LutzPair boundary_pair(const AssemblyBlock& block, int index, const QuadratureOptions& options) {
  if (index < 0 || index >= boundary_count(block.block)) {
    throw Error(ErrorKind::invalid_argument, "boundary index out of range for block " + block.id);
  }
  if (const auto* a = std::get_if<BlockA>(&block.block)) return block_a_boundary_pair(*a);
  if (const auto* b = std::get_if<BlockB>(&block.block)) return block_b_boundary_pair(*b, index);
  const LutzPair pair = BlockCField(require_profile(block), options).corrected_primitive(block.correction);
  return index == 0 ? reversed(pair) : pair;
}

BoundaryJet outward_jet(const AssemblyBlock& block, int index, const QuadratureOptions& options) {
  return jet_at(boundary_pair(block, index, options), 1.0);
}

AssemblyReport validate_assembly(const Assembly& assembly, const QuadratureOptions& options) {
  AssemblyReport report;
  auto& out = report.violations;

  std::set<std::string> ids;
  for (const auto& b : assembly.blocks) {
    if (!ids.insert(b.id).second) {
      out.push_back({ViolationKind::duplicate_block_id, -1, "block id " + b.id + " is used twice"});
    }
    try {
      block_findings(b, out);
    } catch (const std::exception& e) {
      out.push_back({ViolationKind::block_invalid, -1, b.id + ": " + e.what()});
    }
  }

  std::map<std::pair<std::string, int>, int> used;
  for (int gi = 0; gi < static_cast<int>(assembly.gluings.size()); ++gi) {
    const Gluing& g = assembly.gluings[gi];
    bool resolvable = true;
    for (const BoundaryRef* ref : {&g.a, &g.b}) {
      const AssemblyBlock* block = assembly.find(ref->block);
      if (!block) {
        out.push_back({ViolationKind::unknown_block, gi, "no block named " + ref->block});
        resolvable = false;
        continue;
      }
      if (ref->index < 0 || ref->index >= boundary_count(block->block)) {
        out.push_back({ViolationKind::boundary_index, gi, ref_name(*ref) + " does not exist"});
        resolvable = false;
        continue;
      }
      auto [it, fresh] = used.emplace(std::make_pair(ref->block, ref->index), gi);
      if (!fresh) {
        std::ostringstream os;
        os << ref_name(*ref) << " already used by gluing " << it->second;
        out.push_back({ViolationKind::boundary_reused, gi, os.str()});
      }
    }
    const int det = g.matrix.det();
    if (det != 1 && det != -1) {
      out.push_back({ViolationKind::determinant, gi, "gluing matrix has determinant " + std::to_string(det)});
      continue;
    }
    if (!resolvable) continue;
    ++report.internal_gluings;

    const AssemblyBlock& ba = *assembly.find(g.a.block);
    const AssemblyBlock& bb = *assembly.find(g.b.block);
    if (!has_boundary_data(ba) || !has_boundary_data(bb)) continue;
    try {
      const LutzPair pa = transform_torus(boundary_pair(ba, g.a.index, options), g.matrix);
      const LutzPair pb = boundary_pair(bb, g.b.index, options);
      if (!lutz_valid(pa).is_valid || !lutz_valid(pb).is_valid) {
        out.push_back({ViolationKind::lutz_invalid, gi,
                       "collar of " + ref_name(lutz_valid(pa).is_valid ? g.b : g.a) + " is not Lutz"});
        continue;
      }
      const BoundaryJet ja = transform_torus(outward_jet(ba, g.a.index, options), g.matrix);
      const BoundaryJet jb = outward_jet(bb, g.b.index, options);
      const double gap = std::max(std::abs(ja.p - jb.p), std::abs(ja.q - jb.q));
      if (gap > kGluingMatchTol) {
        std::ostringstream os;
        os.precision(17);
        os << ref_name(g.a) << " and " << ref_name(g.b) << " differ by " << gap << " after the gluing map";
        out.push_back({ViolationKind::boundary_mismatch, gi, os.str()});
      }
      // Transported jet already carries the 1/det factor; in the glued
      // parameter the b side runs against its outward direction.
      if (!(ja.wronskian() * jb.wronskian() < 0.0)) {
        out.push_back({ViolationKind::sewability, gi,
                       "Wronskian signs across " + ref_name(g.a) + " ~ " + ref_name(g.b) +
                           " do not extend to a Lutz collar"});
      }
    } catch (const std::exception& e) {
      out.push_back({ViolationKind::lutz_invalid, gi, e.what()});
    }
  }

  for (const auto& b : assembly.blocks) {
    for (int i = 0; i < boundary_count(b.block); ++i) {
      if (!used.count({b.id, i})) report.external_boundaries.push_back({b.id, i});
    }
  }
  return report;
}

Assembly standard_decomposition() {
  BlockB b1;
  b1.collars[0] = {ScalarFn::constant(1.0), ScalarFn::affine(1.0, 1.0)};
  b1.collars[1] = {ScalarFn::constant(1.0), ScalarFn::affine(1.0, 1.0)};
  b1.collars[2] = {ScalarFn::constant(1.0), ScalarFn::affine(2.0, 1.0)};

  BlockB b2;
  b2.collars[0] = {ScalarFn::affine(2.0, 1.0), ScalarFn::affine(1.0, 3.0)};
  b2.collars[1] = {ScalarFn::constant(1.0), ScalarFn::affine(-1.0, 1.0)};
  b2.collars[2] = {ScalarFn::constant(1.0), ScalarFn::affine(-1.0, 1.0)};

  BlockA a1;
  BlockA a2;
  a2.unknotted = true;

  const TorusMatrix swap{0, 1, 1, 0};
  const TorusMatrix flip{1, 0, 0, -1};

  Assembly out;
  out.blocks = {{"B1", b1, {}}, {"B2", b2, {}}, {"A1", a1, {}}, {"A2", a2, {}}};
  out.gluings = {{{"B1", 2}, {"B2", 0}, swap}, {{"B2", 1}, {"A1", 0}, flip}, {{"B2", 2}, {"A2", 0}, flip}};
  return out;
}

double total_helicity(const Assembly& assembly, const QuadratureOptions& options) {
  for (const auto& b : assembly.blocks) {
    if (std::holds_alternative<BlockC>(b.block)) require_profile(b);
  }
  const AssemblyReport report = validate_assembly(assembly, options);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    throw Error(ErrorKind::invalid_assembly, std::string(to_string(v.kind)) + ": " + v.message);
  }
  double total = 0.0;
  for (const auto& b : assembly.blocks) {
    if (std::holds_alternative<BlockC>(b.block)) {
      total += helicity_block_c(require_profile(b), b.correction, options);
    }
  }
  return total;
}

Assembly disjoint_union(const Assembly& a, const Assembly& b, std::string_view prefix_a,
                        std::string_view prefix_b) {
  Assembly out;
  auto absorb = [&out](const Assembly& src, std::string_view prefix) {
    const std::string pre(prefix);
    for (auto block : src.blocks) {
      block.id = pre + block.id;
      out.blocks.push_back(std::move(block));
    }
    for (auto g : src.gluings) {
      g.a.block = pre + g.a.block;
      g.b.block = pre + g.b.block;
      out.gluings.push_back(std::move(g));
    }
  };
  absorb(a, prefix_a);
  absorb(b, prefix_b);
  return out;
}

Profile sine_profile(double a, double b, double q) {
  return make_profile(ScalarFn::constant(a), ScalarFn::sinusoid(q, 1, 0.0, b));
}

std::vector<SweepRow> helicity_sweep(double a, double b, const std::vector<double>& q_values,
                                     const CohomologyClass& correction, const QuadratureOptions& options) {
  if (a == 0.0 || b == 0.0) throw Error(ErrorKind::invalid_argument, "sweep needs a != 0 and b != 0");
  std::vector<SweepRow> rows;
  rows.reserve(q_values.size());
  for (double q : q_values) {
    const Profile profile = sine_profile(a, b, q);
    SweepRow row;
    row.Q = q;
    row.helicity = helicity_block_c(profile, correction, options);
    row.winding = winding_block_c(profile, {1.0, 0.0}, Normalization::probability, options);
    row.wrappingness = wrappingness_block_c(profile, options);
    row.trunkenness = trunkenness_block_c(profile, options);
    row.constraint_flag = std::abs(a) >= std::abs(b) - std::abs(q);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fibflow
