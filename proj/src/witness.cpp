#include "zdsq/witness.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace zdsq {

KernelMap identity_kernel_map(PresPtr p) {
  KernelMap km;
  for (int b : p->base) {
    km.forward[b] = b;
    km.reverse[b] = b;
  }
  km.bijective = true;
  km.description = "identity on " + std::to_string(p->base.size()) +
                   " kernel points";
  return km;
}

KernelMap order_kernel_map(PresPtr p1, PresPtr p2) {
  if (p1->base.size() != p2->base.size()) {
    throw std::invalid_argument(
        "order_kernel_map: kernel sizes differ, no bijection at stage");
  }
  auto sorted_base = [](PresPtr p) {
    std::vector<int> ids = p->base;
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      return p->points[a].x < p->points[b].x;
    });
    return ids;
  };
  auto b1 = sorted_base(p1);
  auto b2 = sorted_base(p2);
  KernelMap km;
  for (size_t i = 0; i < b1.size(); ++i) {
    km.forward[b1[i]] = b2[i];
    km.reverse[b2[i]] = b1[i];
  }
  km.bijective = true;
  km.description = "kernel bijection in base-point order (" +
                   std::to_string(b1.size()) + " points)";
  return km;
}

namespace {

std::vector<WObj> default_objects(PresPtr p, const ColorMap* mu) {
  std::set<int> base_set(p->base.begin(), p->base.end());
  std::vector<WObj> out;
  for (const auto& cell : p->cells) {
    bool touches_base = false;
    for (int id : cell.members) {
      if (base_set.count(id)) touches_base = true;
    }
    if (touches_base || cell.members.empty()) continue;
    WObj o;
    o.cell_id = cell.id;
    o.members = cell.members;
    o.label = cell.label;
    if (mu != nullptr) {
      auto it = mu->by_cell.find(cell.id);
      if (it == mu->by_cell.end()) {
        throw std::invalid_argument("color map misses cell " +
                                    std::to_string(cell.id));
      }
      o.color = it->second;
    } else {
      o.color = cell.label.to_string();
    }
    out.push_back(std::move(o));
  }
  return out;
}

struct Side {
  PresPtr p;
  std::vector<WObj> objs;
  std::vector<Q> depth;        // per object: distance to the base
  std::vector<int> anchor;     // per object: canonical nearest base point
  // Distance from each object to selected kernel points, lazily filled.
  std::map<std::pair<size_t, int>, Q> dist_cache;

  Q obj_to_point(size_t oi, int pt) {
    auto key = std::make_pair(oi, pt);
    auto it = dist_cache.find(key);
    if (it != dist_cache.end()) return it->second;
    Q best = -1;
    for (int id : objs[oi].members) {
      Q d = p->dist(id, pt);
      if (best < 0 || d < best) best = d;
    }
    dist_cache[key] = best;
    return best;
  }

  void prepare() {
    if (p->base.empty() && !objs.empty()) {
      throw std::invalid_argument(
          "matching needs a structural kernel to anchor the pieces");
    }
    for (size_t i = 0; i < objs.size(); ++i) {
      Q best = -1;
      int arg = -1;
      for (int b : p->base) {
        Q d = obj_to_point(i, b);
        if (arg < 0 || d < best ||
            (d == best && p->points[b].x < p->points[arg].x)) {
          best = d;
          arg = b;
        }
      }
      depth.push_back(best);
      anchor.push_back(arg);
    }
  }
};

void check_colors(const Side& s1, const Side& s2) {
  std::map<std::string, size_t> c1, c2;
  for (const auto& o : s1.objs) ++c1[o.color];
  for (const auto& o : s2.objs) ++c2[o.color];
  for (const auto& [color, n] : c1) {
    if (c2.find(color) == c2.end()) {
      int z = s2.p->base.empty() ? -1 : s2.p->base[0];
      throw StarConditionViolated(color, z, "unbounded: color absent");
    }
  }
  for (const auto& [color, n] : c2) {
    if (c1.find(color) == c1.end()) {
      int z = s1.p->base.empty() ? -1 : s1.p->base[0];
      throw StarConditionViolated(color, z, "unbounded: color absent");
    }
  }
  for (const auto& [color, n] : c1) {
    if (c2[color] != n) throw ColorCountMismatch(color, n, c2[color]);
  }
}

std::vector<std::string> density_report(Side& s, const std::string& side) {
  std::vector<std::string> out;
  if (s.p->base.size() > 64 || s.objs.size() > 256) {
    out.push_back(side + ": density audit skipped (large kernel)");
    return out;
  }
  std::set<std::string> colors;
  for (const auto& o : s.objs) colors.insert(o.color);
  for (const auto& color : colors) {
    Q worst = 0;
    for (int b : s.p->base) {
      Q best = -1;
      for (size_t i = 0; i < s.objs.size(); ++i) {
        if (s.objs[i].color != color) continue;
        Q d = s.obj_to_point(i, b);
        if (best < 0 || d < best) best = d;
      }
      if (best > worst) worst = best;
    }
    out.push_back(side + " color '" + color + "' within " +
                  q_to_string(worst) + " of every kernel point");
  }
  return out;
}

// The displacement of a candidate pairing is always measured through the
// forward transport: a side-1 object of depth d over kernel point p should
// be matched with a side-2 object at distance d from kappa(p). The reverse
// direction of a non-injective kernel map carries no metric information,
// so the odd steps only choose which side-2 object must be matched next.
WitnessTrace run_backforth(Side& s1, Side& s2, const KernelMap& km) {
  check_colors(s1, s2);
  WitnessTrace trace;
  trace.kernel_map_description = km.description;
  if (!s1.p->base.empty() && !s2.p->base.empty()) {
    auto r1 = density_report(s1, "side 1");
    auto r2 = density_report(s2, "side 2");
    trace.density_report.insert(trace.density_report.end(), r1.begin(),
                                r1.end());
    trace.density_report.insert(trace.density_report.end(), r2.begin(),
                                r2.end());
  }
  size_t total = s1.objs.size();
  std::vector<bool> used1(total, false), used2(total, false);
  auto target_of = [&](size_t a) {
    auto it = km.forward.find(s1.anchor[a]);
    if (it == km.forward.end()) {
      throw std::invalid_argument("kernel map not total at point " +
                                  std::to_string(s1.anchor[a]));
    }
    return it->second;
  };
  auto displacement = [&](size_t a, size_t b) -> Q {
    return abs(s2.obj_to_point(b, target_of(a)) - s1.depth[a]);
  };
  for (size_t n = 0; n < total; ++n) {
    bool even = n % 2 == 0;
    size_t a = 0, b = 0;
    Q bound;
    if (even) {
      while (a < total && used1[a]) ++a;
      const std::string& color = s1.objs[a].color;
      int best = -1;
      Q best_r = 0;
      for (size_t cand = 0; cand < total; ++cand) {
        if (used2[cand] || s2.objs[cand].color != color) continue;
        Q r = displacement(a, cand);
        if (best < 0 || r < best_r) {
          best = static_cast<int>(cand);
          best_r = r;
        }
      }
      if (best < 0) throw ColorCountMismatch(color, 1, 0);
      b = static_cast<size_t>(best);
      bound = best_r;
    } else {
      while (b < total && used2[b]) ++b;
      const std::string& color = s2.objs[b].color;
      int best = -1;
      Q best_r = 0;
      for (size_t cand = 0; cand < total; ++cand) {
        if (used1[cand] || s1.objs[cand].color != color) continue;
        Q r = displacement(cand, b);
        if (best < 0 || r < best_r) {
          best = static_cast<int>(cand);
          best_r = r;
        }
      }
      if (best < 0) throw ColorCountMismatch(color, 0, 1);
      a = static_cast<size_t>(best);
      bound = best_r;
    }
    used1[a] = true;
    used2[b] = true;
    TracePair tp;
    tp.a_cell = s1.objs[a].cell_id;
    tp.b_cell = s2.objs[b].cell_id;
    tp.color = s1.objs[a].color;
    tp.bound = bound;
    tp.achieved = bound <= q_pow2_neg(n);
    tp.even_step = even;
    trace.pairs.push_back(std::move(tp));
  }
  return trace;
}

}  // namespace

WitnessTrace color_backforth(PresPtr p1, PresPtr p2, const ColorMap& mu1,
                             const ColorMap& mu2, const KernelMap& km) {
  Side s1{p1, default_objects(p1, &mu1), {}, {}, {}};
  Side s2{p2, default_objects(p2, &mu2), {}, {}, {}};
  if (s1.objs.empty() && s2.objs.empty()) {
    WitnessTrace trace;
    trace.kernel_map_description = km.description;
    return trace;
  }
  if (s1.objs.size() != s2.objs.size()) {
    throw ColorCountMismatch("(total)", s1.objs.size(), s2.objs.size());
  }
  s1.prepare();
  s2.prepare();
  return run_backforth(s1, s2, km);
}

namespace {

void check_kernel_perfect(PresPtr p, Nat stage, const char* side) {
  Q radius = q_pow2_neg(stage >= 2 ? stage - 2 : 0);
  if (p->base.size() < 2) {
    throw std::invalid_argument(std::string("hypothesis (1) fails on ") +
                                side + ": kernel not perfect at stage");
  }
  for (int b : p->base) {
    bool found = false;
    for (int c : p->base) {
      if (c == b) continue;
      if (p->dist(b, c) <= radius) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument(
          std::string("hypothesis (1) fails on ") + side +
          ": kernel point without close companion at stage");
    }
  }
}

bool structurally_equal(PresPtr a, PresPtr b, Nat depth) {
  if (a->points.size() != b->points.size()) return false;
  if (!(a->label == b->label)) return false;
  if (a->pieces.size() != b->pieces.size()) return false;
  if (depth == 0) return true;
  for (size_t i = 0; i < a->pieces.size(); ++i) {
    if (!(a->pieces[i].label == b->pieces[i].label)) return false;
    if (!structurally_equal(a->pieces[i].content, b->pieces[i].content,
                            depth - 1)) {
      return false;
    }
  }
  return true;
}

std::vector<SubWitness> make_sub_witnesses(PresPtr p1, PresPtr p2,
                                           const WitnessTrace& trace,
                                           Nat stage) {
  std::vector<SubWitness> out;
  auto piece_of = [](PresPtr p, int cell_id) -> const Piece* {
    for (const auto& piece : p->pieces) {
      if (piece.cell_id == cell_id) return &piece;
    }
    return nullptr;
  };
  for (const auto& pair : trace.pairs) {
    const Piece* a = piece_of(p1, pair.a_cell);
    const Piece* b = piece_of(p2, pair.b_cell);
    if (a == nullptr || b == nullptr) continue;
    if (a->point_ids.size() <= 1 && b->point_ids.size() <= 1) continue;
    SubWitness sw;
    sw.a_cell = pair.a_cell;
    sw.b_cell = pair.b_cell;
    sw.recursive = structurally_equal(a->content, b->content, stage);
    sw.matched = sw.recursive ? a->content->cells.size() : 0;
    out.push_back(sw);
  }
  return out;
}

}  // namespace

StageWitness extend_homeo_families(PresPtr p1, PresPtr p2,
                                   std::vector<WObj> fam1,
                                   std::vector<WObj> fam2,
                                   const KernelMap& km, Nat stage,
                                   const std::vector<Q>* depth1,
                                   const std::vector<int>* anchor1) {
  check_kernel_perfect(p1, stage, "side 1");
  check_kernel_perfect(p2, stage, "side 2");
  Side s1{p1, std::move(fam1), {}, {}, {}};
  Side s2{p2, std::move(fam2), {}, {}, {}};
  StageWitness w;
  if (s1.objs.empty() && s2.objs.empty()) {
    w.trace.kernel_map_description = km.description;
    w.distortion = 0;
    return w;
  }
  if (depth1 != nullptr && anchor1 != nullptr) {
    s1.depth = *depth1;
    s1.anchor = *anchor1;
  } else {
    s1.prepare();
  }
  s2.prepare();
  w.trace = run_backforth(s1, s2, km);
  w.distortion = 0;
  std::map<int, const WObj*> by_cell1, by_cell2;
  for (const auto& o : s1.objs) by_cell1[o.cell_id] = &o;
  for (const auto& o : s2.objs) by_cell2[o.cell_id] = &o;
  for (const auto& pair : w.trace.pairs) {
    if (pair.bound > w.distortion) w.distortion = pair.bound;
    if (!(by_cell1[pair.a_cell]->label == by_cell2[pair.b_cell]->label)) {
      w.labels_preserved = false;
    }
  }
  w.sub_witnesses = make_sub_witnesses(p1, p2, w.trace, stage);
  return w;
}

StageWitness extend_homeo(PresPtr p1, PresPtr p2, const KernelMap& km) {
  Nat stage = std::min(p1->stage, p2->stage);
  return extend_homeo_families(p1, p2, default_objects(p1, nullptr),
                               default_objects(p2, nullptr), km, stage);
}

// ---------------------------------------------------------------------------
// Isolated point removal

namespace {

// Locates the node whose child list forms the converging sequence that
// contains z, together with the index of the child holding z.
const CtblNode* find_sequence_node(const CtblNode* node, int z, Nat* child_ix) {
  if (node->form.mult > 1) {
    for (const auto& block : node->blocks) {
      for (int id : block.point_ids) {
        if (id == z) return find_sequence_node(&block, z, child_ix);
      }
    }
    return nullptr;
  }
  if (node->form.rank.is_zero()) return nullptr;  // no sequence below
  for (Nat i = 1; i <= node->children.size(); ++i) {
    const CtblNode& child = node->children[i - 1];
    bool inside = false;
    for (int id : child.point_ids) inside = inside || id == z;
    if (!inside) continue;
    // z sits in child i; if the child is a single point, the sequence is
    // this node's child row, otherwise recurse.
    if (child.form.rank.is_zero() && child.form.mult == 1) {
      *child_ix = i;
      return node;
    }
    return find_sequence_node(&child, z, child_ix);
  }
  return nullptr;
}

RemovalWitness shift_children(const CtblNode* node, Nat from, int z) {
  RemovalWitness w;
  w.removed = z;
  for (Nat i = 1; i <= node->children.size(); ++i) {
    w.sequence.push_back(node->children[i - 1].top_point);
  }
  // Children converge to the node's limit point as the index grows; the
  // shift moves every element from z's position one step deeper.
  for (Nat i = from; i < node->children.size(); ++i) {
    w.shift.push_back({node->children[i - 1].top_point,
                       node->children[i].top_point});
  }
  w.overflow_from = node->children.back().top_point;
  w.note = "index shift within one converging sequence; elements before the "
           "removed point stay fixed";
  return w;
}

}  // namespace

RemovalWitness remove_isolated_witness(PresPtr p, int z) {
  if (z < 0 || static_cast<size_t>(z) >= p->points.size()) {
    throw std::invalid_argument("remove_isolated_witness: no such point");
  }
  const PresPoint& pt = p->points[z];
  if (pt.kernel) {
    throw std::invalid_argument(
        "remove_isolated_witness: kernel points cannot be removed");
  }
  if (!pt.iso_rank.has_value() || !pt.iso_rank->is_zero()) {
    throw std::invalid_argument(
        "remove_isolated_witness: the point is not isolated");
  }
  switch (p->kind) {
    case Presentation::Kind::Countable: {
      if (p->form.rank.is_zero()) {
        throw std::invalid_argument(
            "remove_isolated_witness: finite space changes type");
      }
      Nat child_ix = 0;
      const CtblNode* node = find_sequence_node(p->tree.get(), z, &child_ix);
      if (node == nullptr) {
        throw std::logic_error("remove_isolated_witness: sequence not found");
      }
      return shift_children(node, child_ix, z);
    }
    case Presentation::Kind::Compactification: {
      // Find the piece holding z.
      for (size_t i = 0; i < p->pieces.size(); ++i) {
        const Piece& piece = p->pieces[i];
        auto it = std::find(piece.point_ids.begin(), piece.point_ids.end(), z);
        if (it == piece.point_ids.end()) continue;
        if (piece.point_ids.size() > 1) {
          // Shift inside the piece, mapped through the id table.
          int local = static_cast<int>(it - piece.point_ids.begin());
          RemovalWitness inner =
              remove_isolated_witness(piece.content, local);
          RemovalWitness w;
          w.removed = z;
          for (int id : inner.sequence) {
            w.sequence.push_back(piece.point_ids[id]);
          }
          for (auto [a, b] : inner.shift) {
            w.shift.push_back({piece.point_ids[a], piece.point_ids[b]});
          }
          if (inner.overflow_from.has_value()) {
            w.overflow_from = piece.point_ids[*inner.overflow_from];
          }
          w.note = inner.note + " (inside one catalog piece)";
          return w;
        }
        // A singleton piece: shift along its column, deeper strips first.
        RemovalWitness w;
        w.removed = z;
        std::vector<size_t> column;
        for (size_t j = 0; j < p->pieces.size(); ++j) {
          if (p->pieces[j].col == piece.col &&
              p->pieces[j].point_ids.size() == 1 &&
              p->pieces[j].label == piece.label) {
            column.push_back(j);
          }
        }
        std::sort(column.begin(), column.end(), [&](size_t a, size_t b) {
          return p->pieces[a].strip < p->pieces[b].strip;
        });
        size_t pos = 0;
        for (size_t j = 0; j < column.size(); ++j) {
          w.sequence.push_back(p->pieces[column[j]].point_ids[0]);
          if (column[j] == i) pos = j;
        }
        for (size_t j = pos; j + 1 < column.size(); ++j) {
          w.shift.push_back({p->pieces[column[j]].point_ids[0],
                             p->pieces[column[j + 1]].point_ids[0]});
        }
        w.overflow_from = p->pieces[column.back()].point_ids[0];
        w.note = "index shift along the column toward the kernel";
        return w;
      }
      throw std::logic_error("remove_isolated_witness: point not in a piece");
    }
    case Presentation::Kind::Product:
      throw std::invalid_argument(
          "remove_isolated_witness: use a factor presentation");
  }
  throw std::logic_error("remove_isolated_witness: unreachable");
}

// ---------------------------------------------------------------------------
// The square driver

namespace {

Nat interleave_bits(Nat a, Nat b, Nat bits) {
  // Bit i of the result alternates between a's and b's bit stream.
  Nat out = 0;
  for (Nat i = 0; i < bits; ++i) {
    Nat bit = (i % 2 == 0) ? (a >> (i / 2)) & 1 : (b >> (i / 2)) & 1;
    out |= bit << i;
  }
  return out;
}

std::pair<Nat, Nat> deinterleave_bits(Nat c, Nat bits) {
  Nat a = 0, b = 0;
  for (Nat i = 0; i < bits; ++i) {
    Nat bit = (c >> i) & 1;
    if (i % 2 == 0) {
      a |= bit << (i / 2);
    } else {
      b |= bit << (i / 2);
    }
  }
  return {a, b};
}

struct FamilyPart {
  std::vector<int> members;  // factor point ids
  NormalForm label;
};

// The splitting of one factor piece into n+1 isolated-point singletons and
// the remainder; removing finitely many isolated points keeps the type.
std::vector<FamilyPart> piece_splitting(PresPtr pX, const Piece& piece,
                                        Nat n) {
  std::vector<FamilyPart> out;
  if (piece.point_ids.size() <= 1) {
    out.push_back({piece.point_ids, piece.label});
    return out;
  }
  std::vector<int> iso;
  for (int id : piece.point_ids) {
    const auto& pt = pX->points[id];
    if (!pt.kernel && pt.iso_rank.has_value() && pt.iso_rank->is_zero()) {
      iso.push_back(id);
    }
  }
  size_t peel = std::min<size_t>(n + 1, iso.size());
  NormalForm fin1;
  fin1.countable = ScatteredForm(Ordinal(), 1);
  std::set<int> peeled;
  for (size_t k = 0; k < peel; ++k) {
    out.push_back({{iso[k]}, fin1});
    peeled.insert(iso[k]);
  }
  std::vector<int> rest;
  for (int id : piece.point_ids) {
    if (!peeled.count(id)) rest.push_back(id);
  }
  if (!rest.empty()) out.push_back({rest, piece.label});
  return out;
}

}  // namespace

SquareWitnessResult square_witness(const EPSet& m, Nat stage) {
  if (stage < 2) {
    throw StageTooCoarse("square_witness: no strips at stage 1");
  }
  Atom x_atom{Atom::Kind::X, 0, m, 0};
  PresPtr pX =
      present_K(Catalog::products_over(m), stage, atom_normal_form(x_atom));
  PresPtr p1 = present_product(pX, pX);
  size_t nx = pX->points.size();

  // Depths and nearest base points of the factor, computed once. The
  // distance from a product point to the structural kernel of the square
  // is the smaller factor depth, and the nearest kernel pair is obtained
  // by snapping the shallower coordinate to its base anchor.
  size_t nb = pX->base.size();
  std::vector<Q> factor_depth(nx);
  std::vector<Nat> factor_anchor(nx);
  for (size_t id = 0; id < nx; ++id) {
    Q best = -1;
    Nat arg = 0;
    for (size_t j = 0; j < nb; ++j) {
      Q d = pX->dist(static_cast<int>(id), pX->base[j]);
      if (best < 0 || d < best) {
        best = d;
        arg = static_cast<Nat>(j);
      }
    }
    factor_depth[id] = best;
    factor_anchor[id] = arg;
  }

  // The product family: splittings of the factor pieces, paired across the
  // two coordinates with the splitting depth i + j.
  std::vector<WObj> fam1;
  std::vector<Q> fam1_depth;
  std::vector<int> fam1_anchor;
  struct Demand {
    NormalForm label;
    Nat column = 0;  // target base index
    Q depth;
  };
  std::vector<Demand> demands;
  for (size_t i = 0; i < pX->pieces.size(); ++i) {
    for (size_t j = 0; j < pX->pieces.size(); ++j) {
      Nat n = static_cast<Nat>(i + j);
      auto ls = piece_splitting(pX, pX->pieces[i], n);
      auto rs = piece_splitting(pX, pX->pieces[j], n);
      for (const auto& e : ls) {
        for (const auto& f : rs) {
          WObj o;
          o.cell_id = static_cast<int>(fam1.size());
          for (int a : e.members) {
            for (int b : f.members) {
              o.members.push_back(static_cast<int>(a * nx + b));
            }
          }
          o.label = product_normal_form(e.label, f.label);
          o.color = o.label.to_string();

          int u_min = e.members[0];
          for (int a : e.members) {
            if (factor_depth[a] < factor_depth[u_min]) u_min = a;
          }
          int v_min = f.members[0];
          for (int b : f.members) {
            if (factor_depth[b] < factor_depth[v_min]) v_min = b;
          }
          Q delta;
          int anchor_id;
          Nat au, av;
          if (factor_depth[v_min] <= factor_depth[u_min]) {
            delta = factor_depth[v_min];
            int u_ref = e.members[0];
            anchor_id = static_cast<int>(
                u_ref * nx + pX->base[factor_anchor[v_min]]);
            au = factor_anchor[u_ref];
            av = factor_anchor[v_min];
          } else {
            delta = factor_depth[u_min];
            int v_ref = f.members[0];
            anchor_id = static_cast<int>(
                pX->base[factor_anchor[u_min]] * nx + v_ref);
            au = factor_anchor[u_min];
            av = factor_anchor[v_ref];
          }
          fam1_depth.push_back(delta);
          fam1_anchor.push_back(anchor_id);
          demands.push_back({o.label, interleave_bits(au, av, stage), delta});
          fam1.push_back(std::move(o));
        }
      }
    }
  }

  // Separation of the stacked stubs: one jitter unit below the smallest
  // gap between distinct demanded depths in any column.
  Q min_gap = -1;
  {
    std::map<Nat, std::vector<Q>> per_col;
    for (const auto& d : demands) per_col[d.column].push_back(d.depth);
    for (auto& [c, ys] : per_col) {
      std::sort(ys.begin(), ys.end());
      for (size_t i = 1; i < ys.size(); ++i) {
        Q g = ys[i] - ys[i - 1];
        if (g > 0 && (min_gap < 0 || g < min_gap)) min_gap = g;
      }
    }
  }
  if (min_gap <= 0) min_gap = q_pow2_neg(stage + 4);
  Q jitter = min_gap / Q(4 * (demands.size() + 1));
  Q sigma = jitter / 4;

  // Assemble the demand-built presentation of the space itself.
  auto p2m = std::make_shared<Presentation>();
  p2m->kind = Presentation::Kind::Compactification;
  p2m->stage = stage;
  p2m->catalog = Catalog::products_over(m);
  p2m->label = atom_normal_form(x_atom);
  std::vector<PresPtr> contents;
  size_t content_dim = 1;
  for (const auto& d : demands) {
    contents.push_back(present_nf(d.label, 1));
    content_dim = std::max(content_dim, contents.back()->dim);
  }
  p2m->dim = 1 + std::max<size_t>(1, content_dim);
  NormalForm cantor_nf;
  cantor_nf.cantor = true;
  PresCell base_cell;
  base_cell.id = 0;
  base_cell.label = cantor_nf;
  for (Nat j = 0; j < (Nat(1) << stage); ++j) {
    PresPoint pt;
    pt.x.assign(p2m->dim, Q(0));
    pt.x[0] = schedule_q(j);
    pt.cell = 0;
    pt.kernel = true;
    pt.addr = "k" + std::to_string(j);
    p2m->points.push_back(std::move(pt));
    p2m->base.push_back(static_cast<int>(p2m->points.size() - 1));
    base_cell.members.push_back(p2m->base.back());
  }
  p2m->cells.push_back(std::move(base_cell));

  std::map<std::pair<Nat, std::string>, Nat> stack_count;
  std::vector<WObj> fam2;
  for (size_t t = 0; t < demands.size(); ++t) {
    const Demand& d = demands[t];
    Nat k = stack_count[{d.column, q_to_string(d.depth)}]++;
    Q y_base = d.depth + Q(k) * jitter;
    Piece piece;
    piece.strip = 0;
    while (schedule_t(piece.strip + 1) >= d.depth && piece.strip < 4 * stage) {
      ++piece.strip;
    }
    piece.col = d.column;
    piece.label = d.label;
    piece.content = contents[t];
    piece.y0 = y_base;
    piece.sigma = sigma;
    piece.cell_id = static_cast<int>(p2m->cells.size());
    PresCell cell;
    cell.id = piece.cell_id;
    cell.label = d.label;
    std::string prefix = "d" + std::to_string(t) + "/";
    for (const auto& cp : contents[t]->points) {
      PresPoint pt;
      pt.x.assign(p2m->dim, Q(0));
      pt.x[0] = schedule_q(d.column);
      pt.x[1] = y_base + sigma * cp.x[0];
      for (size_t c = 1; c < cp.x.size(); ++c) pt.x[1 + c] = sigma * cp.x[c];
      pt.cell = piece.cell_id;
      pt.kernel = cp.kernel;
      pt.iso_rank = cp.iso_rank;
      pt.addr = prefix + cp.addr;
      p2m->points.push_back(std::move(pt));
      int id = static_cast<int>(p2m->points.size() - 1);
      piece.point_ids.push_back(id);
      cell.members.push_back(id);
    }
    WObj o;
    o.cell_id = piece.cell_id;
    o.members = piece.point_ids;
    o.label = d.label;
    o.color = d.label.to_string();
    fam2.push_back(std::move(o));
    p2m->cells.push_back(std::move(cell));
    p2m->pieces.push_back(std::move(piece));
  }
  PresPtr p2 = p2m;

  // Kernel transport: interleaving of the factor base indices, with the
  // diagonal section as the reverse direction.
  KernelMap km;
  km.bijective = false;
  km.description =
      "base interleaving at stage " + std::to_string(stage) +
      " (surjection onto the base of the target; diagonal section back)";
  for (int w : p1->base) {
    auto [u, v] = p1->pair_index[w];
    Nat c = interleave_bits(factor_anchor[u], factor_anchor[v], stage);
    km.forward[w] = p2->base[c];
  }
  for (Nat c = 0; c < (Nat(1) << stage); ++c) {
    auto [a, b] = deinterleave_bits(c, stage);
    int ida = pX->base[a];
    int idb = pX->base[b];
    km.reverse[p2->base[c]] = static_cast<int>(ida * nx + idb);
  }

  SquareWitnessResult res;
  res.square = p1;
  res.target = p2;
  res.family_size = fam1.size();
  std::set<std::string> labels;
  for (const auto& o : fam1) labels.insert(o.color);
  res.labels.assign(labels.begin(), labels.end());
  res.witness = extend_homeo_families(p1, p2, std::move(fam1), std::move(fam2),
                                      km, stage, &fam1_depth, &fam1_anchor);
  return res;
}

}  // namespace zdsq
