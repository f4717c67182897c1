#include "zdsq/presentation.hpp"

#include <algorithm>

namespace zdsq {

std::string q_to_string(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Q q_parse(const std::string& s) {
  Q q;
  if (q.set_str(s, 10) != 0) {
    throw std::invalid_argument("not a rational: " + s);
  }
  q.canonicalize();
  return q;
}

Q q_pow2_neg(Nat n) {
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), n);
  return Q(1, den);
}

Q q_pow3_neg(Nat n) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 3, n);
  return Q(1, den);
}

Q schedule_t(Nat n) { return q_pow2_neg(n); }
Q schedule_eps(Nat n) { return q_pow2_neg(n); }

Q schedule_q(Nat k) {
  Q x = 0;
  for (Nat i = 0; k != 0; ++i, k >>= 1) {
    if (k & 1) x += 2 * q_pow3_neg(i + 1);
  }
  return x;
}

Q linf_dist(const std::vector<Q>& a, const std::vector<Q>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("linf_dist: dimension mismatch");
  }
  Q best = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    Q d = abs(a[i] - b[i]);
    if (d > best) best = d;
  }
  return best;
}

Q linf_diameter(const std::vector<std::vector<Q>>& pts) {
  if (pts.empty()) return 0;
  Q best = 0;
  for (size_t c = 0; c < pts[0].size(); ++c) {
    Q lo = pts[0][c], hi = pts[0][c];
    for (const auto& p : pts) {
      if (p[c] < lo) lo = p[c];
      if (p[c] > hi) hi = p[c];
    }
    if (hi - lo > best) best = hi - lo;
  }
  return best;
}

Q hausdorff_distance(const std::vector<std::vector<Q>>& a,
                     const std::vector<std::vector<Q>>& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("hausdorff_distance: empty set");
  }
  Q best = 0;
  for (int side = 0; side < 2; ++side) {
    const auto& from = side == 0 ? a : b;
    const auto& to = side == 0 ? b : a;
    for (const auto& p : from) {
      Q nearest = linf_dist(p, to[0]);
      for (const auto& q : to) {
        Q d = linf_dist(p, q);
        if (d < nearest) nearest = d;
      }
      if (nearest > best) best = nearest;
    }
  }
  return best;
}

Q mesh(const std::vector<std::vector<std::vector<Q>>>& cells) {
  Q best = 0;
  for (const auto& c : cells) {
    Q d = linf_diameter(c);
    if (d > best) best = d;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Catalog

Catalog Catalog::finite_list(std::vector<NormalForm> members) {
  Catalog c;
  c.finite_ = true;
  c.members_ = std::move(members);
  return c;
}

Catalog Catalog::gamma_below(Nat n) {
  std::vector<NormalForm> members;
  for (Nat b = 0; b < n; ++b) {
    NormalForm nf;
    nf.countable = ScatteredForm(Ordinal::finite(b), 1);
    members.push_back(std::move(nf));
  }
  return finite_list(std::move(members));
}

Catalog Catalog::products_over(const EPSet& m) {
  Catalog c;
  c.finite_ = false;
  c.m_ = m;
  return c;
}

bool Catalog::is_empty() const { return finite_ && members_.empty(); }

namespace {

Nat ruler(Nat n) {  // 2-adic valuation of n+1
  Nat v = 0;
  Nat x = n + 1;
  while ((x & 1) == 0) {
    ++v;
    x >>= 1;
  }
  return v;
}

std::vector<Nat> first_elements(const EPSet& m, Nat count) {
  std::vector<Nat> out;
  Nat n = 1;
  while (out.size() < count) {
    if (m.contains(n)) out.push_back(n);
    ++n;
  }
  return out;
}

// Members of weight w over the index set: countable rank a plus a multiset
// of indices into M, where the z with M-index i costs i+1. Within one
// weight, members with more uncountable factors come first, then the
// canonical normal-form order.
void partitions_into(Nat w, Nat max_part, std::vector<Nat>& cur,
                     std::vector<std::vector<Nat>>& out) {
  if (w == 0) {
    out.push_back(cur);
    return;
  }
  for (Nat p = std::min(w, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_into(w - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<NormalForm> sm_members_of_weight(const EPSet& m, Nat w) {
  std::vector<Nat> elems = first_elements(m, w == 0 ? 1 : w);
  std::vector<NormalForm> grade;
  for (Nat a = 0; a <= w; ++a) {
    Nat rest = w - a;
    std::vector<std::vector<Nat>> parts;
    std::vector<Nat> cur;
    partitions_into(rest, rest == 0 ? 1 : rest, cur, parts);
    for (const auto& part : parts) {
      NormalForm nf;
      nf.countable = ScatteredForm(Ordinal::finite(a), 1);
      for (Nat p : part) nf.z_atoms.push_back(elems[p - 1]);
      std::sort(nf.z_atoms.begin(), nf.z_atoms.end());
      grade.push_back(std::move(nf));
    }
  }
  std::stable_sort(grade.begin(), grade.end(),
                   [](const NormalForm& x, const NormalForm& y) {
                     if (x.z_atoms.size() != y.z_atoms.size()) {
                       return x.z_atoms.size() > y.z_atoms.size();
                     }
                     return x < y;
                   });
  return grade;
}

}  // namespace

NormalForm Catalog::member(Nat r) const {
  if (finite_) {
    if (r >= members_.size()) {
      throw std::out_of_range("Catalog::member: index out of range");
    }
    return members_[r];
  }
  Nat seen = 0;
  for (Nat w = 0;; ++w) {
    auto grade = sm_members_of_weight(*m_, w);
    if (r < seen + grade.size()) return grade[r - seen];
    seen += grade.size();
  }
}

Nat Catalog::member_index_at(Nat n) const {
  if (is_empty()) throw std::logic_error("empty catalog has no enumeration");
  Nat v = ruler(n);
  return finite_ ? v % members_.size() : v;
}

NormalForm Catalog::member_at(Nat n) const { return member(member_index_at(n)); }

std::string Catalog::to_string() const {
  if (!finite_) return "S(" + m_->to_string() + ")";
  std::string out = "{";
  for (size_t i = 0; i < members_.size(); ++i) {
    if (i > 0) out += ", ";
    out += members_[i].to_string();
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Presentation basics

Q Presentation::dist(int a, int b) const {
  return linf_dist(points[a].x, points[b].x);
}

Q Presentation::dist_to_set(int id, const std::vector<int>& set) const {
  if (set.empty()) throw std::invalid_argument("dist_to_set: empty set");
  Q best = dist(id, set[0]);
  for (int s : set) {
    Q d = dist(id, s);
    if (d < best) best = d;
  }
  return best;
}

Q Presentation::diameter(const std::vector<int>& ids) const {
  std::vector<std::vector<Q>> pts;
  for (int id : ids) pts.push_back(points[id].x);
  return linf_diameter(pts);
}

int Presentation::nearest_base(const std::vector<int>& ids) const {
  if (base.empty()) throw std::logic_error("nearest_base: no structural base");
  int best = -1;
  Q best_d = 0;
  for (int b : base) {
    Q d = dist_to_set(b, ids);
    if (best < 0 || d < best_d ||
        (d == best_d && points[b].x < points[best].x)) {
      best = b;
      best_d = d;
    }
  }
  return best;
}

Q Presentation::depth(const std::vector<int>& ids) const {
  if (base.empty()) throw std::logic_error("depth: no structural base");
  Q best = -1;
  for (int id : ids) {
    Q d = dist_to_set(id, base);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

std::vector<int> Presentation::non_kernel_points() const {
  std::vector<int> out;
  for (size_t i = 0; i < points.size(); ++i) {
    if (!points[i].kernel) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::optional<Q> Presentation::density_radius() const {
  auto nk = non_kernel_points();
  if (nk.empty() || base.empty()) return std::nullopt;
  Q worst = 0;
  for (int b : base) {
    Q d = dist_to_set(b, nk);
    if (d > worst) worst = d;
  }
  return worst;
}

bool Presentation::cells_separated() const {
  // Product cells inherit clopen-ness from their factors: two distinct
  // cells differ in some factor, and the separation happens there.
  if (kind == Kind::Product) {
    if (!left->cells_separated() || !right->cells_separated()) return false;
    for (const auto& c : cells) {
      for (const auto& other : cells) {
        if (other.id <= c.id) continue;
        Q best = -1;
        for (int a : c.members) {
          for (int b : other.members) {
            Q d = dist(a, b);
            if (best < 0 || d < best) best = d;
          }
        }
        if (best == 0) return false;  // distinct cells may not touch
      }
    }
    return true;
  }
  std::vector<bool> is_base(points.size(), false);
  for (int b : base) is_base[b] = true;
  for (const auto& c : cells) {
    bool touches_base = false;
    for (int id : c.members) {
      if (is_base[id]) touches_base = true;
    }
    if (touches_base) continue;  // the base is the accumulation locus
    Q diam = diameter(c.members);
    for (const auto& other : cells) {
      if (other.id == c.id) continue;
      Q best = -1;
      for (int a : c.members) {
        for (int b : other.members) {
          Q d = dist(a, b);
          if (best < 0 || d < best) best = d;
        }
      }
      if (best >= 0 && best <= diam) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Countable layout

namespace {

struct CtblBuilder {
  Nat stage;
  Presentation* pres;

  CtblNode build(const ScatteredForm& f, const Q& offset, const Q& scale,
                 const std::string& addr) {
    CtblNode node;
    node.form = f;
    if (f.mult > 1) {
      ScatteredForm block(f.rank, 1);
      for (Nat j = 0; j < f.mult; ++j) {
        Q off = offset + scale * Q(j, f.mult);
        Q sc = scale / Q(4 * f.mult);
        node.blocks.push_back(
            build(block, off, sc, addr + "b" + std::to_string(j) + "/"));
        auto& ids = node.blocks.back().point_ids;
        node.point_ids.insert(node.point_ids.end(), ids.begin(), ids.end());
      }
      return node;
    }
    Nat a = f.finite_rank();
    node.top_point = add_point(offset, f.rank, addr + (a == 0 ? "pt" : "top"));
    node.point_ids.push_back(node.top_point);
    if (a == 0) return node;
    node.children.resize(stage);
    for (Nat i = stage; i >= 1; --i) {  // ascending coordinates
      Q off = offset + scale * q_pow3_neg(i);
      Q sc = scale * q_pow3_neg(i + 1);
      ScatteredForm child(Ordinal::finite(a - 1), 1);
      node.children[i - 1] =
          build(child, off, sc, addr + "c" + std::to_string(i) + "/");
      auto& ids = node.children[i - 1].point_ids;
      node.point_ids.insert(node.point_ids.end(), ids.begin(), ids.end());
    }
    return node;
  }

  int add_point(const Q& x, const Ordinal& rank, const std::string& addr) {
    PresPoint p;
    p.x = {x};
    p.cell = 0;
    p.kernel = false;
    p.iso_rank = rank;
    p.addr = addr;
    pres->points.push_back(std::move(p));
    return static_cast<int>(pres->points.size() - 1);
  }
};

}  // namespace

PresPtr present_countable(const ScatteredForm& f, Nat stage) {
  if (stage < 1) throw std::invalid_argument("present_countable: stage >= 1");
  if (!f.rank_is_finite()) {
    throw std::invalid_argument("present_countable: infinite rank");
  }
  auto p = std::make_shared<Presentation>();
  p->kind = Presentation::Kind::Countable;
  p->stage = stage;
  p->dim = 1;
  p->form = f;
  NormalForm nf;
  nf.countable = f;
  p->label = nf;
  CtblBuilder b{stage, p.get()};
  p->tree = std::make_shared<CtblNode>(b.build(f, Q(0), Q(1), ""));
  PresCell cell;
  cell.id = 0;
  cell.label = nf;
  for (size_t i = 0; i < p->points.size(); ++i) {
    cell.members.push_back(static_cast<int>(i));
  }
  p->cells.push_back(std::move(cell));
  return p;
}

// ---------------------------------------------------------------------------
// Compactification layout

PresPtr present_K(const Catalog& catalog, Nat stage,
                  std::optional<NormalForm> label) {
  if (stage < 1) throw std::invalid_argument("present_K: stage >= 1");
  auto p = std::make_shared<Presentation>();
  p->kind = Presentation::Kind::Compactification;
  p->stage = stage;
  p->catalog = catalog;

  // Piece contents, one per strip, shared across the strip's columns.
  std::vector<PresPtr> contents;
  std::vector<NormalForm> labels;
  bool with_pieces = stage >= 2 && !catalog.is_empty();
  if (with_pieces) {
    for (Nat n = 0; n < stage; ++n) {
      labels.push_back(catalog.member_at(n));
      contents.push_back(present_nf(labels.back(), stage - 1));
    }
  }
  size_t content_dim = 1;
  for (const auto& c : contents) content_dim = std::max(content_dim, c->dim);
  p->dim = 1 + std::max<size_t>(1, content_dim);

  // Base: the level-`stage` triadic left endpoints.
  NormalForm cantor_nf;
  cantor_nf.cantor = true;
  PresCell base_cell;
  base_cell.id = 0;
  base_cell.label = cantor_nf;
  for (Nat j = 0; j < (Nat(1) << stage); ++j) {
    PresPoint pt;
    pt.x.assign(p->dim, Q(0));
    pt.x[0] = schedule_q(j);
    pt.cell = 0;
    pt.kernel = true;
    pt.addr = "k" + std::to_string(j);
    p->points.push_back(std::move(pt));
    p->base.push_back(static_cast<int>(p->points.size() - 1));
    base_cell.members.push_back(p->base.back());
  }
  p->cells.push_back(std::move(base_cell));

  if (with_pieces) {
    for (Nat n = 0; n < stage; ++n) {
      // Piece scale: small against the strip height and the column gaps.
      Q gap = -1;
      for (Nat a = 0; a <= n; ++a) {
        for (Nat b = a + 1; b <= n; ++b) {
          Q d = abs(schedule_q(a) - schedule_q(b));
          if (gap < 0 || d < gap) gap = d;
        }
      }
      Q sigma = q_pow2_neg(n + 3);
      if (gap > 0 && gap / 4 < sigma) sigma = gap / 4;
      Q y0 = Q(9) * q_pow2_neg(n + 4);  // bottom of the strip plus an eighth
      for (Nat k = 0; k <= n; ++k) {
        Piece piece;
        piece.strip = n;
        piece.col = k;
        piece.label = labels[n];
        piece.content = contents[n];
        piece.y0 = y0;
        piece.sigma = sigma;
        piece.cell_id = static_cast<int>(p->cells.size());
        PresCell cell;
        cell.id = piece.cell_id;
        cell.label = piece.label;
        std::string prefix =
            "p" + std::to_string(n) + "." + std::to_string(k) + "/";
        for (const auto& cp : piece.content->points) {
          PresPoint pt;
          pt.x.assign(p->dim, Q(0));
          pt.x[0] = schedule_q(k);
          pt.x[1] = y0 + sigma * cp.x[0];
          for (size_t t = 1; t < cp.x.size(); ++t) {
            pt.x[1 + t] = sigma * cp.x[t];
          }
          pt.cell = piece.cell_id;
          pt.kernel = cp.kernel;
          pt.iso_rank = cp.iso_rank;
          pt.addr = prefix + cp.addr;
          p->points.push_back(std::move(pt));
          int id = static_cast<int>(p->points.size() - 1);
          piece.point_ids.push_back(id);
          cell.members.push_back(id);
        }
        p->cells.push_back(std::move(cell));
        p->pieces.push_back(std::move(piece));
      }
    }
  }

  if (label.has_value()) {
    p->label = *label;
  } else if (catalog.is_empty()) {
    NormalForm cnf;
    cnf.cantor = true;
    p->label = cnf;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Products and expressions

PresPtr present_product(PresPtr a, PresPtr b) {
  auto p = std::make_shared<Presentation>();
  p->kind = Presentation::Kind::Product;
  p->stage = std::min(a->stage, b->stage);
  p->dim = a->dim + b->dim;
  p->left = a;
  p->right = b;
  p->label = product_normal_form(a->label, b->label);

  // Cells: pairs, with an id table for fast point assignment.
  std::vector<std::vector<int>> cell_id(a->cells.size(),
                                        std::vector<int>(b->cells.size()));
  for (size_t ca = 0; ca < a->cells.size(); ++ca) {
    for (size_t cb = 0; cb < b->cells.size(); ++cb) {
      PresCell cell;
      cell.id = static_cast<int>(p->cells.size());
      cell.label =
          product_normal_form(a->cells[ca].label, b->cells[cb].label);
      cell_id[ca][cb] = cell.id;
      p->cells.push_back(std::move(cell));
    }
  }

  std::vector<bool> base_a(a->points.size(), false), base_b(b->points.size(), false);
  for (int i : a->base) base_a[i] = true;
  for (int j : b->base) base_b[j] = true;

  for (size_t i = 0; i < a->points.size(); ++i) {
    for (size_t j = 0; j < b->points.size(); ++j) {
      const PresPoint& pa = a->points[i];
      const PresPoint& pb = b->points[j];
      PresPoint pt;
      pt.x = pa.x;
      pt.x.insert(pt.x.end(), pb.x.begin(), pb.x.end());
      pt.kernel = pa.kernel || pb.kernel;
      if (!pt.kernel) {
        pt.iso_rank = natural_sum(*pa.iso_rank, *pb.iso_rank);
      }
      pt.cell = cell_id[pa.cell][pb.cell];
      pt.addr = "(" + pa.addr + "|" + pb.addr + ")";
      p->points.push_back(std::move(pt));
      int id = static_cast<int>(p->points.size() - 1);
      p->cells[pt.cell].members.push_back(id);
      p->pair_index.push_back({static_cast<int>(i), static_cast<int>(j)});
      if (base_a[i] || base_b[j]) p->base.push_back(id);
    }
  }
  return p;
}

namespace {

PresPtr present_atom(const Atom& a, Nat stage) {
  switch (a.kind) {
    case Atom::Kind::Fin:
      return present_countable(ScatteredForm(Ordinal(), a.param), stage);
    case Atom::Kind::O:
      return present_countable(ScatteredForm(Ordinal::finite(a.param), 1),
                               stage);
    case Atom::Kind::Z:
      return present_K(Catalog::gamma_below(a.param), stage,
                       atom_normal_form(a));
    case Atom::Kind::X:
      return present_K(Catalog::products_over(a.index), stage,
                       atom_normal_form(a));
    case Atom::Kind::Cantor:
      return present_K(Catalog::empty(), stage);
  }
  throw std::logic_error("present_atom: unreachable");
}

}  // namespace

PresPtr present_expr(const SpaceExpr& e, Nat stage) {
  if (e.atoms.empty()) throw std::invalid_argument("present_expr: empty product");
  PresPtr acc = present_atom(e.atoms[0], stage);
  for (size_t i = 1; i < e.atoms.size(); ++i) {
    acc = present_product(acc, present_atom(e.atoms[i], stage));
  }
  return acc;
}

PresPtr present_nf(const NormalForm& nf, Nat stage) {
  SpaceExpr e;
  if (nf.cantor) {
    e.atoms.push_back({Atom::Kind::Cantor, 0, EPSet::arithmetic(1, 1, {}), 0});
    return present_expr(e, stage);
  }
  if (!nf.countable.rank_is_finite()) {
    throw std::invalid_argument("present_nf: infinite countable rank");
  }
  bool rank0 = nf.countable.rank.is_zero();
  bool need_fin = nf.countable.mult > 1 || (rank0 && nf.is_countable());
  if (need_fin) {
    e.atoms.push_back(
        {Atom::Kind::Fin, nf.countable.mult, EPSet::arithmetic(1, 1, {}), 0});
  }
  if (!rank0) {
    e.atoms.push_back({Atom::Kind::O, nf.countable.rank.finite_value(),
                       EPSet::arithmetic(1, 1, {}), 0});
  }
  for (Nat z : nf.z_atoms) {
    e.atoms.push_back({Atom::Kind::Z, z, EPSet::arithmetic(1, 1, {}), 0});
  }
  for (const EPSet& m : nf.x_atoms) {
    e.atoms.push_back({Atom::Kind::X, 0, m, 0});
  }
  return present_expr(e, stage);
}

}  // namespace zdsq
