#include "zdsq/partition.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace zdsq {

Q CellFamily::mesh() const {
  Q best = 0;
  for (const auto& c : cells) {
    if (c.diameter > best) best = c.diameter;
  }
  return best;
}

bool CellFamily::pairwise_disjoint() const {
  std::set<int> seen;
  for (const auto& c : cells) {
    for (int id : c.members) {
      if (!seen.insert(id).second) return false;
    }
  }
  return true;
}

std::vector<int> CellFamily::support() const {
  std::set<int> all;
  for (const auto& c : cells) all.insert(c.members.begin(), c.members.end());
  return {all.begin(), all.end()};
}

namespace {

NormalForm label_of_form(const ScatteredForm& f) {
  NormalForm nf;
  nf.countable = f;
  return nf;
}

std::vector<PCell> split_node(PresPtr p, const CtblNode* node, const Q& eps);

// Cells for the slice {limit point} u {children with index > from} of a
// mult-one node: the truncation of a tail of the converging sequence, so
// its label is the node's own type.
std::vector<PCell> split_slice(PresPtr p, const CtblNode* node, Nat from,
                               const Q& eps) {
  Nat stage = p->stage;
  auto slice_ids = [&](Nat m) {
    std::vector<int> ids = {node->top_point};
    for (Nat i = m + 1; i <= stage; ++i) {
      const auto& ch = node->children[i - 1].point_ids;
      ids.insert(ids.end(), ch.begin(), ch.end());
    }
    return ids;
  };
  std::vector<int> ids = slice_ids(from);
  Q diam = p->diameter(ids);
  if (diam < eps) {
    PCell cell;
    cell.label = label_of_form(node->form);
    cell.members = std::move(ids);
    cell.diameter = diam;
    cell.provenance = "countable-split";
    cell.split = [p, node, from](const Q& e) {
      return split_slice(p, node, from, e);
    };
    return {cell};
  }
  Nat m = from + 1;
  while (m < stage && !(p->diameter(slice_ids(m)) < eps)) ++m;
  std::vector<PCell> out = split_slice(p, node, m, eps);
  for (Nat i = m; i > from; --i) {  // ascending coordinates
    auto sub = split_node(p, &node->children[i - 1], eps);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::vector<PCell> split_node(PresPtr p, const CtblNode* node, const Q& eps) {
  if (node->form.mult > 1) {
    std::vector<PCell> out;
    for (const auto& block : node->blocks) {
      auto sub = split_node(p, &block, eps);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (node->form.rank.is_zero()) {
    PCell cell;
    cell.label = label_of_form(node->form);
    cell.members = {node->top_point};
    cell.diameter = 0;
    cell.provenance = "countable-split";
    cell.split = [p, node](const Q&) { return split_node(p, node, Q(1)); };
    return {cell};
  }
  return split_slice(p, node, 0, eps);
}

// Partition of one compactification piece: the content presentation is a
// scaled isometric copy, so content cells map through the id table and
// diameters scale by sigma.
std::vector<PCell> map_piece_cells(PresPtr p, size_t piece_index,
                                   const std::vector<PCell>& content_cells) {
  const Piece& piece = p->pieces[piece_index];
  std::vector<PCell> out;
  for (const auto& cc : content_cells) {
    PCell cell;
    cell.label = cc.label;
    for (int cid : cc.members) cell.members.push_back(piece.point_ids[cid]);
    cell.diameter = cc.diameter * piece.sigma;
    cell.provenance = cc.provenance;
    auto content_split = cc.split;
    Q sigma = piece.sigma;
    cell.split = [p, piece_index, content_split, sigma](const Q& e) {
      return map_piece_cells(p, piece_index, content_split(e / sigma));
    };
    out.push_back(std::move(cell));
  }
  return out;
}

std::vector<PCell> split_piece(PresPtr p, size_t piece_index, const Q& eps) {
  const Piece& piece = p->pieces[piece_index];
  if (piece.content->kind != Presentation::Kind::Countable) {
    throw std::invalid_argument("split_piece: piece content not countable");
  }
  auto content_cells =
      split_node(piece.content, piece.content->tree.get(), eps / piece.sigma);
  return map_piece_cells(p, piece_index, content_cells);
}

PCell whole_piece_cell(PresPtr p, size_t piece_index) {
  const Piece& piece = p->pieces[piece_index];
  PCell cell;
  cell.label = piece.label;
  cell.members = piece.point_ids;
  cell.diameter = p->diameter(piece.point_ids);
  cell.provenance = "catalog-piece";
  cell.split = [p, piece_index](const Q& e) {
    return split_piece(p, piece_index, e);
  };
  return cell;
}

}  // namespace

CellFamily partition_O(const ScatteredForm& f, const Q& eps, PresPtr p) {
  if (eps <= 0) throw std::invalid_argument("partition_O: eps must be positive");
  if (p->kind != Presentation::Kind::Countable || !(p->form == f)) {
    throw std::invalid_argument(
        "partition_O: presentation does not present the given form");
  }
  CellFamily fam;
  fam.provenance = "countable-split";
  fam.cells = split_node(p, p->tree.get(), eps);
  return fam;
}

namespace {

// Kernel blocks of a compactification: base points sharing the first m
// triadic digits together with the pieces over those columns at strips
// >= j0.
std::vector<std::vector<int>> block_ids(PresPtr p, Nat m, Nat j0) {
  Nat count = Nat(1) << m;
  std::vector<std::vector<int>> out(count);
  for (Nat j = 0; j < p->base.size(); ++j) {
    out[j & (count - 1)].push_back(p->base[j]);
  }
  for (const auto& piece : p->pieces) {
    if (piece.strip >= j0) {
      auto& ids = out[piece.col & (count - 1)];
      ids.insert(ids.end(), piece.point_ids.begin(), piece.point_ids.end());
    }
  }
  return out;
}

struct BlockSpec {
  Nat m = 0;
  Nat j0 = 0;
};

std::vector<PCell> split_kernel_block(PresPtr p, const NormalForm& label,
                                      Nat m, Nat b, Nat j0, const Q& eps);

std::vector<PCell> kernel_cells(PresPtr p, const NormalForm& label,
                                const BlockSpec& spec, const Q& eps) {
  auto blocks = block_ids(p, spec.m, spec.j0);
  std::vector<PCell> out;
  for (Nat b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) continue;
    PCell cell;
    cell.label = label;
    cell.members = blocks[b];
    cell.diameter = p->diameter(blocks[b]);
    cell.provenance = "kernel-block";
    Nat m = spec.m, j0 = spec.j0;
    cell.split = [p, label, m, b, j0](const Q& e) {
      return split_kernel_block(p, label, m, b, j0, e);
    };
    out.push_back(std::move(cell));
  }
  for (size_t i = 0; i < p->pieces.size(); ++i) {
    if (p->pieces[i].strip < spec.j0) {
      auto sub = split_piece(p, i, eps);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

std::optional<BlockSpec> find_block_spec(PresPtr p, const Q& eps) {
  for (Nat m = 0; m <= p->stage; ++m) {
    for (Nat j0 = 0; j0 <= p->stage; ++j0) {
      auto blocks = block_ids(p, m, j0);
      bool ok = true;
      for (const auto& ids : blocks) {
        if (!ids.empty() && !(p->diameter(ids) < eps)) {
          ok = false;
          break;
        }
      }
      if (ok) return BlockSpec{m, j0};
    }
  }
  return std::nullopt;
}

std::vector<PCell> split_kernel_block(PresPtr p, const NormalForm& label,
                                      Nat m, Nat b, Nat j0, const Q& eps) {
  for (Nat m2 = m; m2 <= p->stage; ++m2) {
    for (Nat j2 = j0; j2 <= p->stage; ++j2) {
      auto blocks = block_ids(p, m2, j2);
      bool ok = true;
      std::vector<Nat> mine;
      for (Nat b2 = 0; b2 < blocks.size(); ++b2) {
        if ((b2 & ((Nat(1) << m) - 1)) != b) continue;
        if (blocks[b2].empty()) continue;
        mine.push_back(b2);
        if (!(p->diameter(blocks[b2]) < eps)) ok = false;
      }
      if (!ok) continue;
      std::vector<PCell> out;
      for (Nat b2 : mine) {
        PCell cell;
        cell.label = label;
        cell.members = blocks[b2];
        cell.diameter = p->diameter(blocks[b2]);
        cell.provenance = "kernel-block";
        cell.split = [p, label, m2, b2, j2](const Q& e) {
          return split_kernel_block(p, label, m2, b2, j2, e);
        };
        out.push_back(std::move(cell));
      }
      for (size_t i = 0; i < p->pieces.size(); ++i) {
        const Piece& piece = p->pieces[i];
        if (piece.strip >= j0 && piece.strip < j2 &&
            (piece.col & ((Nat(1) << m) - 1)) == b) {
          auto sub = split_piece(p, i, eps);
          out.insert(out.end(), sub.begin(), sub.end());
        }
      }
      return out;
    }
  }
  throw StageTooCoarse("kernel block cannot be split to the requested mesh");
}

}  // namespace

CellFamily partition_Z(Nat n, const Q& eps, PresPtr p) {
  if (eps <= 0) throw std::invalid_argument("partition_Z: eps must be positive");
  if (p->kind != Presentation::Kind::Compactification ||
      p->label.z_atoms != std::vector<Nat>{n} || p->label.cantor ||
      !p->label.x_atoms.empty()) {
    throw std::invalid_argument("partition_Z: presentation does not present Z(" +
                                std::to_string(n) + ")");
  }
  if (eps <= q_pow3_neg(p->stage)) {
    throw StageTooCoarse(
        "partition_Z: eps at or below the base resolution 3^-" +
        std::to_string(p->stage));
  }
  auto spec = find_block_spec(p, eps);
  if (!spec.has_value()) {
    throw StageTooCoarse("partition_Z: no block decomposition fits the mesh");
  }
  CellFamily fam;
  fam.provenance = "kernel-split";
  fam.cells = kernel_cells(p, p->label, *spec, eps);
  return fam;
}

namespace {

std::vector<PCell> product_cells(PresPtr p, const std::vector<PCell>& ls,
                                 const std::vector<PCell>& rs) {
  size_t rn = p->right->points.size();
  std::vector<PCell> out;
  for (const auto& a : ls) {
    for (const auto& b : rs) {
      PCell cell;
      cell.label = product_normal_form(a.label, b.label);
      for (int i : a.members) {
        for (int j : b.members) {
          cell.members.push_back(static_cast<int>(i * rn + j));
        }
      }
      cell.diameter = std::max(a.diameter, b.diameter);
      cell.provenance = "member-product";
      PCell sa = a;
      PCell sb = b;
      cell.split = [p, sa, sb](const Q& e) {
        std::vector<PCell> la =
            sa.diameter < e ? std::vector<PCell>{sa} : sa.split(e);
        std::vector<PCell> lb =
            sb.diameter < e ? std::vector<PCell>{sb} : sb.split(e);
        return product_cells(p, la, lb);
      };
      out.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<PCell> member_cells(PresPtr p, const Q& eps) {
  switch (p->kind) {
    case Presentation::Kind::Countable:
      return split_node(p, p->tree.get(), eps);
    case Presentation::Kind::Compactification: {
      if (p->label.cantor || p->label.z_atoms.size() != 1) {
        throw std::invalid_argument(
            "partition_member: factor outside the product catalog");
      }
      return partition_Z(p->label.z_atoms[0], eps, p).cells;
    }
    case Presentation::Kind::Product:
      return product_cells(p, member_cells(p->left, eps),
                           member_cells(p->right, eps));
  }
  throw std::logic_error("member_cells: unreachable");
}

}  // namespace

CellFamily partition_member(const NormalForm& s, const Q& eps, PresPtr p) {
  if (eps <= 0) {
    throw std::invalid_argument("partition_member: eps must be positive");
  }
  if (!s.x_atoms.empty() || s.cantor) {
    throw std::invalid_argument(
        "partition_member: label outside the product catalog");
  }
  if (!(p->label == s)) {
    throw std::invalid_argument("partition_member: presentation label mismatch");
  }
  CellFamily fam;
  fam.provenance = "member-product";
  fam.cells = member_cells(p, eps);
  return fam;
}

CellFamily refine_null(const CellFamily& family, PresPtr /*p*/) {
  CellFamily out;
  out.provenance = family.provenance + "/refined";
  Nat n = 0;
  for (const auto& cell : family.cells) {
    Q target = q_pow2_neg(n);
    if (cell.diameter < target) {
      out.cells.push_back(cell);
    } else {
      if (!cell.split) {
        throw std::invalid_argument("refine_null: cell has no splitter");
      }
      auto sub = cell.split(target);
      out.cells.insert(out.cells.end(), sub.begin(), sub.end());
    }
    ++n;
  }
  return out;
}

CellFamily partition_countable_open(PresPtr p, const std::vector<int>& region,
                                    Nat alpha) {
  std::set<int> rset(region.begin(), region.end());
  if (!rset.empty() && alpha == 0) {
    throw std::invalid_argument(
        "partition_countable_open: nonempty region with alpha = 0");
  }
  for (int id : region) {
    const auto& pt = p->points[id];
    if (pt.kernel || !pt.iso_rank.has_value() ||
        !(compare(*pt.iso_rank, Ordinal::finite(alpha)) == Cmp::LT)) {
      throw std::invalid_argument(
          "partition_countable_open: region point of rank >= alpha");
    }
  }
  std::deque<PCell> queue;
  size_t covered = 0;
  for (size_t i = 0; i < p->pieces.size(); ++i) {
    const auto& ids = p->pieces[i].point_ids;
    size_t inside = 0;
    for (int id : ids) inside += rset.count(id);
    if (inside == 0) continue;
    if (inside != ids.size()) {
      throw std::invalid_argument(
          "partition_countable_open: region cuts a catalog piece");
    }
    covered += inside;
    queue.push_back(whole_piece_cell(p, i));
  }
  if (covered != rset.size()) {
    throw std::invalid_argument(
        "partition_countable_open: region has points outside catalog pieces");
  }
  CellFamily out;
  out.provenance = "countable-open";
  Nat n = 0;
  while (!queue.empty()) {
    PCell cell = queue.front();
    queue.pop_front();
    Q target = q_pow2_neg(n);
    if (cell.diameter < target) {
      out.cells.push_back(std::move(cell));
      ++n;
    } else {
      auto sub = cell.split(target);
      for (auto it = sub.rbegin(); it != sub.rend(); ++it) {
        queue.push_front(std::move(*it));
      }
    }
  }
  return out;
}

namespace {

Nat floor_log2(Nat x) {
  Nat l = 0;
  while ((Nat(1) << (l + 1)) <= x) ++l;
  return l;
}

}  // namespace

AllRanksResult partition_all_ranks(PresPtr p, Nat alpha) {
  if (p->kind != Presentation::Kind::Compactification) {
    throw std::invalid_argument("partition_all_ranks: not a compactification");
  }
  if (p->stage < alpha + 2) {
    throw std::invalid_argument("partition_all_ranks: stage below alpha + 2");
  }
  AllRanksResult res;
  res.family.provenance = "all-ranks";
  if (alpha == 0) {
    if (!p->non_kernel_points().empty()) {
      throw std::invalid_argument(
          "partition_all_ranks: alpha = 0 needs a perfect presentation");
    }
    return res;  // the empty family works
  }

  for (const auto& piece : p->pieces) {
    for (int id : piece.point_ids) {
      if (p->points[id].kernel) {
        throw std::invalid_argument(
            "partition_all_ranks: piece with uncountable content");
      }
    }
  }
  std::vector<bool> used(p->pieces.size(), false);
  auto rank_of = [&](size_t i) {
    const Ordinal& r = p->pieces[i].label.countable.rank;
    return r.is_zero() ? Nat(0) : r.finite_value();
  };

  int fail_clause = 0;
  Nat level = 0;
  std::vector<std::vector<size_t>> chosen_per_level;
  while (true) {
    Nat beta = [&] {
      Nat v = 0, x = level + 1;
      while ((x & 1) == 0) {
        ++v;
        x >>= 1;
      }
      return v % alpha;
    }();
    std::vector<size_t> avail;
    for (size_t i = 0; i < p->pieces.size(); ++i) {
      if (!used[i] && rank_of(i) == beta) avail.push_back(i);
    }
    if (avail.empty()) {
      fail_clause = 3;  // no candidate of the target rank at all
      break;
    }
    NetLevel lv;
    lv.n = level;
    lv.beta = beta;
    lv.eps = schedule_eps(level);
    lv.net_level = std::min({level, p->stage, floor_log2(avail.size())});
    Nat net_count = Nat(1) << lv.net_level;
    for (Nat j = 0; j < net_count; ++j) lv.net_points.push_back(p->base[j]);
    lv.covering_radius = 0;
    for (int b : p->base) {
      Q d = p->dist_to_set(b, lv.net_points);
      if (d > lv.covering_radius) lv.covering_radius = d;
    }
    if (!(lv.covering_radius < lv.eps)) {
      fail_clause = 6;  // the stage cannot supply an eps_n-net
      break;
    }
    bool level_ok = true;
    std::vector<size_t> picked;
    for (int z : lv.net_points) {
      int best = -1;
      Q best_d = 0;
      for (size_t i : avail) {
        if (used[i]) continue;
        bool taken = false;
        for (size_t t : picked) taken = taken || t == i;
        if (taken) continue;
        Q d = p->dist_to_set(z, p->pieces[i].point_ids);
        if (best < 0 || d < best_d) {
          best = static_cast<int>(i);
          best_d = d;
        }
      }
      if (best < 0) {
        fail_clause = 3;
        level_ok = false;
        break;
      }
      Q diam = p->diameter(p->pieces[best].point_ids);
      Q depth = p->depth(p->pieces[best].point_ids);
      if (!(best_d < lv.eps)) {
        fail_clause = 6;
        level_ok = false;
        break;
      }
      if (!(diam < lv.eps)) {
        fail_clause = 4;
        level_ok = false;
        break;
      }
      if (!(depth < lv.eps)) {
        fail_clause = 5;
        level_ok = false;
        break;
      }
      picked.push_back(static_cast<size_t>(best));
      if (best_d > lv.max_dist_to_net) lv.max_dist_to_net = best_d;
      if (diam > lv.max_diameter) lv.max_diameter = diam;
      if (depth > lv.max_dist_to_kernel) lv.max_dist_to_kernel = depth;
    }
    if (!level_ok) break;
    for (size_t i : picked) used[i] = true;
    lv.piece_indices = picked;
    chosen_per_level.push_back(picked);
    res.nets.levels.push_back(std::move(lv));
    ++level;
  }
  res.levels_built = level;

  std::vector<bool> realized(alpha, false);
  for (const auto& lv : res.nets.levels) realized[lv.beta] = true;
  for (Nat b = 0; b < alpha; ++b) {
    if (!realized[b]) {
      throw PartitionConditionError(
          level, fail_clause,
          "partition_all_ranks: rank " + std::to_string(b) +
              " not realizable at this stage (condition (" +
              std::to_string(fail_clause) + ") fails at level " +
              std::to_string(level) + ")");
    }
  }

  for (size_t l = 0; l < chosen_per_level.size(); ++l) {
    for (size_t i : chosen_per_level[l]) {
      PCell cell = whole_piece_cell(p, i);
      cell.provenance = "rank-level-" + std::to_string(l);
      res.family.cells.push_back(std::move(cell));
    }
  }
  std::vector<int> leftover;
  for (size_t i = 0; i < p->pieces.size(); ++i) {
    if (!used[i]) {
      leftover.insert(leftover.end(), p->pieces[i].point_ids.begin(),
                      p->pieces[i].point_ids.end());
    }
  }
  CellFamily rest = partition_countable_open(p, leftover, alpha);
  res.family.cells.insert(res.family.cells.end(), rest.cells.begin(),
                          rest.cells.end());

  res.coverage_bounds.assign(alpha, Q(0));
  for (Nat b = 0; b < alpha; ++b) {
    const NetLevel* strongest = nullptr;
    for (const auto& lv : res.nets.levels) {
      if (lv.beta == b) strongest = &lv;
    }
    Q worst = 0;
    for (int z : strongest->net_points) {
      Q best = -1;
      for (const auto& cell : res.family.cells) {
        if (!(cell.label ==
              label_of_form(ScatteredForm(Ordinal::finite(b), 1)))) {
          continue;
        }
        Q d = p->dist_to_set(z, cell.members);
        if (best < 0 || d < best) best = d;
      }
      if (best > worst) worst = best;
    }
    res.coverage_bounds[b] = worst;
  }
  return res;
}

}  // namespace zdsq
