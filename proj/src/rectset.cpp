#include "zdsq/rectset.hpp"

#include <algorithm>
#include <set>

namespace zdsq {

std::string RectAtom::to_string() const {
  if (singleton) return "{0}";
  return "P(" + std::to_string(exp) + ")";
}

bool operator<(const RectAtom& a, const RectAtom& b) {
  if (a.singleton != b.singleton) return a.singleton < b.singleton;
  return a.exp < b.exp;
}

namespace {

bool rect_less(const Rect& a, const Rect& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const RectAtom& x, const RectAtom& y) {
                                        return x < y;
                                      });
}

// Atom containment as sets: {0} <= {0}; PMult(f) <= PMult(e) iff f >= e.
bool atom_subset(const RectAtom& a, const RectAtom& b) {
  if (a.singleton) return b.singleton;
  return !b.singleton && a.exp >= b.exp;
}

bool rect_subset(const Rect& a, const Rect& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (!atom_subset(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

std::optional<Nat> atom_cardinality(const RectAtom& a, const ScatteredForm& f) {
  Nat rank = f.finite_rank();
  if (a.singleton) return 1;  // 0 lies in every nonempty factor
  if (rank == 0) {
    // Discrete factor {0, ..., mult-1}: positive multiples of w^e.
    if (a.exp > 0) return 0;
    return f.mult - 1;
  }
  if (a.exp > rank) return 0;
  if (a.exp == rank) return f.mult;  // w^rank * 1, ..., w^rank * mult
  return std::nullopt;               // infinitely many multiples
}

bool atom_empty(const RectAtom& a, const ScatteredForm& f) {
  auto c = atom_cardinality(a, f);
  return c.has_value() && *c == 0;
}

bool atom_contains(const RectAtom& a, const ScatteredForm& f,
                   const Ordinal& x) {
  if (a.singleton) return x.is_zero();
  if (x.is_zero()) return false;
  if (!x.divisible_by_omega_pow(a.exp)) return false;
  // Inside the ambient interval by assumption of the caller.
  (void)f;
  return true;
}

RectSet::RectSet(std::vector<ScatteredForm> ambient, std::vector<Rect> rects)
    : ambient_(std::move(ambient)) {
  for (const auto& f : ambient_) {
    if (!f.rank_is_finite()) {
      throw std::invalid_argument("RectSet: infinite factor rank");
    }
  }
  // Drop rectangles with an empty side, then dedupe and absorb.
  std::vector<Rect> kept;
  for (auto& r : rects) {
    if (r.size() != ambient_.size()) {
      throw std::invalid_argument("RectSet: rectangle arity mismatch");
    }
    bool empty = false;
    for (size_t i = 0; i < r.size(); ++i) {
      if (atom_empty(r[i], ambient_[i])) {
        empty = true;
        break;
      }
    }
    if (!empty) kept.push_back(std::move(r));
  }
  std::sort(kept.begin(), kept.end(), rect_less);
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  // Absorb rectangles contained in another one (strict after dedupe).
  for (size_t i = 0; i < kept.size(); ++i) {
    bool absorbed = false;
    for (size_t j = 0; j < kept.size(); ++j) {
      if (i != j && rect_subset(kept[i], kept[j])) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) rects_.push_back(kept[i]);
  }
}

RectSet RectSet::full_space(std::vector<ScatteredForm> ambient) {
  // The full interval is {0} together with all positive ordinals in it,
  // which are exactly the positive multiples of w^0.
  std::vector<Rect> rects;
  size_t d = ambient.size();
  for (Nat mask = 0; mask < (Nat(1) << d); ++mask) {
    Rect r;
    for (size_t i = 0; i < d; ++i) {
      r.push_back((mask >> i) & 1 ? RectAtom::pmult(0) : RectAtom::zero());
    }
    rects.push_back(std::move(r));
  }
  return RectSet(std::move(ambient), std::move(rects));
}

bool RectSet::contains(const OrdinalPoint& p) const {
  if (p.size() != ambient_.size()) return false;
  for (const Rect& r : rects_) {
    bool all = true;
    for (size_t i = 0; i < r.size(); ++i) {
      if (!atom_contains(r[i], ambient_[i], p[i])) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::optional<Nat> RectSet::finite_cardinality() const {
  for (const Rect& r : rects_) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (!atom_cardinality(r[i], ambient_[i]).has_value()) return std::nullopt;
    }
  }
  return static_cast<Nat>(enumerate_finite().size());
}

std::vector<OrdinalPoint> RectSet::enumerate_finite() const {
  std::set<std::vector<std::string>> seen;  // canonical keys for dedupe
  std::vector<OrdinalPoint> out;
  for (const Rect& r : rects_) {
    std::vector<std::vector<Ordinal>> sides;
    for (size_t i = 0; i < r.size(); ++i) {
      std::vector<Ordinal> pts;
      const RectAtom& a = r[i];
      const ScatteredForm& f = ambient_[i];
      if (a.singleton) {
        pts.push_back(Ordinal());
      } else if (f.finite_rank() == 0) {
        if (a.exp == 0) {
          for (Nat v = 1; v < f.mult; ++v) pts.push_back(Ordinal::finite(v));
        }
      } else if (a.exp == f.finite_rank()) {
        for (Nat c = 1; c <= f.mult; ++c) {
          pts.push_back(Ordinal::omega_pow(a.exp, c));
        }
      } else if (a.exp < f.finite_rank()) {
        throw std::domain_error("enumerate_finite: infinite rectangle side");
      }
      sides.push_back(std::move(pts));
    }
    std::vector<size_t> idx(sides.size(), 0);
    bool any_empty = false;
    for (const auto& s : sides) {
      if (s.empty()) any_empty = true;
    }
    if (any_empty) continue;
    while (true) {
      OrdinalPoint p;
      std::vector<std::string> key;
      for (size_t i = 0; i < sides.size(); ++i) {
        p.push_back(sides[i][idx[i]]);
        key.push_back(p.back().to_string());
      }
      if (seen.insert(key).second) out.push_back(std::move(p));
      size_t i = 0;
      while (i < sides.size()) {
        if (++idx[i] < sides[i].size()) break;
        idx[i] = 0;
        ++i;
      }
      if (i == sides.size()) break;
    }
  }
  return out;
}

std::string RectSet::to_string() const {
  std::string out = "{";
  for (size_t k = 0; k < rects_.size(); ++k) {
    if (k > 0) out += ", ";
    out += "(";
    for (size_t i = 0; i < rects_[k].size(); ++i) {
      if (i > 0) out += " x ";
      out += rects_[k][i].to_string();
    }
    out += ")";
  }
  return out + "}";
}

RectSet derive(const RectSet& s) {
  std::vector<Rect> out;
  for (const Rect& r : s.rects()) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (r[i].singleton) continue;  // D({0}) is empty
      Rect d = r;
      d[i] = RectAtom::pmult(r[i].exp + 1);
      out.push_back(std::move(d));
    }
  }
  return RectSet(s.ambient(), std::move(out));
}

std::vector<RectSet> derivative_stages(
    const std::vector<ScatteredForm>& space) {
  std::vector<RectSet> stages;
  RectSet cur = RectSet::full_space(space);
  while (!cur.empty()) {
    stages.push_back(cur);
    cur = derive(cur);
  }
  return stages;
}

std::pair<Ordinal, Nat> rank_and_mult(
    const std::vector<ScatteredForm>& space) {
  auto stages = derivative_stages(space);
  if (stages.empty()) {
    throw std::invalid_argument("rank_and_mult: empty space");
  }
  const RectSet& last = stages.back();
  auto card = last.finite_cardinality();
  if (!card.has_value()) {
    throw std::logic_error("rank_and_mult: final stage not finite");
  }
  return {Ordinal::finite(static_cast<Nat>(stages.size() - 1)), *card};
}

bool point_in_ambient(const OrdinalPoint& x,
                      const std::vector<ScatteredForm>& space) {
  if (x.size() != space.size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    const ScatteredForm& f = space[i];
    if (f.finite_rank() == 0) {
      if (!x[i].is_finite() || x[i].finite_value() >= f.mult) return false;
    } else {
      Ordinal top = Ordinal::omega_pow(f.finite_rank(), f.mult);
      if (compare(x[i], top) == Cmp::GT) return false;
    }
  }
  return true;
}

Ordinal point_rank(const OrdinalPoint& x,
                   const std::vector<ScatteredForm>& space) {
  if (!point_in_ambient(x, space)) {
    throw std::invalid_argument("point_rank: point outside ambient");
  }
  auto stages = derivative_stages(space);
  for (size_t n = 0; n < stages.size(); ++n) {
    if (n + 1 == stages.size() || !stages[n + 1].contains(x)) {
      return Ordinal::finite(static_cast<Nat>(n));
    }
  }
  throw std::logic_error("point_rank: unreachable");
}

}  // namespace zdsq
