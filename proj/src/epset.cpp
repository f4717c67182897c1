#include "zdsq/epset.hpp"

#include <algorithm>
#include <numeric>

namespace zdsq {

namespace {

bool tail_member(Nat n, Nat period, const std::set<Nat>& residues) {
  return residues.count(n % period) > 0;
}

}  // namespace

EPSet EPSet::make(Nat threshold, Nat period, std::set<Nat> residues,
                  std::set<Nat> exceptions) {
  if (period == 0) throw std::invalid_argument("EPSet: period 0");
  if (residues.empty()) {
    throw std::invalid_argument("EPSet: empty residue set denotes a finite set");
  }
  for (Nat r : residues) {
    if (r >= period) throw std::invalid_argument("EPSet: residue out of range");
  }
  if (threshold == 0) threshold = 1;  // 0 is never a member
  for (Nat e : exceptions) {
    if (e == 0) throw std::invalid_argument("EPSet: 0 is excluded from the class");
    if (e >= threshold) {
      throw std::invalid_argument("EPSet: exception at or above threshold");
    }
  }

  // Minimal eventual period: smallest divisor d of period such that the
  // tail indicator is d-periodic.
  Nat p_min = period;
  for (Nat d = 1; d <= period; ++d) {
    if (period % d != 0) continue;
    bool ok = true;
    for (Nat r = 0; r < period && ok; ++r) {
      if (tail_member(r, period, residues) !=
          tail_member((r + d) % period, period, residues)) {
        ok = false;
      }
    }
    if (ok) {
      p_min = d;
      break;
    }
  }
  std::set<Nat> res_min;
  for (Nat r : residues) res_min.insert(r % p_min);

  // Minimal threshold: walk down while membership agrees with the pattern.
  auto member = [&](Nat n) {
    if (n < threshold) return exceptions.count(n) > 0;
    return tail_member(n, period, residues);
  };
  Nat t_min = threshold;
  while (t_min > 1 && member(t_min - 1) == tail_member(t_min - 1, p_min, res_min)) {
    --t_min;
  }

  EPSet s;
  s.threshold_ = t_min;
  s.period_ = p_min;
  s.residues_ = std::move(res_min);
  for (Nat e = 1; e < t_min; ++e) {
    if (member(e)) s.exceptions_.insert(e);
  }
  return s;
}

EPSet EPSet::arithmetic(Nat first, Nat step, const std::vector<Nat>& extra) {
  if (step == 0) {
    throw std::invalid_argument("EPSet: step 0 gives a finite set");
  }
  if (first == 0) throw std::invalid_argument("EPSet: 0 is excluded");
  Nat t0 = first;
  for (Nat e : extra) {
    if (e == 0) throw std::invalid_argument("EPSet: 0 is excluded");
    t0 = std::max(t0, e + 1);
  }
  std::set<Nat> exceptions;
  for (Nat e : extra) {
    if (e < t0) exceptions.insert(e);
  }
  for (Nat v = first; v < t0; v += step) exceptions.insert(v);
  return make(t0, step, {first % step}, std::move(exceptions));
}

bool EPSet::contains(Nat n) const {
  if (n == 0) return false;
  if (n < threshold_) return exceptions_.count(n) > 0;
  return residues_.count(n % period_) > 0;
}

std::optional<Nat> EPSet::min_difference(const EPSet& other) const {
  Nat p = std::lcm(period_, other.period_);
  Nat bound = std::max(threshold_, other.threshold_) + p;
  for (Nat n = 1; n <= bound; ++n) {
    if (contains(n) && !other.contains(n)) return n;
  }
  return std::nullopt;
}

std::optional<Nat> EPSet::separating_element(const EPSet& other) const {
  if (auto k = min_difference(other)) return k;
  return other.min_difference(*this);
}

Nat EPSet::min_element() const {
  for (Nat n = 1; n <= threshold_ + period_; ++n) {
    if (contains(n)) return n;
  }
  throw std::logic_error("EPSet: no minimum in an infinite set");
}

bool EPSet::operator<(const EPSet& o) const {
  auto key = [](const EPSet& s) {
    return std::tuple(s.threshold_, s.period_,
                      std::vector<Nat>(s.residues_.begin(), s.residues_.end()),
                      std::vector<Nat>(s.exceptions_.begin(),
                                       s.exceptions_.end()));
  };
  return key(*this) < key(o);
}

std::string EPSet::to_string() const {
  std::string out;
  bool first = true;
  for (Nat e : exceptions_) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(e);
  }
  out += ";";
  if (residues_.size() == 1) {
    Nat r = *residues_.begin();
    Nat a = threshold_;
    while (a % period_ != r) ++a;
    out += std::to_string(a) + "+" + std::to_string(period_) + "k";
  } else {
    // Not expressible as a single progression; debug rendering.
    out += "[T=" + std::to_string(threshold_) + ",p=" + std::to_string(period_);
    out += ",R={";
    bool f = true;
    for (Nat r : residues_) {
      if (!f) out += ",";
      f = false;
      out += std::to_string(r);
    }
    out += "}]";
  }
  return out;
}

}  // namespace zdsq
