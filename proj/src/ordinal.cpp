#include "zdsq/ordinal.hpp"

#include <algorithm>
#include <map>

namespace zdsq {

Ordinal Ordinal::finite(Nat n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({0, n});
  return o;
}

Ordinal Ordinal::omega_pow(Nat e, Nat c) {
  if (c == 0) throw std::invalid_argument("omega_pow: zero coefficient");
  Ordinal o;
  o.terms_.push_back({e, c});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  std::map<Nat, Nat> acc;
  for (const Term& t : terms) {
    if (t.coefficient == 0) continue;
    acc[t.exponent] += t.coefficient;
  }
  Ordinal o;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) {
    o.terms_.push_back({it->first, it->second});
  }
  return o;
}

Nat Ordinal::finite_value() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) throw std::domain_error("finite_value of infinite ordinal");
  return terms_[0].coefficient;
}

Nat Ordinal::least_exponent() const {
  if (terms_.empty()) throw std::domain_error("least_exponent of 0");
  return terms_.back().exponent;
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) out += "+";
    first = false;
    if (t.exponent == 0) {
      out += std::to_string(t.coefficient);
    } else if (t.exponent == 1) {
      out += "w*" + std::to_string(t.coefficient);
    } else {
      out += "w^" + std::to_string(t.exponent) + "*" +
             std::to_string(t.coefficient);
    }
  }
  return out;
}

namespace {

Nat parse_nat(const std::string& s, size_t& i) {
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
    throw std::invalid_argument("Ordinal::parse: expected digit at position " +
                                std::to_string(i));
  }
  Nat v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + static_cast<Nat>(s[i] - '0');
    ++i;
  }
  return v;
}

}  // namespace

Ordinal Ordinal::parse(const std::string& text) {
  if (text == "0") return Ordinal();
  std::vector<Term> terms;
  size_t i = 0;
  while (i < text.size()) {
    Term t;
    if (text[i] == 'w') {
      ++i;
      t.exponent = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        t.exponent = parse_nat(text, i);
      }
      if (i < text.size() && text[i] == '*') {
        ++i;
        t.coefficient = parse_nat(text, i);
      } else {
        t.coefficient = 1;
      }
    } else {
      t.exponent = 0;
      t.coefficient = parse_nat(text, i);
    }
    terms.push_back(t);
    if (i < text.size()) {
      if (text[i] != '+') {
        throw std::invalid_argument("Ordinal::parse: expected '+' at position " +
                                    std::to_string(i));
      }
      ++i;
    }
  }
  // Require canonical term order so parse is inverse to to_string.
  for (size_t k = 1; k < terms.size(); ++k) {
    if (terms[k - 1].exponent <= terms[k].exponent) {
      throw std::invalid_argument("Ordinal::parse: exponents not descending");
    }
  }
  return from_terms(std::move(terms));
}

Cmp compare(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
    if (ta[i].exponent != tb[i].exponent) {
      return ta[i].exponent < tb[i].exponent ? Cmp::LT : Cmp::GT;
    }
    if (ta[i].coefficient != tb[i].coefficient) {
      return ta[i].coefficient < tb[i].coefficient ? Cmp::LT : Cmp::GT;
    }
  }
  if (ta.size() == tb.size()) return Cmp::EQ;
  return ta.size() < tb.size() ? Cmp::LT : Cmp::GT;
}

Ordinal natural_sum(const Ordinal& a, const Ordinal& b) {
  std::vector<Ordinal::Term> terms = a.terms();
  for (const auto& t : b.terms()) terms.push_back(t);
  return Ordinal::from_terms(std::move(terms));
}

ScatteredForm::ScatteredForm(Ordinal r, Nat m) : rank(std::move(r)), mult(m) {
  if (m == 0) {
    throw std::invalid_argument("ScatteredForm: multiplicity 0 (empty space)");
  }
}

std::string ScatteredForm::to_string() const {
  if (rank.is_zero()) return "discrete(" + std::to_string(mult) + ")";
  return "w^(" + rank.to_string() + ")*" + std::to_string(mult) + "+1";
}

bool operator<(const ScatteredForm& a, const ScatteredForm& b) {
  Cmp c = compare(a.rank, b.rank);
  if (c != Cmp::EQ) return c == Cmp::LT;
  return a.mult < b.mult;
}

ScatteredForm product_form(const ScatteredForm& p, const ScatteredForm& q) {
  return ScatteredForm(natural_sum(p.rank, q.rank), p.mult * q.mult);
}

ScatteredForm sum_form(const std::vector<ScatteredForm>& parts) {
  if (parts.empty()) {
    throw std::invalid_argument("sum_form: empty union is not in the class");
  }
  Ordinal top = parts[0].rank;
  for (const auto& f : parts) {
    if (top < f.rank) top = f.rank;
  }
  Nat mult = 0;
  for (const auto& f : parts) {
    if (f.rank == top) mult += f.mult;
  }
  return ScatteredForm(top, mult);
}

}  // namespace zdsq
