#include "zdsq/expr.hpp"

#include <cctype>

namespace zdsq {

std::string Atom::to_string() const {
  switch (kind) {
    case Kind::Fin:
      return "Fin(" + std::to_string(param) + ")";
    case Kind::O:
      return "O(" + std::to_string(param) + ")";
    case Kind::Z:
      return "Z(" + std::to_string(param) + ")";
    case Kind::X:
      return "X{" + index.to_string() + "}";
    case Kind::Cantor:
      return "Cantor";
  }
  return "?";
}

std::string SpaceExpr::to_string() const {
  std::string out;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += "*";
    out += atoms[i].to_string();
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  SpaceExpr parse() {
    skip_ws();
    SpaceExpr e = expr();
    skip_ws();
    if (i_ < s_.size()) fail("unexpected trailing input");
    if (e.atoms.empty()) fail("empty product");
    return e;
  }

 private:
  SpaceExpr expr() {
    SpaceExpr e;
    term(e);
    skip_ws();
    while (i_ < s_.size() && s_[i_] == '*') {
      ++i_;
      skip_ws();
      term(e);
      skip_ws();
    }
    return e;
  }

  void term(SpaceExpr& e) {
    size_t before = e.atoms.size();
    atom(e);
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '^') {
      size_t pos = i_;
      ++i_;
      skip_ws();
      Nat p = nat();
      if (p == 0) fail_at("power 0 gives the empty product", pos);
      std::vector<Atom> base(e.atoms.begin() + before, e.atoms.end());
      for (Nat k = 1; k < p; ++k) {
        for (const Atom& a : base) e.atoms.push_back(a);
      }
    }
  }

  void atom(SpaceExpr& e) {
    skip_ws();
    size_t pos = i_;
    if (eat("Fin(")) {
      Nat k = nat();
      expect(')');
      if (k == 0) fail_at("Fin(0) is the empty space", pos);
      e.atoms.push_back({Atom::Kind::Fin, k, EPSet::arithmetic(1, 1, {}), pos});
    } else if (eat("O(")) {
      Nat n = nat();
      expect(')');
      if (n == 0) fail_at("O(0) is not in the catalog; use Fin for finite spaces", pos);
      e.atoms.push_back({Atom::Kind::O, n, EPSet::arithmetic(1, 1, {}), pos});
    } else if (eat("Z(")) {
      Nat n = nat();
      expect(')');
      if (n == 0) fail_at("Z is indexed by positive naturals", pos);
      e.atoms.push_back({Atom::Kind::Z, n, EPSet::arithmetic(1, 1, {}), pos});
    } else if (eat("X{")) {
      EPSet m = index_set();
      expect('}');
      e.atoms.push_back({Atom::Kind::X, 0, m, pos});
    } else if (eat("Cantor")) {
      e.atoms.push_back({Atom::Kind::Cantor, 0, EPSet::arithmetic(1, 1, {}), pos});
    } else if (eat("P")) {
      e.atoms.push_back({Atom::Kind::Z, 1, EPSet::arithmetic(1, 1, {}), pos});
    } else if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      SpaceExpr inner = expr();
      expect(')');
      for (const Atom& a : inner.atoms) e.atoms.push_back(a);
    } else {
      fail("expected an atom");
    }
  }

  EPSet index_set() {
    size_t pos = i_;
    std::vector<Nat> listed;
    skip_ws();
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      listed.push_back(nat());
      skip_ws();
      if (i_ < s_.size() && s_[i_] == ',') {
        ++i_;
        skip_ws();
      } else {
        break;
      }
    }
    Nat first = 0;
    if (i_ < s_.size() && s_[i_] == '+' && !listed.empty()) {
      // Shorthand without ';': the last listed number starts the
      // progression, as in X{2+2k}.
      first = listed.back();
      listed.pop_back();
    } else {
      expect(';');
      skip_ws();
      first = nat();
    }
    expect('+');
    Nat step = nat();
    expect('k');
    try {
      return EPSet::arithmetic(first, step, listed);
    } catch (const std::invalid_argument& err) {
      fail_at(err.what(), pos);
    }
    return EPSet::arithmetic(1, 1, {});  // unreachable
  }

  Nat nat() {
    skip_ws();
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      fail("expected a number");
    }
    Nat v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = v * 10 + static_cast<Nat>(s_[i_] - '0');
      ++i_;
    }
    return v;
  }

  bool eat(const char* lit) {
    size_t n = std::string(lit).size();
    if (s_.compare(i_, n, lit) == 0) {
      i_ += n;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++i_;
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      ++i_;
    }
  }

  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, i_); }
  [[noreturn]] void fail_at(const std::string& msg, size_t pos) {
    throw ParseError(msg + " (at position " + std::to_string(pos) + ")", pos);
  }

  const std::string& s_;
  size_t i_ = 0;
};

}  // namespace

SpaceExpr parse_expr(const std::string& text) { return Parser(text).parse(); }

}  // namespace zdsq
