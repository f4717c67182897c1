#pragma once

// Space expressions: finite products of the atoms
//   Fin(k)   k-point discrete space, k >= 1
//   O(n)     the ordinal w^n + 1, n >= 1
//   Z(n)     the uncountable space with non-kernel ranks < n, n >= 1
//   X{M}     the compactification indexed by an infinite set M
//   Cantor   the Cantor space
// with the alias P = Z(1).

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "zdsq/epset.hpp"
#include "zdsq/ordinal.hpp"

namespace zdsq {

struct Atom {
  enum class Kind { Fin, O, Z, X, Cantor };
  Kind kind = Kind::Fin;
  Nat param = 1;   // Fin/O/Z parameter
  EPSet index = EPSet::arithmetic(1, 1, {});  // X parameter
  size_t src_pos = 0;  // offset of the atom in the source text

  std::string to_string() const;
};

struct SpaceExpr {
  std::vector<Atom> atoms;  // nonempty product

  std::string to_string() const;
};

/// Error with a position into the parsed text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, size_t pos)
      : std::runtime_error(std::move(msg)), pos_(pos) {}
  size_t position() const { return pos_; }

 private:
  size_t pos_;
};

/// Parses the grammar
///   expr := term ('*' term)* ; term := atom ('^' nat)? ;
///   atom := 'Fin(' nat ')' | 'O(' nat ')' | 'Z(' nat ')' | 'P'
///         | 'Cantor' | 'X{' set '}' | '(' expr ')' ;
///   set  := (nat (',' nat)*)? ';' nat '+' nat 'k'
/// Range violations (Fin(0), Z(0), a finite or 0-containing index set)
/// raise ParseError with the offending position.
SpaceExpr parse_expr(const std::string& text);

}  // namespace zdsq
