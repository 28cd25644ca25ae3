#pragma once

#include "ilcad/term.hpp"

#include <string>
#include <string_view>

namespace ilcad {

// Surface grammar, loosest first:
//
//   expr   := 'fn' ident '.' expr | sum
//   sum    := prod (('+' | '-') prod)*
//   prod   := unary (('*' | '/') unary)*
//   unary  := '-' unary | app
//   app    := head atom*
//   head   := 'coeff' nat atom | 'derive' atom | 'bundle' atom | 'diff' atom atom
//           | 'Con:' Name atom* | atom
//   atom   := ident | number | prim | 'Con:' Name | '(' expr ')'
//   prim   := 'sin' | 'cos' | 'exp' | 'log' | 'neg' | '(+)' | '(-)' | '(*)' | '(/)'
//
// `-` before a number literal gives a negative literal, otherwise `neg`.
// `derive e`, `bundle e` and `diff f x` are expanded while parsing (series
// derivation, dual bundling, first-order series derivative).
// Throws ParseError.
Term parse(std::string_view src);

// Minimal-parentheses rendering. Tagged names print as base_tag.
std::string print(const Term& t);

// Shortest decimal that reads back to the same double.
std::string format_number(double x);

}  // namespace ilcad
