#pragma once
// Token stream for the surface syntax.

#include <string>
#include <vector>

#include "nestcalc/ast.hpp"
#include "nestcalc/parser.hpp"

namespace nestcalc {

enum class TokKind {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Dot,
  Colon,
  Equals,
  Caret,
  Plus,
  Star,
  Backslash,
  Arrow,
  End,
};

struct Token {
  TokKind kind;
  std::string text;
  Loc loc;
};

Result<std::vector<Token>, ParseError> lex(const std::string& src);

}  // namespace nestcalc
