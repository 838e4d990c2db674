#pragma once
// Surface-syntax lexer and parser.
//
// Grammar (-- introduces a line comment):
//
//   file       := { decl }
//   decl       := "pragma" IDENT IDENT
//               | "context" "[" [binders] [";" [binders] [";" [deltas]]] "]"
//               | "type" IDENT { binder } "=" type
//               | "term" IDENT ":" type "=" term
//   binders    := binder { "," binder }
//   binder     := IDENT [ "^" NUMBER ]
//   deltas     := IDENT ":" type { "," IDENT ":" type }
//
//   type       := prod { "+" prod }                 -- sums, left-assoc
//   prod       := app { "*" app }                   -- products, bind tighter
//   app        := head atom*                        -- exactly arity-many args
//   head       := "0" | "1" | IDENT | natform | lanform
//               | "(" "mu" ... ")" | "(" type ")"
//   natform    := "Nat" "[" [binders] "]" "(" type "," type ")"
//   muform     := "mu" IDENT "." [ "\" binders "." ] type
//   lanform    := "Lan" "[" [binders] "]" "{" type {"," type} "}" "{" type "}"
//
//   term       := "L" "[" [binders] "]" IDENT "." term
//               | "case" term "of" "{" "inl" IDENT "->" term ";"
//                                      "inr" IDENT "->" term "}"
//               | prefix
//   prefix     := ("inl"|"inr"|"fst"|"snd") prefix
//               | "absurd" "{" type "}" prefix
//               | postfix
//   postfix    := atomterm { "[" [typeargs] "]" atomterm }   -- left-assoc
//   typearg    := type | "(" "\" binders "." type ")"
//   atomterm   := IDENT | "top" | "(" term ")" | "(" term "," term ")"
//               | "map" "[" binders [";" binders] "]"
//                       "{" type "}" "{" mapcomps "}" "{" mapcomps "}"
//               | "in" "{" muform "}"
//               | "fold" "{" muform "}" "{" type "}"
//               | "kan" "[" [binders] ";" [binders] "]"
//                       "{" type {"," type} "}" "{" type "}"
//               | "cokan" "[" [binders] ";" [binders] ";" [binders] "]"
//                       "{" type "}" "{" type {"," type} "}" "{" type "}"
//                       atomterm
//   mapcomps   := mapcomp { "," mapcomp }
//   mapcomp    := type | "(" "\" binders "." type ")"
//
// Variable occurrences are eta-long: every type variable must be applied to
// exactly its declared arity's worth of juxtaposed arguments, checked during
// parsing.  `type` aliases are expanded at parse time; alias parameters of
// arity k > 0 accept only a bare in-scope variable of the same arity.
// References to earlier term declarations parse as free term variables; the
// typechecker and rewriter resolve them against the declaration environment.
// `fold`'s second brace group is parsed with the fixpoint's lambda
// parameters in scope (they name the algebra's carrier positions).

#include <string>
#include <vector>

#include "nestcalc/ast.hpp"
#include "nestcalc/util.hpp"

namespace nestcalc {

struct ParseError {
  Loc loc;
  std::string message;
};

using ParseResult = Result<ParsedFile, ParseError>;

// Parse a whole declaration file (source text; `path` only labels errors).
ParseResult parse_file(const std::string& source, const std::string& path);

// Read the file from disk, then parse it.
ParseResult parse_file_at(const std::string& path);

// Parse a single type/term in the scope of a context declaration (free
// variables must be declared there) with the given alias environment taken
// from an already-parsed file.  Used by tests and the CLI.
Result<TypePtr, ParseError> parse_type_string(
    const std::string& source, const ContextDecl& ctx = {},
    const std::vector<Decl>& decls = {});
Result<TermPtr, ParseError> parse_term_string(
    const std::string& source, const ContextDecl& ctx = {},
    const std::vector<Decl>& decls = {});

}  // namespace nestcalc
