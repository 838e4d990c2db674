#pragma once
// Term typing: bidirectional checking of fully annotated terms against
// ascribed types.
//
// The judgment has four parts: gamma (plain type variables), phi (functorial
// type variables), delta (term variables), and the term with its ascription.
// Rules enforced here:
//  - variables come from delta (which also carries earlier term declarations,
//    so references to them never need their definitions);
//  - L[binders] x. body checks against Nat[binders](F, G): inside the body
//    the functorial context becomes exactly the binders, delta keeps its
//    earlier entries and gains x : F;
//  - an application t [Ks] s requires t to type in the *empty* functorial
//    context at a Nat-type with one K per binder; each K is well-formed in
//    the ambient functorial context (plus K's own parameters for binders of
//    higher arity, which demand gadt mode) and the result instantiates the
//    Nat's components by second-order substitution;
//  - map/in/fold construct their result types from their annotations, with
//    machine-generated fresh names for the binders the rules invent; the
//    constructed types are re-checked for well-formedness, so e.g. a fold
//    whose target smuggles the fixpoint's Nat binders into a nested Nat-type
//    is rejected with the underlying kinding error;
//  - kan / cokan (the extension-type introduction and elimination forms) and
//    second-order type arguments require gadt mode.
//
// Type equality is alpha-equivalence after performing all substitutions;
// there is no other conversion at the type level.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nestcalc/ast.hpp"
#include "nestcalc/kinding.hpp"
#include "nestcalc/util.hpp"

namespace nestcalc {

// One term-typing query: in context `ctx`, does `term` have type `ascribed`?
struct TypingJudgment {
  ContextDecl ctx;
  TermPtr term;
  TypePtr ascribed;
};

// A term in head position of an application does not have a Nat-type.
struct NotANatType {
  TypePtr actual;
};
// The head of an application needed a variable that is only available in the
// ambient functorial context; heads must type with that context emptied.
struct FunctorialContextNotEmptyForApplication {
  std::string name;
};
// A binder-group length disagrees with what the construct requires (type
// arguments vs Nat binders, a second-order argument's parameters vs the
// binder's arity, map components vs mapped variables, ...).
struct BinderCountMismatch {
  std::string what;
  int expected = 0;
  int actual = 0;
};
// The algebra handed to a fold does not match the type the fold dictates.
struct AlgebraTypeMismatch {
  TypePtr expected;
  TypePtr actual;
};
// Names that must be distinct are not (context groups, delta entries).
struct FreshnessViolation {
  std::string name;
  std::string where;
};
// kan, cokan, or a second-order type argument outside gadt mode.
struct GadtConstructDisabled {
  std::string construct;
};
// Checking a term against a type it does not have.
struct TypeMismatch {
  TypePtr expected;
  TypePtr actual;
};
// A term variable that neither delta nor the binders in scope provide.
struct UnknownTermVariable {
  std::string name;
};
// A term form whose type cannot be synthesized where one is required
// (a lambda in head position, an unannotated injection, ...).
struct CannotSynthesize {
  std::string what;
};
// A type annotation embedded in the term is not well-formed.
struct IllFormedType {
  KindError inner;
};

using TypeErrorVariant =
    std::variant<NotANatType, FunctorialContextNotEmptyForApplication,
                 BinderCountMismatch, AlgebraTypeMismatch, FreshnessViolation,
                 GadtConstructDisabled, TypeMismatch, UnknownTermVariable,
                 CannotSynthesize, IllFormedType>;

struct TypeError {
  TypeErrorVariant error;
  Loc loc{};
};

// Human-readable one-line description.
std::string describe(const TypeError& e);
// Stable machine-readable tag, e.g. "NotANatType".
std::string error_code(const TypeError& e);

// Extra term-variable bindings (name, declared type) visible during a check;
// used to resolve references to earlier term declarations.
using DeclTypes = std::vector<std::pair<std::string, TypePtr>>;

// Returns the first violation, or nullopt when the judgment is derivable.
std::optional<TypeError> check_term(const TypingJudgment& j, bool gadt_mode,
                                    const DeclTypes& decls = {});

// Type of a well-formed application redex (the term must be an application);
// the result is the Nat target with the type arguments substituted in.
Result<TypePtr, TypeError> infer_redex_type(const ContextDecl& ctx,
                                            const TermPtr& app, bool gadt_mode,
                                            const DeclTypes& decls = {});

// Whole-file checking: threads context declarations and the gadt pragma,
// checks every type alias body and term declaration, and makes each checked
// term declaration visible to the later ones.
struct DeclReport {
  std::string name;
  Loc loc{};
  std::optional<TypeError> error;
};
struct FileReport {
  std::vector<DeclReport> decls;
  bool gadt_mode = false;  // value after the last pragma
  bool ok = true;          // no decl reported an error
};
FileReport check_file(const ParsedFile& f);

// Self-test: the sequence GADT encoded as a mu/Lan type, with its three
// constructors (plus curried and cokan-derived variants) checked at their
// declared types.  Returns nullopt on success, else a description.
std::optional<std::string> typecheck_seq_constructors();

}  // namespace nestcalc
