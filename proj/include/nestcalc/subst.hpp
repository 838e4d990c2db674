#pragma once
// Substitution for the nested-types calculus.
//
// The central operation is *second-order* substitution
//
//     H[phi :=_alphas F]
//
// which replaces every application `phi G1 .. Gk` of the functorial variable
// `phi` (arity k = |alphas|) by `F` with its designated arity-0 variables
// `alphas` replaced by the (recursively substituted) arguments.  Clause by
// clause on the structure of H:
//
//   * 0 and 1 are unchanged;
//   * an application `psi Gs` with psi /= phi keeps its head and substitutes
//     into the arguments;
//   * `phi Gs` becomes F[alphas := Gs[phi :=_alphas F]] (first-order,
//     simultaneous);
//   * sums and products are substituted componentwise;
//   * a Nat-type is returned unchanged: its components are formed over its
//     own binders only, so phi cannot occur in them;
//   * an applied fixpoint `(mu psi. \bs. H') Gs` substitutes only into the
//     arguments Gs: the body's functorial variables are exactly psi and bs,
//     so phi cannot occur in H';
//   * an applied Kan type `(Lan^as_Ks F') As` substitutes into the body F'
//     (which may use enclosing functorial variables) and the arguments As,
//     but not into the Ks, which are formed without phi in scope.
//
// All operations here work on locally closed trees whose substituted
// variables are free names, so no capture avoidance beyond fresh opening of
// binders is ever needed.

#include <string>
#include <vector>

#include "nestcalc/ast.hpp"

namespace nestcalc {

// H[phi :=_alphas f].  `phi` has arity |alphas|; the alphas are arity-0
// names designating where the arguments of each phi-application land in `f`.
// Occurrences of `phi` with a different argument count are substituted all
// the same (positions beyond |alphas| would be dropped); callers are expected
// to pass kind-correct inputs.
TypePtr subst_type(const TypePtr& h, const std::string& phi,
                   const std::vector<std::string>& alphas, const TypePtr& f);

// Simultaneous first-order substitution of arity-0 free variables:
// occurrences of names[i] (which carry no arguments) become repls[i].
// Simultaneous means the repls themselves are never re-scanned, so a name
// appearing free inside some repls[j] survives.
TypePtr subst_type_parallel(const TypePtr& t,
                            const std::vector<std::string>& names,
                            const std::vector<TypePtr>& repls);

// Left-to-right sequential first-order substitution: equivalent to folding
// subst_free_type_var over the pairs.  Coincides with subst_type_parallel
// whenever no repls[j] mentions a later names[i], which holds throughout the
// typing rules because instantiated binder names are chosen fresh.
TypePtr subst_type_sequential(const TypePtr& t,
                              const std::vector<std::string>& names,
                              const std::vector<TypePtr>& repls);

// First-order substitution applied to every type embedded in a term.
TermPtr subst_term_type(const TermPtr& t, const std::string& name,
                        const TypePtr& repl);

// Second-order substitution applied to every type embedded in a term.
TermPtr subst_term_type_second_order(const TermPtr& t, const std::string& phi,
                                     const std::vector<std::string>& alphas,
                                     const TypePtr& f);

}  // namespace nestcalc
