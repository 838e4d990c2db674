#pragma once
// Equational rewriting: a deterministic small-step normalizer for well-typed
// terms, plus a three-way equation checker built on it.
//
// Strategy.  Leftmost-innermost call-by-value: a redex fires only after its
// subterms (in evaluation position) are normal, and reduction never goes
// under an L-binder or into an unselected case branch.  One exception: case
// selects its branch as soon as the scrutinee's head constructor is visible,
// and the payload finishes reducing inside the branch -- a literal injection
// in scrutinee position cannot be re-typed by synthesis, so such a state is
// confined to the single step that created it.  Every step rewrites exactly
// one redex and costs one unit of fuel.  The rules, by trace name:
//
//   beta       (L[as] x. b) [Ks] v      -->  b[as := Ks][x := v]
//              also fires when the head is a name declared as a lambda: the
//              unfolding and the application collapse into one step
//   delta      f  -->  def f    (a name whose definition is not a lambda
//              unfolds wherever reduction reaches it, argument position
//              included; lambda-valued names reduce only via beta above)
//   case-inl   case (inl v) of {..}     -->  left branch with v
//   case-inr   case (inr v) of {..}     -->  right branch with v
//   fst / snd  projections of a pair value
//   fold-in    (fold{mu}{T} [] alg) [Ks] (in{mu} [Ks] w)
//                --> alg [Ks] (structural map of the eta-expanded fold over w)
//   map-id     applied map whose shape type never mentions a mapped variable
//                --> its argument unchanged
//   map-sum-inl / map-sum-inr / map-prod
//              applied map pushed through the shape's sum or product
//   map-fvar   applied map at a mapped-variable position: the component is
//              applied at the instantiated arguments; when the variable's
//              arguments themselves mention mapped variables, the component
//              result is further mapped over the target component's shape.
//              Anonymous components (the machine-built ones) are projected
//              out of the tuple and beta-applied within the same step
//   map-mu-in  applied map at a fixpoint shape meets an in-value: the in
//              moves outside (with its instances rewritten to the target
//              side) and the map recurses at the unrolled composite shape
//   cokan-kan  (cokan{..} b) [Cs] (kan{..} [Es] w)  -->  b [Es] w
//   eta        L[as] x. h [as] x  -->  h   (root only; h mentions neither)
//
// Applied maps whose shape is an extension (Lan) type do not reduce: a mapped
// extension element would need a non-identity comparison leg, which the term
// syntax cannot represent.  Such applications are normal forms here; the
// finite-model semantics interprets them instead.  The beta/delta split is
// what keeps every reachable state typecheckable: ascription-based checking
// cannot synthesize an anonymous lambda in head position, so the machine
// never exposes one -- declared lambdas apply in a single step, and the
// components it builds itself are applied administratively.
//
// Equation checking normalizes both sides and compares up to alpha; failing
// that, a transformer equation is probed extensionally by instantiating the
// binders with the option's probe types and enumerating every closed value of
// the instantiated source up to the mu-depth bound.  Verdicts: `distinct`
// reports a concrete witness; `equal` means either the normal forms coincide
// or every probed instance was covered completely and agreed, so it is a
// claim about the probed instances only; anything weaker is `inconclusive`
// (with the sampled agreement noted).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nestcalc/ast.hpp"
#include "nestcalc/typecheck.hpp"
#include "nestcalc/util.hpp"

namespace nestcalc {

// A term declaration's ascribed type and definition, keyed by name; later
// entries may reference earlier ones.  Built from an already-checked file.
struct Definition {
  TypePtr type;
  TermPtr term;
};
using DefEnv = std::vector<std::pair<std::string, Definition>>;

DefEnv build_def_env(const ParsedFile& file);
// The (name, type) projection, as the typechecker consumes it.
DeclTypes decl_types(const DefEnv& env);

// One reduction, with whole-term snapshots so each step can be re-checked.
// `path` locates the redex from the root: segments /head /arg /scrutinee
// /inl /inr /pair.l /pair.r /proj /absurd /cokan.body; "/" is the root.
struct RewriteStep {
  std::string rule;
  std::string path;
  TermPtr before;
  TermPtr after;
};
struct RewriteTrace {
  std::vector<RewriteStep> steps;
  int fuel_used = 0;
};

// The fuel budget ran out; `partial` is the term reached after `fuel` steps.
struct FuelExhausted {
  int fuel = 0;
  TermPtr partial;
};
// An input to the equation checker failed to typecheck.
struct IllTypedInput {
  std::string which;  // "left" | "right"
  TypeError inner;
};
using RewriteError = std::variant<FuelExhausted, IllTypedInput>;

std::string describe(const RewriteError& e);

// Reduce to normal form (at most `fuel` steps).  The term is assumed
// well-typed; reduction preserves the ascribed type step by step.
Result<TermPtr, RewriteError> normalize(const TermPtr& term, const DefEnv& env,
                                        int fuel,
                                        RewriteTrace* trace = nullptr);

// All closed values of a closed type, counting one unit of `mu_depth` per
// in-constructor.  `complete` is true only when the list provably exhausts
// the type: a fixpoint cut off by the depth bound, a truncation at
// `max_count`, or an unsupported connective (Nat, Lan, a free variable)
// each clear it.
struct ValueEnumeration {
  std::vector<TermPtr> values;
  bool complete = true;
};
ValueEnumeration enumerate_values(const TypePtr& type, int mu_depth,
                                  std::size_t max_count = 512);

enum class Verdict { Equal, Distinct, Inconclusive };

struct EquationOptions {
  std::vector<TypePtr> probe_types;  // instantiations for arity-0 Nat binders
  int mu_depth = 3;                  // value-enumeration depth per instance
  int fuel = 100000;                 // per normalization
  std::size_t max_values = 512;      // enumeration cap per instance
  std::size_t max_instances = 64;    // cap on probe-type tuples
  bool gadt = false;                 // mode for the entry typecheck
};

struct EquationReport {
  Verdict verdict = Verdict::Inconclusive;
  std::string method;  // how the verdict was reached
  std::string detail;  // witness for distinct, coverage notes otherwise
};

// Decide `lhs = rhs : type` in `ctx` (see the header comment for the exact
// claim each verdict makes).  Both sides are typechecked first.
Result<EquationReport, RewriteError> check_equation(
    const ContextDecl& ctx, const TermPtr& lhs, const TermPtr& rhs,
    const TypePtr& type, const DefEnv& env, const EquationOptions& opts);

}  // namespace nestcalc
