#pragma once
// Well-formedness of types over a two-part variable context: gamma holds
// variables with no functoriality obligations, phi holds the functorial
// ones.  The two parts are disjoint.
//
// Rules enforced here:
//  - a variable application needs its head in gamma or phi at the applied
//    arity;
//  - transformer types Nat[binders](F, G) check F and G with the functorial
//    part replaced by exactly the binders (gamma passes through);
//  - a fixpoint body may use *only* the fixpoint variable and its lambda
//    parameters functorially; enclosing functorial variables are reported by
//    name as illegal there (they remain legal non-functorially via gamma);
//  - extension types Lan[as]{Ks}{F} A.. check each K with functorial part =
//    binders, F with functorial part = enclosing phi + binders, and the
//    arguments in the enclosing judgment; they require gadt mode;
//  - in base (non-gadt) mode every transformer binder must have arity 0.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nestcalc/ast.hpp"

namespace nestcalc {

struct TypeContext {
  std::vector<BinderSlot> gamma;
  std::vector<BinderSlot> phi;
};

// Ordered by priority for reporting.
struct UnknownVariable {
  std::string name;
};
struct ArityMismatch {
  std::string name;
  int declared = 0;
  int applied = 0;
};
struct IllegalFunctorialVariableInMuBody {
  std::string name;
};
struct NatBinderArityViolation {
  std::string name;
  int arity = 0;
};
struct LanDisabled {};

using KindErrorVariant =
    std::variant<UnknownVariable, ArityMismatch,
                 IllegalFunctorialVariableInMuBody, NatBinderArityViolation,
                 LanDisabled>;

struct KindError {
  KindErrorVariant error;
  Loc loc{};
};

std::string describe(const KindError& e);
// Stable machine-readable tag, e.g. "UnknownVariable".
std::string error_code(const KindError& e);

// Returns the first violation, or nullopt when the judgment holds.
std::optional<KindError> check_type(const TypePtr& t, const TypeContext& ctx,
                                    bool gadt_mode);

// Move a functorial variable into the plain context, renaming it freshly in
// the type (functoriality can always be forgotten).  Returns the adjusted
// context, the renamed type, and the fresh name.
struct Demoted {
  TypeContext ctx;
  TypePtr type;
  std::string fresh;
};
std::optional<Demoted> demote(const TypeContext& ctx, const TypePtr& t,
                              const std::string& var);

// Add an unused variable to gamma (functorial=false) or phi.
TypeContext weaken(const TypeContext& ctx, const BinderSlot& v,
                   bool functorial);

}  // namespace nestcalc
