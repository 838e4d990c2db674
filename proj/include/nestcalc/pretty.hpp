#pragma once
// Printers producing parseable surface syntax.  Bound variables are renamed
// to collision-free identifiers derived from their hints, so
// parse(pretty(x)) is alpha-equivalent to x for well-scoped input.

#include <string>

#include "nestcalc/ast.hpp"

namespace nestcalc {

std::string pretty(const TypePtr& t);
std::string pretty(const TermPtr& t);

// One-line rendering of a binder list, e.g. "a, f^1" (used in diagnostics).
std::string pretty_binders(const std::vector<BinderSlot>& slots);

}  // namespace nestcalc
