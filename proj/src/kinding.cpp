#include "nestcalc/kinding.hpp"

#include <set>

#include "nestcalc/util.hpp"

namespace nestcalc {

namespace {

std::optional<int> find_arity(const std::vector<BinderSlot>& xs,
                              const std::string& name) {
  for (auto& x : xs)
    if (x.hint == name) return x.arity;
  return std::nullopt;
}

// Internal checking state: the judgment contexts plus the names that are
// functorial in some enclosing judgment but banned inside the current
// fixpoint body (for the dedicated error).
struct CheckState {
  const std::vector<BinderSlot>* gamma;
  std::vector<BinderSlot> phi;
  std::set<std::string> mu_banned;
  bool gadt;
};

// Pick names for opening a binder group: keep hints that collide with
// nothing in scope, otherwise generate fresh ones (diagnostics stay
// readable; correctness never depends on the hint).
std::vector<std::string> opening_names(const std::vector<BinderSlot>& slots,
                                       const CheckState& st) {
  std::set<std::string> taken;
  for (auto& g : *st.gamma) taken.insert(g.hint);
  for (auto& p : st.phi) taken.insert(p.hint);
  for (auto& b : st.mu_banned) taken.insert(b);
  std::vector<std::string> out;
  for (auto& s : slots) {
    std::string n = taken.count(s.hint) ? fresh_name(s.hint) : s.hint;
    taken.insert(n);
    out.push_back(n);
  }
  return out;
}

std::vector<BinderSlot> with_names(const std::vector<BinderSlot>& slots,
                                   const std::vector<std::string>& names) {
  std::vector<BinderSlot> out;
  out.reserve(slots.size());
  for (size_t i = 0; i < slots.size(); ++i)
    out.push_back({names[i], slots[i].arity});
  return out;
}

std::optional<KindError> check(const TypePtr& t, CheckState& st);

std::optional<KindError> check_all(const std::vector<TypePtr>& ts,
                                   CheckState& st) {
  for (auto& x : ts)
    if (auto e = check(x, st)) return e;
  return std::nullopt;
}

std::optional<KindError> check(const TypePtr& t, CheckState& st) {
  return std::visit(
      overloaded{
          [&](const TZero&) -> std::optional<KindError> { return std::nullopt; },
          [&](const TOne&) -> std::optional<KindError> { return std::nullopt; },
          [&](const TSum& n) -> std::optional<KindError> {
            if (auto e = check(n.lhs, st)) return e;
            return check(n.rhs, st);
          },
          [&](const TProd& n) -> std::optional<KindError> {
            if (auto e = check(n.lhs, st)) return e;
            return check(n.rhs, st);
          },
          [&](const TVar& v) -> std::optional<KindError> {
            if (v.ref)
              return KindError{UnknownVariable{"<unopened reference>"}, t->loc};
            int applied = static_cast<int>(v.args.size());
            std::optional<int> arity = find_arity(st.phi, v.name);
            if (!arity) arity = find_arity(*st.gamma, v.name);
            if (!arity) {
              if (st.mu_banned.count(v.name))
                return KindError{IllegalFunctorialVariableInMuBody{v.name},
                                 t->loc};
              return KindError{UnknownVariable{v.name}, t->loc};
            }
            if (*arity != applied)
              return KindError{ArityMismatch{v.name, *arity, applied}, t->loc};
            return check_all(v.args, st);
          },
          [&](const TNat& n) -> std::optional<KindError> {
            if (!st.gadt) {
              for (auto& b : n.binders)
                if (b.arity != 0)
                  return KindError{NatBinderArityViolation{b.hint, b.arity},
                                   t->loc};
            }
            auto names = opening_names(n.binders, st);
            // Transformer components see gamma and their own binders only;
            // the enclosing functorial variables drop out of scope.
            CheckState inner{st.gamma, with_names(n.binders, names),
                             st.mu_banned, st.gadt};
            if (auto e = check(open_type(n.source, names), inner)) return e;
            return check(open_type(n.target, names), inner);
          },
          [&](const TMu& n) -> std::optional<KindError> {
            if (n.args.size() != n.params.size())
              return KindError{
                  ArityMismatch{n.fix.hint, static_cast<int>(n.params.size()),
                                static_cast<int>(n.args.size())},
                  t->loc};
            std::vector<BinderSlot> all{n.fix};
            all.insert(all.end(), n.params.begin(), n.params.end());
            auto names = opening_names(all, st);
            CheckState inner{st.gamma, with_names(all, names), st.mu_banned,
                             st.gadt};
            for (auto& p : st.phi) inner.mu_banned.insert(p.hint);
            if (auto e = check(open_type(n.body, names), inner)) return e;
            return check_all(n.args, st);
          },
          [&](const TLan& n) -> std::optional<KindError> {
            if (!st.gadt) return KindError{LanDisabled{}, t->loc};
            for (auto& b : n.binders)
              if (b.arity != 0)
                return KindError{NatBinderArityViolation{b.hint, b.arity},
                                 t->loc};
            auto names = opening_names(n.binders, st);
            // Along-types see only the binders functorially.
            CheckState along_st{st.gamma, with_names(n.binders, names),
                                st.mu_banned, st.gadt};
            for (auto& k : n.along)
              if (auto e = check(open_type(k, names), along_st)) return e;
            // The body sees the enclosing functorial variables plus binders.
            CheckState body_st = st;
            for (size_t i = 0; i < names.size(); ++i)
              body_st.phi.push_back({names[i], n.binders[i].arity});
            if (auto e = check(open_type(n.body, names), body_st)) return e;
            return check_all(n.args, st);
          },
      },
      t->node);
}

}  // namespace

std::optional<KindError> check_type(const TypePtr& t, const TypeContext& ctx,
                                    bool gadt_mode) {
  CheckState st{&ctx.gamma, ctx.phi, {}, gadt_mode};
  return check(t, st);
}

std::string error_code(const KindError& e) {
  return std::visit(
      overloaded{
          [](const UnknownVariable&) { return std::string("UnknownVariable"); },
          [](const ArityMismatch&) { return std::string("ArityMismatch"); },
          [](const IllegalFunctorialVariableInMuBody&) {
            return std::string("IllegalFunctorialVariableInMuBody");
          },
          [](const NatBinderArityViolation&) {
            return std::string("NatBinderArityViolation");
          },
          [](const LanDisabled&) { return std::string("LanDisabled"); },
      },
      e.error);
}

std::string describe(const KindError& e) {
  return std::visit(
      overloaded{
          [](const UnknownVariable& x) {
            return "variable '" + x.name + "' is not available in this context";
          },
          [](const ArityMismatch& x) {
            return "variable '" + x.name + "' has arity " +
                   std::to_string(x.declared) + " but is applied to " +
                   std::to_string(x.applied) + " arguments";
          },
          [](const IllegalFunctorialVariableInMuBody& x) {
            return "functorial variable '" + x.name +
                   "' cannot appear in a fixpoint body (only the fixpoint "
                   "variable and its parameters may be functorial there)";
          },
          [](const NatBinderArityViolation& x) {
            return "binder '" + x.name + "' has arity " +
                   std::to_string(x.arity) +
                   ", which needs gadt mode (base-mode binders have arity 0)";
          },
          [](const LanDisabled&) {
            return std::string(
                "extension types are disabled; enable them with 'pragma gadt "
                "on'");
          },
      },
      e.error);
}

std::optional<Demoted> demote(const TypeContext& ctx, const TypePtr& t,
                              const std::string& var) {
  for (size_t i = 0; i < ctx.phi.size(); ++i) {
    if (ctx.phi[i].hint == var) {
      Demoted out;
      out.fresh = fresh_name(var);
      out.ctx.gamma = ctx.gamma;
      out.ctx.gamma.push_back({out.fresh, ctx.phi[i].arity});
      out.ctx.phi = ctx.phi;
      out.ctx.phi.erase(out.ctx.phi.begin() + static_cast<long>(i));
      out.type = replace_free_type_var(t, var, out.fresh);
      return out;
    }
  }
  return std::nullopt;
}

TypeContext weaken(const TypeContext& ctx, const BinderSlot& v,
                   bool functorial) {
  TypeContext out = ctx;
  (functorial ? out.phi : out.gamma).push_back(v);
  return out;
}

}  // namespace nestcalc
