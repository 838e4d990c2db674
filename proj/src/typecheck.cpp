// Bidirectional checking: synthesis drives application heads and the
// structural destructors, checking drives lambdas, injections, pairs, and
// case branches.  Every type a rule invents is rebuilt with machine-fresh
// binder names and re-validated for well-formedness, so kinding violations
// surface no matter how deep the annotation that caused them sits.
#include "nestcalc/typecheck.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nestcalc/parser.hpp"
#include "nestcalc/pretty.hpp"
#include "nestcalc/subst.hpp"

namespace nestcalc {

namespace {

// Internal control flow only; converted to a returned TypeError at the API
// boundary.
struct TErr {
  TypeError err;
};

[[noreturn]] void raise(TypeErrorVariant v, Loc loc) {
  throw TErr{TypeError{std::move(v), loc}};
}

std::vector<std::string> fresh_names(const std::vector<BinderSlot>& slots) {
  std::vector<std::string> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(fresh_name(s.hint));
  return out;
}

std::vector<BinderSlot> with_names(const std::vector<BinderSlot>& slots,
                                   const std::vector<std::string>& names) {
  std::vector<BinderSlot> out = slots;
  for (size_t i = 0; i < out.size(); ++i) out[i].hint = names[i];
  return out;
}

std::vector<std::string> cat(std::vector<std::string> a,
                             const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<BinderSlot> cat_slots(std::vector<BinderSlot> a,
                                  const std::vector<BinderSlot>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void check_distinct(const std::vector<BinderSlot>& slots,
                    const std::string& where, Loc loc) {
  for (size_t i = 0; i < slots.size(); ++i)
    for (size_t j = i + 1; j < slots.size(); ++j)
      if (slots[i].hint == slots[j].hint)
        raise(FreshnessViolation{slots[i].hint, where}, loc);
}

// Context hygiene and well-formedness of the declared term-variable types.
void validate_context(const ContextDecl& ctx, bool gadt_mode) {
  check_distinct(cat_slots(ctx.gamma, ctx.phi), "the type context", ctx.loc);
  for (size_t i = 0; i < ctx.delta.size(); ++i)
    for (size_t j = i + 1; j < ctx.delta.size(); ++j)
      if (ctx.delta[i].first == ctx.delta[j].first)
        raise(FreshnessViolation{ctx.delta[i].first, "the term context"},
              ctx.loc);
  TypeContext kc{ctx.gamma, ctx.phi};
  for (auto& [name, type] : ctx.delta)
    if (auto ke = check_type(type, kc, gadt_mode))
      raise(IllFormedType{*ke}, ctx.loc);
}

class Checker {
 public:
  Checker(const ContextDecl& ctx, bool gadt_mode, const DeclTypes& decls)
      : gamma_(ctx.gamma), phi_(ctx.phi), gadt_(gadt_mode) {
    // Earlier declarations sit below the context's own bindings, matching
    // the shadowing order the parser resolves names with.
    for (auto& [n, t] : decls) delta_.emplace_back(n, t);
    for (auto& [n, t] : ctx.delta) delta_.emplace_back(n, t);
  }

  void kind_here(const TypePtr& t, Loc loc) {
    if (auto ke = check_type(t, TypeContext{gamma_, phi_}, gadt_))
      raise(IllFormedType{*ke}, loc);
  }

  // --- checking mode ---
  void check(const TermPtr& e, const TypePtr& want) {
    if (auto* lam = std::get_if<ELam>(&e->node)) {
      check_lam(*lam, want, e->loc);
      return;
    }
    if (auto* il = std::get_if<EInl>(&e->node)) {
      auto* s = std::get_if<TSum>(&want->node);
      if (!s) raise(TypeMismatch{want, nullptr}, e->loc);
      check(il->body, s->lhs);
      return;
    }
    if (auto* ir = std::get_if<EInr>(&e->node)) {
      auto* s = std::get_if<TSum>(&want->node);
      if (!s) raise(TypeMismatch{want, nullptr}, e->loc);
      check(ir->body, s->rhs);
      return;
    }
    if (auto* p = std::get_if<EPair>(&e->node)) {
      auto* pr = std::get_if<TProd>(&want->node);
      if (!pr) raise(TypeMismatch{want, nullptr}, e->loc);
      check(p->lhs, pr->lhs);
      check(p->rhs, pr->rhs);
      return;
    }
    if (auto* c = std::get_if<ECase>(&e->node)) {
      auto [lhs, rhs] = scrutinee_sum(*c, e->loc);
      check_branch(c->left, c->hint_l, lhs, want);
      check_branch(c->right, c->hint_r, rhs, want);
      return;
    }
    TypePtr got = synth(e);
    if (!alpha_eq(got, want)) raise(TypeMismatch{want, got}, e->loc);
  }

  // --- synthesis mode ---
  TypePtr synth(const TermPtr& e) {
    return std::visit(
        overloaded{
            [&](const EVar& v) -> TypePtr {
              if (v.ref)
                raise(UnknownTermVariable{v.name}, e->loc);
              for (auto it = delta_.rbegin(); it != delta_.rend(); ++it)
                if (it->first == v.name) return it->second;
              raise(UnknownTermVariable{v.name}, e->loc);
            },
            [&](const ETop&) -> TypePtr { return t_one(); },
            [&](const EAbsurd& a) -> TypePtr {
              kind_here(a.annot, e->loc);
              check(a.body, t_zero());
              return a.annot;
            },
            [&](const EInl&) -> TypePtr {
              raise(CannotSynthesize{
                        "an injection's sum type is not written in the term; "
                        "check it against an ascribed type"},
                    e->loc);
            },
            [&](const EInr&) -> TypePtr {
              raise(CannotSynthesize{
                        "an injection's sum type is not written in the term; "
                        "check it against an ascribed type"},
                    e->loc);
            },
            [&](const ECase& c) -> TypePtr {
              auto [lhs, rhs] = scrutinee_sum(c, e->loc);
              TypePtr lt = synth_branch(c.left, c.hint_l, lhs);
              TypePtr rt = synth_branch(c.right, c.hint_r, rhs);
              if (!alpha_eq(lt, rt)) raise(TypeMismatch{lt, rt}, e->loc);
              return lt;
            },
            [&](const EPair& p) -> TypePtr {
              return t_prod(synth(p.lhs), synth(p.rhs));
            },
            [&](const EProj1& p) -> TypePtr {
              return project(p.body, e->loc).first;
            },
            [&](const EProj2& p) -> TypePtr {
              return project(p.body, e->loc).second;
            },
            [&](const ELam&) -> TypePtr {
              raise(CannotSynthesize{
                        "a lambda's component types are not written in the "
                        "term; ascribe it or bind it with a term declaration"},
                    e->loc);
            },
            [&](const EApp& a) -> TypePtr { return synth_app(a, e->loc); },
            [&](const EMap& m) -> TypePtr { return synth_map(m, e->loc); },
            [&](const EIn& i) -> TypePtr { return synth_in(i, e->loc); },
            [&](const EFold& f) -> TypePtr { return synth_fold(f, e->loc); },
            [&](const EKanIntro& k) -> TypePtr {
              return synth_kan(k, e->loc);
            },
            [&](const EKanElim& k) -> TypePtr {
              return synth_cokan(k, e->loc);
            },
        },
        e->node);
  }

 private:
  std::vector<BinderSlot> gamma_;
  std::vector<BinderSlot> phi_;
  std::vector<std::pair<std::string, TypePtr>> delta_;
  bool gadt_;

  std::pair<TypePtr, TypePtr> scrutinee_sum(const ECase& c, Loc loc) {
    TypePtr st = synth(c.scrutinee);
    auto* s = std::get_if<TSum>(&st->node);
    if (!s)
      raise(CannotSynthesize{"the scrutinee of a case must have a sum type; "
                             "it has " +
                             pretty(st)},
            loc);
    return {s->lhs, s->rhs};
  }

  void check_branch(const TermPtr& body, const std::string& hint,
                    const TypePtr& var_ty, const TypePtr& want) {
    std::string x = fresh_name(hint);
    delta_.emplace_back(x, var_ty);
    check(open_term_var(body, x), want);
    delta_.pop_back();
  }

  TypePtr synth_branch(const TermPtr& body, const std::string& hint,
                       const TypePtr& var_ty) {
    std::string x = fresh_name(hint);
    delta_.emplace_back(x, var_ty);
    TypePtr t = synth(open_term_var(body, x));
    delta_.pop_back();
    return t;
  }

  std::pair<TypePtr, TypePtr> project(const TermPtr& body, Loc loc) {
    TypePtr t = synth(body);
    auto* pr = std::get_if<TProd>(&t->node);
    if (!pr)
      raise(CannotSynthesize{
                "a projection needs a term of product type; it has " +
                pretty(t)},
            loc);
    return {pr->lhs, pr->rhs};
  }

  void check_lam(const ELam& lam, const TypePtr& want, Loc loc) {
    auto* nat = std::get_if<TNat>(&want->node);
    if (!nat) raise(NotANatType{want}, loc);
    if (lam.binders.size() != nat->binders.size())
      raise(BinderCountMismatch{"lambda binders",
                                static_cast<int>(nat->binders.size()),
                                static_cast<int>(lam.binders.size())},
            loc);
    for (size_t i = 0; i < lam.binders.size(); ++i)
      if (lam.binders[i].arity != nat->binders[i].arity)
        raise(BinderCountMismatch{"arity of binder '" + lam.binders[i].hint +
                                      "'",
                                  nat->binders[i].arity,
                                  lam.binders[i].arity},
              loc);
    auto names = fresh_names(lam.binders);
    TypePtr src = open_type(nat->source, names);
    TypePtr tgt = open_type(nat->target, names);
    TermPtr body = open_term_types(lam.body, names);
    std::string x = fresh_name(lam.var_hint);
    body = open_term_var(body, x);
    // Inside the body the functorial context becomes exactly the binders.
    std::vector<BinderSlot> saved = std::move(phi_);
    phi_ = with_names(lam.binders, names);
    delta_.emplace_back(x, src);
    check(body, tgt);
    delta_.pop_back();
    phi_ = std::move(saved);
  }

  TypePtr synth_app(const EApp& a, Loc loc) {
    if (std::holds_alternative<ELam>(a.head->node))
      raise(CannotSynthesize{
                "the head of an application is a lambda whose component "
                "types are not recoverable from the term; bind it with a "
                "term declaration and apply the declared name"},
            loc);
    // The head must type with the functorial context emptied.
    std::vector<BinderSlot> saved = phi_;
    phi_.clear();
    TypePtr head_ty;
    try {
      head_ty = synth(a.head);
    } catch (TErr& te) {
      if (auto* ill = std::get_if<IllFormedType>(&te.err.error))
        if (auto* uv = std::get_if<UnknownVariable>(&ill->inner.error))
          for (auto& p : saved)
            if (p.hint == uv->name)
              raise(FunctorialContextNotEmptyForApplication{uv->name},
                    te.err.loc);
      throw;
    }
    phi_ = std::move(saved);

    auto* nat = std::get_if<TNat>(&head_ty->node);
    if (!nat) raise(NotANatType{head_ty}, loc);
    if (a.typeargs.size() != nat->binders.size())
      raise(BinderCountMismatch{"type arguments",
                                static_cast<int>(nat->binders.size()),
                                static_cast<int>(a.typeargs.size())},
            loc);

    auto names = fresh_names(nat->binders);
    TypePtr src = open_type(nat->source, names);
    TypePtr tgt = open_type(nat->target, names);
    for (size_t i = 0; i < names.size(); ++i) {
      const TypeArg& ta = a.typeargs[i];
      int arity = nat->binders[i].arity;
      if (!ta.params.empty() && !gadt_)
        raise(GadtConstructDisabled{"second-order type argument"}, loc);
      if (static_cast<int>(ta.params.size()) != arity)
        raise(BinderCountMismatch{"parameters of type argument " +
                                      std::to_string(i + 1),
                                  arity, static_cast<int>(ta.params.size())},
              loc);
      if (arity == 0) {
        kind_here(ta.body, loc);
        src = subst_free_type_var(src, names[i], ta.body);
        tgt = subst_free_type_var(tgt, names[i], ta.body);
      } else {
        for (auto& p : ta.params)
          if (p.arity != 0)
            raise(BinderCountMismatch{
                      "arity of type-argument parameter '" + p.hint + "'", 0,
                      p.arity},
                  loc);
        auto pnames = fresh_names(ta.params);
        TypePtr k = open_type(ta.body, pnames);
        size_t mark = phi_.size();
        for (auto& pn : pnames) phi_.push_back({pn, 0});
        kind_here(k, loc);
        phi_.resize(mark);
        src = subst_type(src, names[i], pnames, k);
        tgt = subst_type(tgt, names[i], pnames, k);
      }
    }

    // A fold's argument is its algebra; report a mismatch there as such.
    if (std::holds_alternative<EFold>(a.head->node)) {
      try {
        check(a.arg, src);
      } catch (TErr& te) {
        if (auto* tm = std::get_if<TypeMismatch>(&te.err.error))
          raise(AlgebraTypeMismatch{tm->expected, tm->actual}, te.err.loc);
        throw;
      }
    } else {
      check(a.arg, src);
    }
    return tgt;
  }

  TypePtr synth_map(const EMap& m, Loc loc) {
    size_t n = m.phis.size();
    if (n == 0)
      raise(BinderCountMismatch{"mapped variables", 1, 0}, loc);
    if (m.fs.size() != n || m.gs.size() != n)
      raise(BinderCountMismatch{
                "map components", static_cast<int>(n),
                static_cast<int>(m.fs.size() < m.gs.size() ? m.fs.size()
                                                           : m.gs.size())},
            loc);
    auto phinames = fresh_names(m.phis);
    auto gammanames = fresh_names(m.gammas);

    // The mapped-over shape is functorial in the mapped variables and the
    // riders, nothing else.
    TypePtr h = open_type(m.h, cat(phinames, gammanames));
    {
      std::vector<BinderSlot> saved = std::move(phi_);
      phi_ = cat_slots(with_names(m.phis, phinames),
                       with_names(m.gammas, gammanames));
      kind_here(h, loc);
      phi_ = std::move(saved);
    }

    std::vector<TypePtr> comps(n), f_open(n), g_open(n);
    std::vector<std::vector<std::string>> bnames(n);
    for (size_t i = 0; i < n; ++i) {
      if (static_cast<int>(m.fs[i].params.size()) != m.phis[i].arity ||
          static_cast<int>(m.gs[i].params.size()) != m.phis[i].arity)
        raise(BinderCountMismatch{"parameters of the components for '" +
                                      m.phis[i].hint + "'",
                                  m.phis[i].arity,
                                  static_cast<int>(m.fs[i].params.size())},
              loc);
      bnames[i] = fresh_names(m.fs[i].params);
      auto open_names = cat(bnames[i], gammanames);
      f_open[i] = open_type(m.fs[i].body, open_names);
      g_open[i] = open_type(m.gs[i].body, open_names);
      std::vector<BinderSlot> cslots =
          cat_slots(m.fs[i].params, m.gammas);
      comps[i] = t_nat(cslots, close_type(f_open[i], open_names),
                       close_type(g_open[i], open_names));
    }

    // Source: the component transformers, as a right-nested product when
    // several variables are mapped at once.
    TypePtr src = comps[n - 1];
    for (size_t i = n - 1; i-- > 0;) src = t_prod(comps[i], src);

    // Target: H with each mapped variable replaced by the corresponding
    // component, on both sides.
    TypePtr hf = h;
    TypePtr hg = h;
    for (size_t i = 0; i < n; ++i) {
      if (m.phis[i].arity == 0) {
        hf = subst_free_type_var(hf, phinames[i], f_open[i]);
        hg = subst_free_type_var(hg, phinames[i], g_open[i]);
      } else {
        hf = subst_type(hf, phinames[i], bnames[i], f_open[i]);
        hg = subst_type(hg, phinames[i], bnames[i], g_open[i]);
      }
    }
    TypePtr tgt = t_nat(m.gammas, close_type(hf, gammanames),
                        close_type(hg, gammanames));
    TypePtr result = t_nat({}, src, tgt);
    kind_here(result, loc);
    return result;
  }

  TypePtr synth_in(const EIn& i, Loc loc) {
    auto bnames = fresh_names(i.params);
    std::string fixn = fresh_name(i.fix.hint);
    TypePtr h = open_type(i.body, cat({fixn}, bnames));
    std::vector<TypePtr> bargs;
    for (auto& b : bnames) bargs.push_back(t_free(b));
    TypePtr mu = t_mu(i.fix, i.params, i.body, bargs);
    TypePtr unrolled = subst_type(h, fixn, bnames, mu);
    TypePtr result = t_nat(i.params, close_type(unrolled, bnames),
                           close_type(mu, bnames));
    kind_here(result, loc);
    return result;
  }

  TypePtr synth_fold(const EFold& f, Loc loc) {
    auto bnames = fresh_names(f.params);
    std::string fixn = fresh_name(f.fix.hint);
    TypePtr h = open_type(f.body, cat({fixn}, bnames));
    TypePtr target = open_type(f.target, bnames);
    TypePtr alg_src = subst_type(h, fixn, bnames, target);
    TypePtr alg = t_nat(f.params, close_type(alg_src, bnames),
                        close_type(target, bnames));
    std::vector<TypePtr> bargs;
    for (auto& b : bnames) bargs.push_back(t_free(b));
    TypePtr mu = t_mu(f.fix, f.params, f.body, bargs);
    TypePtr tr = t_nat(f.params, close_type(mu, bnames),
                       close_type(target, bnames));
    TypePtr result = t_nat({}, alg, tr);
    kind_here(result, loc);
    return result;
  }

  TypePtr synth_kan(const EKanIntro& k, Loc loc) {
    if (!gadt_) raise(GadtConstructDisabled{"kan"}, loc);
    auto pnames = fresh_names(k.phis);
    auto anames = fresh_names(k.alphas);
    auto allnames = cat(pnames, anames);
    TypePtr f = open_type(k.f, allnames);
    std::vector<TypePtr> ks_open;
    for (auto& kk : k.ks) ks_open.push_back(open_type(kk, anames));
    // Target: the extension type along the Ks, applied back to the Ks.  The
    // Lan binds its own copies of the alphas; the applied Ks see the Nat's.
    TypePtr lan = t_lan(k.alphas, k.ks, close_type(f, anames), ks_open);
    TypePtr result =
        t_nat(cat_slots(k.phis, k.alphas), close_type(f, allnames),
              close_type(lan, allnames));
    kind_here(result, loc);
    return result;
  }

  TypePtr synth_cokan(const EKanElim& k, Loc loc) {
    if (!gadt_) raise(GadtConstructDisabled{"cokan"}, loc);
    if (k.ks.size() != k.betas.size())
      raise(BinderCountMismatch{"cokan type arguments vs result binders",
                                static_cast<int>(k.betas.size()),
                                static_cast<int>(k.ks.size())},
            loc);
    for (auto& b : k.betas)
      if (b.arity != 0)
        raise(BinderCountMismatch{"arity of cokan binder '" + b.hint + "'", 0,
                                  b.arity},
              loc);
    auto pnames = fresh_names(k.phis);
    auto anames = fresh_names(k.alphas);
    auto bnames = fresh_names(k.betas);
    TypePtr f = open_type(k.f, cat(pnames, anames));
    TypePtr g = open_type(k.g, cat(pnames, bnames));
    std::vector<TypePtr> ks_open;
    for (auto& kk : k.ks) ks_open.push_back(open_type(kk, anames));

    // Premise: the body is a transformer from F to G at the Ks.
    TypePtr g_inst = g;
    for (size_t i = 0; i < bnames.size(); ++i)
      g_inst = subst_free_type_var(g_inst, bnames[i], ks_open[i]);
    auto prem_names = cat(pnames, anames);
    TypePtr premise =
        t_nat(cat_slots(k.phis, k.alphas), close_type(f, prem_names),
              close_type(g_inst, prem_names));
    kind_here(premise, loc);
    {
      std::vector<BinderSlot> saved = std::move(phi_);
      phi_.clear();
      check(k.body, premise);
      phi_ = std::move(saved);
    }

    // Conclusion: the same transformer, with the extension type absorbing
    // the Ks on the source side.
    std::vector<TypePtr> bargs;
    for (auto& b : bnames) bargs.push_back(t_free(b));
    TypePtr lan = t_lan(k.alphas, k.ks, close_type(f, anames), bargs);
    auto res_names = cat(pnames, bnames);
    TypePtr result =
        t_nat(cat_slots(k.phis, k.betas), close_type(lan, res_names),
              close_type(g, res_names));
    kind_here(result, loc);
    return result;
  }
};

std::string got_clause(const TypePtr& t) {
  return t ? ", got " + pretty(t) : "";
}

}  // namespace

std::string describe(const TypeError& e) {
  return std::visit(
      overloaded{
          [](const NotANatType& n) {
            return "expected a transformer type Nat[...](...); the term has "
                   "type " +
                   pretty(n.actual);
          },
          [](const FunctorialContextNotEmptyForApplication& f) {
            return "the head of an application must typecheck with the "
                   "functorial context emptied, but it needs the functorial "
                   "variable '" +
                   f.name + "'";
          },
          [](const BinderCountMismatch& b) {
            return "mismatched " + b.what + ": expected " +
                   std::to_string(b.expected) + ", got " +
                   std::to_string(b.actual);
          },
          [](const AlgebraTypeMismatch& a) {
            return "the algebra of this fold must have type " +
                   pretty(a.expected) + got_clause(a.actual);
          },
          [](const FreshnessViolation& f) {
            return "duplicate name '" + f.name + "' in " + f.where;
          },
          [](const GadtConstructDisabled& g) {
            return "'" + g.construct +
                   "' requires gadt mode (pragma gadt on)";
          },
          [](const TypeMismatch& t) {
            return "type mismatch: expected " + pretty(t.expected) +
                   got_clause(t.actual);
          },
          [](const UnknownTermVariable& u) {
            return "unknown term variable '" + u.name + "'";
          },
          [](const CannotSynthesize& c) { return c.what; },
          [](const IllFormedType& i) {
            return "ill-formed type: " + describe(i.inner);
          },
      },
      e.error);
}

std::string error_code(const TypeError& e) {
  return std::visit(
      overloaded{
          [](const NotANatType&) { return std::string("NotANatType"); },
          [](const FunctorialContextNotEmptyForApplication&) {
            return std::string("FunctorialContextNotEmptyForApplication");
          },
          [](const BinderCountMismatch&) {
            return std::string("BinderCountMismatch");
          },
          [](const AlgebraTypeMismatch&) {
            return std::string("AlgebraTypeMismatch");
          },
          [](const FreshnessViolation&) {
            return std::string("FreshnessViolation");
          },
          [](const GadtConstructDisabled&) {
            return std::string("GadtConstructDisabled");
          },
          [](const TypeMismatch&) { return std::string("TypeMismatch"); },
          [](const UnknownTermVariable&) {
            return std::string("UnknownTermVariable");
          },
          [](const CannotSynthesize&) {
            return std::string("CannotSynthesize");
          },
          [](const IllFormedType&) { return std::string("IllFormedType"); },
      },
      e.error);
}

std::optional<TypeError> check_term(const TypingJudgment& j, bool gadt_mode,
                                    const DeclTypes& decls) {
  try {
    validate_context(j.ctx, gadt_mode);
    Checker c(j.ctx, gadt_mode, decls);
    c.kind_here(j.ascribed, j.term ? j.term->loc : Loc{});
    c.check(j.term, j.ascribed);
    return std::nullopt;
  } catch (TErr& te) {
    return te.err;
  }
}

Result<TypePtr, TypeError> infer_redex_type(const ContextDecl& ctx,
                                            const TermPtr& app, bool gadt_mode,
                                            const DeclTypes& decls) {
  try {
    validate_context(ctx, gadt_mode);
    if (!std::holds_alternative<EApp>(app->node))
      raise(CannotSynthesize{
                "only application redexes have an inferable instance type"},
            app->loc);
    Checker c(ctx, gadt_mode, decls);
    return c.synth(app);
  } catch (TErr& te) {
    return te.err;
  }
}

FileReport check_file(const ParsedFile& f) {
  FileReport rep;
  bool gadt = false;
  ContextDecl ambient;
  DeclTypes seen;
  for (auto& d : f.decls) {
    std::visit(
        overloaded{
            [&](const PragmaDecl& p) {
              if (p.key == "gadt") gadt = (p.value == "on");
            },
            [&](const ContextDecl& cd) {
              DeclReport r{"context", cd.loc, {}};
              try {
                validate_context(cd, gadt);
                ambient = cd;
              } catch (TErr& te) {
                r.error = te.err;
              }
              rep.decls.push_back(std::move(r));
            },
            [&](const TypeDecl& td) {
              // Alias bodies are macro-expanded at use sites; checking them
              // here with the parameters as plain variables catches nonsense
              // early without constraining how instances are used.
              DeclReport r{td.name, td.loc, {}};
              std::vector<std::string> pnames;
              for (auto& p : td.params) pnames.push_back(p.hint);
              TypeContext kc{cat_slots(ambient.gamma, td.params), ambient.phi};
              if (auto ke =
                      check_type(open_type(td.body, pnames), kc, gadt))
                r.error = TypeError{IllFormedType{*ke}, td.loc};
              rep.decls.push_back(std::move(r));
            },
            [&](const TermDecl& td) {
              DeclReport r{td.name, td.loc, {}};
              TypingJudgment j{ambient, td.def, td.type};
              r.error = check_term(j, gadt, seen);
              if (!r.error) seen.emplace_back(td.name, td.type);
              rep.decls.push_back(std::move(r));
            },
        },
        d);
  }
  rep.gadt_mode = gadt;
  for (auto& r : rep.decls)
    if (r.error) rep.ok = false;
  return rep;
}

std::optional<std::string> typecheck_seq_constructors() {
  static const char* kSeqSource = R"(
pragma gadt on
type Nhat = (mu n. 1 + n)
type Arrow c = Lan[]{Nhat}{1} c
type Seq b =
  (mu s. \c. c + Lan[g,d]{g*d}{s g * s d} c
           + Lan[g]{Arrow g}{Arrow (s g)} c) b
term sconst : Nat[b](b, Seq b) =
  L[b] x. in{mu s. \c. c + Lan[g,d]{g*d}{s g * s d} c
                         + Lan[g]{Arrow g}{Arrow (s g)} c}
          [b] (inl (inl x))
term spair : Nat[b](Lan[g,d]{g*d}{Seq g * Seq d} b, Seq b) =
  L[b] x. in{mu s. \c. c + Lan[g,d]{g*d}{s g * s d} c
                         + Lan[g]{Arrow g}{Arrow (s g)} c}
          [b] (inl (inr x))
term sseq : Nat[b](Lan[g]{Arrow g}{Arrow (Seq g)} b, Seq b) =
  L[b] x. in{mu s. \c. c + Lan[g,d]{g*d}{s g * s d} c
                         + Lan[g]{Arrow g}{Arrow (s g)} c}
          [b] (inr x)
term spair_curried : Nat[g,d](Seq g * Seq d, Seq (g*d)) =
  L[g,d] pr. spair [g*d] (kan[; g2,d2]{g2*d2}{Seq g2 * Seq d2} [g,d] pr)
term spair_from_curried : Nat[c](Lan[g,d]{g*d}{Seq g * Seq d} c, Seq c) =
  cokan[; g,d; c]{Seq c}{g*d}{Seq g * Seq d} spair_curried
)";
  auto pf = parse_file(kSeqSource, "<seq-selftest>");
  if (!pf) return "parse: " + pf.error().message;
  auto rep = check_file(pf.value());
  for (auto& d : rep.decls)
    if (d.error) return d.name + ": " + describe(*d.error);
  return std::nullopt;
}

}  // namespace nestcalc
