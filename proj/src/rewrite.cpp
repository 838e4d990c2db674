// Small-step normalizer and equation checker.  See rewrite.hpp for the rule
// inventory; the notes here cover only the two constructions that are easy
// to get wrong.
//
// fold-in builds the structural map over the fixpoint body with the mapped
// slot standing for the fix variable and the fixpoint's parameters riding
// along; the stored body already has exactly that binder layout, so it is
// reused unchanged.  The single component is the fold itself, eta-expanded
// to bind the riders as well (the only way a narrower transformer can
// inhabit a wider Nat-type).
//
// map-fvar and map-mu-in both work on a freshly opened copy of the shape:
// the mapped variables and riders become free names, the source/target
// instances of the variable's arguments are computed by name substitution,
// and whatever becomes part of a rebuilt term is closed again over the same
// name list.  Children of sums and products are spliced without opening:
// their escaped level references keep their meaning because the sub-map
// re-binds an identical binder layout.
#include "nestcalc/rewrite.hpp"

#include <algorithm>
#include <utility>

#include "nestcalc/pretty.hpp"
#include "nestcalc/subst.hpp"

namespace nestcalc {

namespace {

std::vector<std::string> fresh_names(const std::vector<BinderSlot>& slots) {
  std::vector<std::string> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(fresh_name(s.hint));
  return out;
}

std::vector<std::string> cat(std::vector<std::string> a,
                             const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<TypeArg> cat_args(std::vector<TypeArg> a,
                              const std::vector<TypeArg>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<TypeArg> plain_args(const std::vector<TypePtr>& ts) {
  std::vector<TypeArg> out;
  out.reserve(ts.size());
  for (auto& t : ts) out.push_back(TypeArg{{}, t});
  return out;
}

TermPtr app_of(TermPtr head, std::vector<TypeArg> typeargs, TermPtr arg) {
  return mk_term(EApp{std::move(head), std::move(typeargs), std::move(arg)});
}

const Definition* lookup_def(const DefEnv& env, const std::string& name) {
  for (auto& e : env)
    if (e.first == name) return &e.second;
  return nullptr;
}

bool mentions_any(const TypePtr& t, const std::vector<std::string>& names) {
  for (auto& fv : free_type_vars(t))
    for (auto& n : names)
      if (fv.first == n) return true;
  return false;
}

// Substitute one free name by a type argument (plain or parameterized).
TypePtr inst_free(TypePtr t, const std::string& name, const TypeArg& arg) {
  if (arg.params.empty()) return subst_free_type_var(t, name, arg.body);
  auto ps = fresh_names(arg.params);
  return subst_type(t, name, ps, open_type(arg.body, ps));
}

// On an opened shape fragment: replace the mapped variables by one side's
// components (which share the rider names) and then the riders by the
// application's type arguments.
TypePtr side_inst(TypePtr t, const EMap& m, const std::vector<std::string>& pn,
                  const std::vector<std::string>& gn,
                  const std::vector<TypeArg>& side,
                  const std::vector<TypeArg>& ks) {
  for (std::size_t i = 0; i < m.phis.size(); ++i) {
    auto bs = fresh_names(side[i].params);
    TypePtr body = open_type(side[i].body, cat(bs, gn));
    t = bs.empty() ? subst_free_type_var(t, pn[i], body)
                   : subst_type(t, pn[i], bs, body);
  }
  for (std::size_t j = 0; j < gn.size(); ++j) t = inst_free(t, gn[j], ks[j]);
  return t;
}

// The i-th component of a right-nested component tuple.
TermPtr project_component(TermPtr fs, std::size_t i, std::size_t n) {
  for (std::size_t k = 0; k < i; ++k) fs = e_proj2(fs);
  if (i + 1 < n) fs = e_proj1(fs);
  return fs;
}

// Resolve the i-th component statically when the tuple is literal; fall back
// to syntactic projections otherwise.
TermPtr resolve_component(const TermPtr& fs, std::size_t i, std::size_t n) {
  TermPtr cur = fs;
  std::size_t taken = 0;
  while (taken < i && std::holds_alternative<EPair>(cur->node)) {
    cur = std::get<EPair>(cur->node).rhs;
    ++taken;
  }
  if (taken < i) return project_component(fs, i, n);
  if (i + 1 < n) {
    if (auto* p = std::get_if<EPair>(&cur->node)) return p->lhs;
    return project_component(fs, i, n);
  }
  return cur;
}

TermPtr select_branch(const TermPtr& branch, const std::string& hint,
                      const TermPtr& value) {
  std::string x = fresh_name(hint.empty() ? "x" : hint);
  return subst_term_var(open_term_var(branch, x), x, value);
}

TermPtr beta(const ELam& lam, const std::vector<TypeArg>& targs,
             const TermPtr& arg) {
  auto names = fresh_names(lam.binders);
  std::string x = fresh_name(lam.var_hint.empty() ? "x" : lam.var_hint);
  TermPtr body = open_term_var(open_term_types(lam.body, names), x);
  for (std::size_t i = 0; i < names.size() && i < targs.size(); ++i) {
    const TypeArg& ta = targs[i];
    if (ta.params.empty()) {
      body = subst_term_type(body, names[i], ta.body);
    } else {
      auto ps = fresh_names(ta.params);
      body = subst_term_type_second_order(body, names[i], ps,
                                          open_type(ta.body, ps));
    }
  }
  return subst_term_var(body, x, arg);
}

// (fold{mu}{T} [] alg) [Ks] (in [Ks] w)
//   --> alg [Ks] ((map[fix^k; params]{body}{mu}{T} [] eta-fold) [Ks] w)
TermPtr fold_in(const EApp& a) {
  const EApp& inner = std::get<EApp>(a.head->node);
  const EFold& f = std::get<EFold>(inner.head->node);
  const EApp& value = std::get<EApp>(a.arg->node);

  auto bn = fresh_names(f.params);  // the component's own binders
  auto gn = fresh_names(f.params);  // the riders
  auto level = cat(bn, gn);
  std::vector<TypePtr> bargs;
  bargs.reserve(bn.size());
  for (auto& b : bn) bargs.push_back(t_free(b));
  TypePtr mu_open = t_mu(f.fix, f.params, f.body, bargs);
  TypePtr target_open = open_type(f.target, bn);

  std::vector<BinderSlot> comp_params;
  for (auto& s : f.params) comp_params.push_back({s.hint, 0});
  TypeArg fcomp{comp_params, close_type(mu_open, level)};
  TypeArg gcomp{comp_params, close_type(target_open, level)};

  std::string y = fresh_name("y");
  TermPtr comp_body = app_of(a.head, plain_args(bargs), e_free(y));
  comp_body = close_term_var(close_term_types(comp_body, level), y);
  std::vector<BinderSlot> lam_binders;
  for (auto& s : f.params) lam_binders.push_back({s.hint, 0});
  for (auto& s : f.params) lam_binders.push_back({s.hint, 0});
  TermPtr comp = mk_term(ELam{lam_binders, "y", comp_body});

  EMap m;
  m.phis = {BinderSlot{f.fix.hint, static_cast<int>(f.params.size())}};
  m.gammas = f.params;
  m.h = f.body;  // binder layout [fix, params...] == [phi, riders...]
  m.fs = {fcomp};
  m.gs = {gcomp};
  TermPtr mapped =
      app_of(app_of(mk_term(std::move(m)), {}, comp), a.typeargs, value.arg);
  return app_of(inner.arg, a.typeargs, mapped);
}

// Applied map at a mapped-variable head: the component acts at the
// source-side instances; arguments that themselves mention mapped variables
// are pushed through the target component's shape afterwards.
TermPtr map_fvar(const EMap& m, const TVar& var, std::size_t i,
                 const TermPtr& fs_term, const EApp& a,
                 const std::vector<std::string>& pn,
                 const std::vector<std::string>& gn) {
  std::size_t n = m.phis.size();
  std::vector<TypePtr> a_star, a_circ;
  bool args_mapped = false;
  for (auto& arg : var.args) {
    if (mentions_any(arg, pn)) args_mapped = true;
    a_star.push_back(side_inst(arg, m, pn, gn, m.fs, a.typeargs));
    a_circ.push_back(side_inst(arg, m, pn, gn, m.gs, a.typeargs));
  }
  TermPtr comp = resolve_component(fs_term, i, n);
  std::vector<TypeArg> inst = cat_args(plain_args(a_star), a.typeargs);
  // An anonymous component (always machine-built) is applied right away so
  // the contractum never carries an applied raw lambda.
  TermPtr result;
  if (auto* cl = std::get_if<ELam>(&comp->node))
    result = beta(*cl, inst, a.arg);
  else
    result = app_of(comp, std::move(inst), a.arg);
  if (!args_mapped) return result;  // identity extension: G(id) = id

  std::vector<TermPtr> margs;
  for (auto& arg : var.args) {
    EMap argmap = m;
    argmap.h = close_type(arg, cat(pn, gn));
    std::string y = fresh_name("y");
    TermPtr body = app_of(app_of(mk_term(std::move(argmap)), {}, fs_term),
                          a.typeargs, e_free(y));
    margs.push_back(mk_term(ELam{{}, "y", close_term_var(body, y)}));
  }
  TermPtr margs_term = margs.back();
  for (std::size_t j = margs.size() - 1; j-- > 0;)
    margs_term = e_pair(margs[j], margs_term);

  const TypeArg& gi = m.gs[i];
  auto b2 = fresh_names(gi.params);
  TypePtr outer_h = open_type(gi.body, cat(b2, gn));
  for (std::size_t j = 0; j < gn.size(); ++j)
    outer_h = inst_free(outer_h, gn[j], a.typeargs[j]);
  EMap outer;
  outer.phis = gi.params;  // arity-0 by construction
  outer.gammas = {};
  outer.h = close_type(outer_h, b2);
  outer.fs = plain_args(a_star);
  outer.gs = plain_args(a_circ);
  return app_of(app_of(mk_term(std::move(outer)), {}, margs_term), {}, result);
}

// Applied map at a fixpoint shape meeting an in-value: the in moves outside
// (instances rewritten to the target side) and the map recurses through the
// unrolled composite shape.  The substitutions commute because a fixpoint
// body cannot mention the enclosing mapped variables or riders.
TermPtr map_mu_in(const EMap& m, const TypePtr& h_open, const TermPtr& fs_term,
                  const EApp& a, const EApp& value,
                  const std::vector<std::string>& pn,
                  const std::vector<std::string>& gn) {
  const TMu& mu = std::get<TMu>(h_open->node);
  auto level = cat(pn, gn);

  auto an = fresh_names(mu.params);
  std::string fixn = fresh_name(mu.fix.hint);
  TypePtr body_open = open_type(mu.body, cat({fixn}, an));
  auto rn = fresh_names(mu.params);
  std::vector<TypePtr> rargs;
  rargs.reserve(rn.size());
  for (auto& r : rn) rargs.push_back(t_free(r));
  TypePtr u = subst_type(body_open, fixn, rn,
                         t_mu(mu.fix, mu.params, mu.body, rargs));
  u = subst_type_sequential(u, an, mu.args);

  EMap rec = m;
  rec.h = close_type(u, level);

  std::vector<TypePtr> d_circ;
  d_circ.reserve(mu.args.size());
  for (auto& arg : mu.args)
    d_circ.push_back(side_inst(arg, m, pn, gn, m.gs, a.typeargs));

  TermPtr mapped = app_of(app_of(mk_term(std::move(rec)), {}, fs_term),
                          a.typeargs, value.arg);
  return app_of(value.head, plain_args(d_circ), mapped);
}

struct StepOut {
  TermPtr term;
  std::string rule;
  std::string path;
};

class Stepper {
 public:
  explicit Stepper(const DefEnv& env) : env_(env) {}

  std::optional<StepOut> step(const TermPtr& t) { return step_at(t, ""); }

 private:
  const DefEnv& env_;

  static std::string at_root(const std::string& path) {
    return path.empty() ? "/" : path;
  }

  template <typename Rebuild>
  std::optional<StepOut> via(const TermPtr& sub, const std::string& path,
                             const char* seg, Rebuild rebuild) {
    auto s = step_at(sub, path + seg);
    if (!s) return std::nullopt;
    return StepOut{rebuild(s->term), s->rule, s->path};
  }

  std::optional<StepOut> step_at(const TermPtr& t, const std::string& path) {
    if (auto* v = std::get_if<EVar>(&t->node)) {
      // Lambda-valued names stay folded until applied (see rewrite_app):
      // exposing the anonymous lambda would leave states the ascription
      // checker cannot synthesize.
      if (!v->ref)
        if (const Definition* d = lookup_def(env_, v->name))
          if (!std::holds_alternative<ELam>(d->term->node))
            return StepOut{d->term, "delta", at_root(path)};
      return std::nullopt;
    }
    if (auto* i = std::get_if<EInl>(&t->node))
      return via(i->body, path, "/inl", [](TermPtr b) { return e_inl(b); });
    if (auto* i = std::get_if<EInr>(&t->node))
      return via(i->body, path, "/inr", [](TermPtr b) { return e_inr(b); });
    if (auto* ab = std::get_if<EAbsurd>(&t->node))
      return via(ab->body, path, "/absurd", [&](TermPtr b) {
        return mk_term(EAbsurd{ab->annot, b});
      });
    if (auto* p = std::get_if<EPair>(&t->node)) {
      if (auto s = via(p->lhs, path, "/pair.l",
                       [&](TermPtr l) { return e_pair(l, p->rhs); }))
        return s;
      return via(p->rhs, path, "/pair.r",
                 [&](TermPtr r) { return e_pair(p->lhs, r); });
    }
    if (auto* pr = std::get_if<EProj1>(&t->node)) {
      if (auto s =
              via(pr->body, path, "/proj", [](TermPtr b) { return e_proj1(b); }))
        return s;
      if (auto* pv = std::get_if<EPair>(&pr->body->node))
        return StepOut{pv->lhs, "fst", at_root(path)};
      return std::nullopt;
    }
    if (auto* pr = std::get_if<EProj2>(&t->node)) {
      if (auto s =
              via(pr->body, path, "/proj", [](TermPtr b) { return e_proj2(b); }))
        return s;
      if (auto* pv = std::get_if<EPair>(&pr->body->node))
        return StepOut{pv->rhs, "snd", at_root(path)};
      return std::nullopt;
    }
    if (auto* c = std::get_if<ECase>(&t->node)) {
      // Selection fires as soon as the constructor is visible; the payload
      // finishes reducing inside the branch.  A literal injection cannot be
      // synthesized, so a constructor-rooted scrutinee must not outlive the
      // single step that created it.
      if (auto* l = std::get_if<EInl>(&c->scrutinee->node))
        return StepOut{select_branch(c->left, c->hint_l, l->body), "case-inl",
                       at_root(path)};
      if (auto* r = std::get_if<EInr>(&c->scrutinee->node))
        return StepOut{select_branch(c->right, c->hint_r, r->body), "case-inr",
                       at_root(path)};
      return via(c->scrutinee, path, "/scrutinee", [&](TermPtr sc) {
        return mk_term(ECase{sc, c->hint_l, c->left, c->hint_r, c->right});
      });
    }
    if (auto* e = std::get_if<EKanElim>(&t->node))
      return via(e->body, path, "/cokan.body", [&](TermPtr b) {
        EKanElim copy = *e;
        copy.body = std::move(b);
        return mk_term(std::move(copy));
      });
    if (auto* a = std::get_if<EApp>(&t->node)) {
      if (auto s = via(a->head, path, "/head", [&](TermPtr h) {
            return app_of(std::move(h), a->typeargs, a->arg);
          }))
        return s;
      if (auto s = via(a->arg, path, "/arg", [&](TermPtr g) {
            return app_of(a->head, a->typeargs, std::move(g));
          }))
        return s;
      return rewrite_app(*a, at_root(path));
    }
    // top, lambdas, and the bare map/in/fold/kan heads have no redex inside.
    return std::nullopt;
  }

  std::optional<StepOut> rewrite_app(const EApp& a, const std::string& rp) {
    if (auto* lam = std::get_if<ELam>(&a.head->node))
      return StepOut{beta(*lam, a.typeargs, a.arg), "beta", rp};
    if (auto* hv = std::get_if<EVar>(&a.head->node)) {
      if (!hv->ref)
        if (const Definition* d = lookup_def(env_, hv->name))
          if (auto* dl = std::get_if<ELam>(&d->term->node))
            return StepOut{beta(*dl, a.typeargs, a.arg), "beta", rp};
      return std::nullopt;
    }
    if (auto* inner = std::get_if<EApp>(&a.head->node)) {
      if (std::holds_alternative<EFold>(inner->head->node)) {
        if (auto* va = std::get_if<EApp>(&a.arg->node))
          if (std::holds_alternative<EIn>(va->head->node))
            return StepOut{fold_in(a), "fold-in", rp};
        return std::nullopt;
      }
      if (auto* m = std::get_if<EMap>(&inner->head->node))
        return map_rules(*m, inner->arg, a, rp);
      return std::nullopt;
    }
    if (auto* el = std::get_if<EKanElim>(&a.head->node))
      if (auto* va = std::get_if<EApp>(&a.arg->node))
        if (std::holds_alternative<EKanIntro>(va->head->node))
          return StepOut{app_of(el->body, va->typeargs, va->arg), "cokan-kan",
                         rp};
    return std::nullopt;
  }

  static std::optional<StepOut> map_rules(const EMap& m, const TermPtr& fs_term,
                                          const EApp& a,
                                          const std::string& rp) {
    auto pn = fresh_names(m.phis);
    auto gn = fresh_names(m.gammas);
    TypePtr h = open_type(m.h, cat(pn, gn));
    if (!mentions_any(h, pn)) return StepOut{a.arg, "map-id", rp};

    if (auto* s = std::get_if<TSum>(&m.h->node)) {
      if (auto* il = std::get_if<EInl>(&a.arg->node))
        return StepOut{e_inl(sub_map(m, s->lhs, fs_term, a.typeargs, il->body)),
                       "map-sum-inl", rp};
      if (auto* ir = std::get_if<EInr>(&a.arg->node))
        return StepOut{e_inr(sub_map(m, s->rhs, fs_term, a.typeargs, ir->body)),
                       "map-sum-inr", rp};
      return std::nullopt;
    }
    if (auto* pd = std::get_if<TProd>(&m.h->node)) {
      if (auto* pv = std::get_if<EPair>(&a.arg->node))
        return StepOut{
            e_pair(sub_map(m, pd->lhs, fs_term, a.typeargs, pv->lhs),
                   sub_map(m, pd->rhs, fs_term, a.typeargs, pv->rhs)),
            "map-prod", rp};
      return std::nullopt;
    }
    if (auto* var = std::get_if<TVar>(&h->node)) {
      for (std::size_t i = 0; i < pn.size(); ++i)
        if (!var->ref && var->name == pn[i])
          return StepOut{map_fvar(m, *var, i, fs_term, a, pn, gn), "map-fvar",
                         rp};
      return std::nullopt;  // abstract head over mapped arguments: stuck
    }
    if (std::holds_alternative<TMu>(h->node)) {
      if (auto* va = std::get_if<EApp>(&a.arg->node))
        if (std::holds_alternative<EIn>(va->head->node))
          return StepOut{map_mu_in(m, h, fs_term, a, *va, pn, gn), "map-mu-in",
                         rp};
      return std::nullopt;
    }
    return std::nullopt;  // extension shapes and stuck values are normal
  }

  static TermPtr sub_map(const EMap& m, const TypePtr& h_child,
                         const TermPtr& fs_term, const std::vector<TypeArg>& ks,
                         const TermPtr& value) {
    EMap child = m;
    child.h = h_child;
    return app_of(app_of(mk_term(std::move(child)), {}, fs_term), ks, value);
  }
};

// L[as] x. h [as] x  -->  h, when h mentions neither x nor the binders.
std::optional<TermPtr> eta_root(const TermPtr& t) {
  auto* lam = std::get_if<ELam>(&t->node);
  if (!lam) return std::nullopt;
  for (auto& b : lam->binders)
    if (b.arity != 0) return std::nullopt;
  auto names = fresh_names(lam->binders);
  std::string x = fresh_name(lam->var_hint.empty() ? "x" : lam->var_hint);
  TermPtr body = open_term_var(open_term_types(lam->body, names), x);
  auto* app = std::get_if<EApp>(&body->node);
  if (!app) return std::nullopt;
  auto* av = std::get_if<EVar>(&app->arg->node);
  if (!av || av->ref || av->name != x) return std::nullopt;
  if (app->typeargs.size() != names.size()) return std::nullopt;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const TypeArg& ta = app->typeargs[i];
    if (!ta.params.empty()) return std::nullopt;
    auto* tv = std::get_if<TVar>(&ta.body->node);
    if (!tv || tv->ref || tv->name != names[i] || !tv->args.empty())
      return std::nullopt;
  }
  for (auto& fv : free_term_vars(app->head))
    if (fv == x) return std::nullopt;
  for (auto& fv : free_type_vars_of_term(app->head))
    for (auto& n : names)
      if (fv.first == n) return std::nullopt;
  return app->head;
}

bool is_data_type(const TypePtr& t) {
  if (std::holds_alternative<TZero>(t->node) ||
      std::holds_alternative<TOne>(t->node))
    return true;
  if (auto* s = std::get_if<TSum>(&t->node))
    return is_data_type(s->lhs) && is_data_type(s->rhs);
  if (auto* p = std::get_if<TProd>(&t->node))
    return is_data_type(p->lhs) && is_data_type(p->rhs);
  if (auto* v = std::get_if<TVar>(&t->node)) {
    if (!v->ref) return false;  // a free variable admits unknown values
    for (auto& a : v->args)
      if (!is_data_type(a)) return false;
    return true;
  }
  if (auto* mu = std::get_if<TMu>(&t->node)) {
    if (!is_data_type(mu->body)) return false;
    for (auto& a : mu->args)
      if (!is_data_type(a)) return false;
    return true;
  }
  return false;  // Nat and Lan values have no canonical syntactic form
}

bool is_data_value(const TermPtr& t) {
  if (std::holds_alternative<ETop>(t->node)) return true;
  if (auto* i = std::get_if<EInl>(&t->node)) return is_data_value(i->body);
  if (auto* i = std::get_if<EInr>(&t->node)) return is_data_value(i->body);
  if (auto* p = std::get_if<EPair>(&t->node))
    return is_data_value(p->lhs) && is_data_value(p->rhs);
  if (auto* a = std::get_if<EApp>(&t->node))
    return std::holds_alternative<EIn>(a->head->node) && is_data_value(a->arg);
  return false;
}

}  // namespace

DefEnv build_def_env(const ParsedFile& file) {
  DefEnv env;
  for (auto& d : file.decls)
    if (auto* td = std::get_if<TermDecl>(&d))
      env.push_back({td->name, Definition{td->type, td->def}});
  return env;
}

DeclTypes decl_types(const DefEnv& env) {
  DeclTypes out;
  out.reserve(env.size());
  for (auto& e : env) out.push_back({e.first, e.second.type});
  return out;
}

std::string describe(const RewriteError& e) {
  if (auto* f = std::get_if<FuelExhausted>(&e))
    return "fuel exhausted after " + std::to_string(f->fuel) + " steps";
  const auto& ill = std::get<IllTypedInput>(e);
  return "the " + ill.which + " term is ill-typed: " + describe(ill.inner);
}

Result<TermPtr, RewriteError> normalize(const TermPtr& term, const DefEnv& env,
                                        int fuel, RewriteTrace* trace) {
  Stepper stepper(env);
  TermPtr cur = term;
  int used = 0;
  for (;;) {
    std::optional<StepOut> s = stepper.step(cur);
    if (!s)
      if (auto h = eta_root(cur)) s = StepOut{*h, "eta", "/"};
    if (!s) break;
    if (used == fuel) {
      if (trace) trace->fuel_used = used;
      return RewriteError{FuelExhausted{fuel, cur}};
    }
    ++used;
    if (trace) trace->steps.push_back({s->rule, s->path, cur, s->term});
    cur = s->term;
  }
  if (trace) trace->fuel_used = used;
  return cur;
}

ValueEnumeration enumerate_values(const TypePtr& type, int mu_depth,
                                  std::size_t max_count) {
  if (std::holds_alternative<TZero>(type->node)) return {{}, true};
  if (std::holds_alternative<TOne>(type->node)) return {{e_top()}, true};
  if (auto* s = std::get_if<TSum>(&type->node)) {
    auto l = enumerate_values(s->lhs, mu_depth, max_count);
    auto r = enumerate_values(s->rhs, mu_depth, max_count);
    ValueEnumeration out{{}, l.complete && r.complete};
    for (auto& v : l.values) out.values.push_back(e_inl(v));
    for (auto& v : r.values) out.values.push_back(e_inr(v));
    if (out.values.size() > max_count) {
      out.values.resize(max_count);
      out.complete = false;
    }
    return out;
  }
  if (auto* p = std::get_if<TProd>(&type->node)) {
    auto l = enumerate_values(p->lhs, mu_depth, max_count);
    auto r = enumerate_values(p->rhs, mu_depth, max_count);
    ValueEnumeration out{{}, l.complete && r.complete};
    for (auto& lv : l.values)
      for (auto& rv : r.values) {
        if (out.values.size() == max_count) {
          out.complete = false;
          return out;
        }
        out.values.push_back(e_pair(lv, rv));
      }
    return out;
  }
  if (auto* mu = std::get_if<TMu>(&type->node)) {
    if (mu_depth <= 0) return {{}, false};
    auto an = fresh_names(mu->params);
    std::string fixn = fresh_name(mu->fix.hint);
    TypePtr body = open_type(mu->body, cat({fixn}, an));
    auto rn = fresh_names(mu->params);
    std::vector<TypePtr> rargs;
    rargs.reserve(rn.size());
    for (auto& r : rn) rargs.push_back(t_free(r));
    body = subst_type(body, fixn, rn,
                      t_mu(mu->fix, mu->params, mu->body, rargs));
    body = subst_type_sequential(body, an, mu->args);
    auto inner = enumerate_values(body, mu_depth - 1, max_count);
    ValueEnumeration out{{}, inner.complete};
    TermPtr in_head = mk_term(EIn{mu->fix, mu->params, mu->body});
    for (auto& v : inner.values)
      out.values.push_back(app_of(in_head, plain_args(mu->args), v));
    return out;
  }
  return {{}, false};  // Nat, Lan, and variables are not enumerable
}

Result<EquationReport, RewriteError> check_equation(
    const ContextDecl& ctx, const TermPtr& lhs, const TermPtr& rhs,
    const TypePtr& type, const DefEnv& env, const EquationOptions& opts) {
  auto dts = decl_types(env);
  if (auto err = check_term({ctx, lhs, type}, opts.gadt, dts))
    return RewriteError{IllTypedInput{"left", *err}};
  if (auto err = check_term({ctx, rhs, type}, opts.gadt, dts))
    return RewriteError{IllTypedInput{"right", *err}};

  auto ln = normalize(lhs, env, opts.fuel);
  if (!ln.is_ok()) return ln.error();
  auto rn = normalize(rhs, env, opts.fuel);
  if (!rn.is_ok()) return rn.error();
  if (alpha_eq(ln.value(), rn.value()))
    return EquationReport{Verdict::Equal, "normal forms coincide", ""};

  const auto* nat = std::get_if<TNat>(&type->node);
  bool closed_ctx = ctx.gamma.empty() && ctx.phi.empty() && ctx.delta.empty();
  bool arity0 = nat != nullptr;
  if (nat)
    for (auto& b : nat->binders)
      if (b.arity != 0) arity0 = false;

  if (nat && arity0 && closed_ctx && !opts.probe_types.empty()) {
    auto names = fresh_names(nat->binders);
    TypePtr src = open_type(nat->source, names);
    std::size_t nb = names.size();
    std::vector<std::size_t> idx(nb, 0);
    bool truncated = false, all_complete = true, undecided = false;
    std::size_t instances = 0, checked = 0;
    for (;;) {
      if (nb > 0 && instances == opts.max_instances) {
        truncated = true;
        break;
      }
      TypePtr s_inst = src;
      std::vector<TypeArg> targs;
      std::string inst_label;
      for (std::size_t i = 0; i < nb; ++i) {
        const TypePtr& k = opts.probe_types[idx[i]];
        s_inst = subst_free_type_var(s_inst, names[i], k);
        targs.push_back(TypeArg{{}, k});
        inst_label += (i ? ", " : "") + pretty(k);
      }
      ++instances;
      auto en = enumerate_values(s_inst, opts.mu_depth, opts.max_values);
      all_complete = all_complete && en.complete;
      for (auto& v : en.values) {
        auto la = normalize(app_of(ln.value(), targs, v), env, opts.fuel);
        if (!la.is_ok()) return la.error();
        auto ra = normalize(app_of(rn.value(), targs, v), env, opts.fuel);
        if (!ra.is_ok()) return ra.error();
        if (alpha_eq(la.value(), ra.value())) {
          ++checked;
        } else if (is_data_value(la.value()) && is_data_value(ra.value())) {
          return EquationReport{
              Verdict::Distinct, "extensional probe",
              "at [" + inst_label + "] argument " + pretty(v) + ": " +
                  pretty(la.value()) + " vs " + pretty(ra.value())};
        } else {
          undecided = true;  // stuck results cannot witness distinctness
        }
      }
      if (nb == 0) break;
      std::size_t i = 0;
      while (i < nb) {
        if (++idx[i] < opts.probe_types.size()) break;
        idx[i] = 0;
        ++i;
      }
      if (i == nb) break;
    }
    if (checked > 0 && all_complete && !truncated && !undecided)
      return EquationReport{
          Verdict::Equal, "extensional agreement on every probed instance",
          std::to_string(instances) + " instance(s), " +
              std::to_string(checked) + " argument(s), complete coverage"};
    return EquationReport{
        Verdict::Inconclusive, "sampled extensional agreement",
        "the sides agree on " + std::to_string(checked) +
            " sampled argument(s) but the evidence is not exhaustive"};
  }

  if (is_data_type(type) && is_data_value(ln.value()) &&
      is_data_value(rn.value()))
    return EquationReport{Verdict::Distinct, "distinct canonical values",
                          pretty(ln.value()) + " vs " + pretty(rn.value())};
  return EquationReport{Verdict::Inconclusive, "normal forms differ",
                        "no probe could decide the equation"};
}

}  // namespace nestcalc
