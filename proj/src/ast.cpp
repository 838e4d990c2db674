#include "nestcalc/ast.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nestcalc/util.hpp"

namespace nestcalc {

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

TypePtr mk_type(TypeNode node, Loc loc) {
  auto t = std::make_shared<Type>();
  const_cast<Type&>(*t).node = std::move(node);
  const_cast<Type&>(*t).loc = loc;
  return t;
}

TypePtr t_zero() { return mk_type(TZero{}); }
TypePtr t_one() { return mk_type(TOne{}); }
TypePtr t_sum(TypePtr l, TypePtr r) {
  return mk_type(TSum{std::move(l), std::move(r)});
}
TypePtr t_prod(TypePtr l, TypePtr r) {
  return mk_type(TProd{std::move(l), std::move(r)});
}
TypePtr t_free(std::string name, std::vector<TypePtr> args) {
  return mk_type(TVar{std::nullopt, std::move(name), std::move(args)});
}
TypePtr t_bound(BoundRef ref, std::string hint, std::vector<TypePtr> args) {
  return mk_type(TVar{ref, std::move(hint), std::move(args)});
}
TypePtr t_nat(std::vector<BinderSlot> binders, TypePtr src, TypePtr tgt) {
  return mk_type(TNat{std::move(binders), std::move(src), std::move(tgt)});
}
TypePtr t_mu(BinderSlot fix, std::vector<BinderSlot> params, TypePtr body,
             std::vector<TypePtr> args) {
  fix.arity = static_cast<int>(params.size());
  return mk_type(
      TMu{std::move(fix), std::move(params), std::move(body), std::move(args)});
}
TypePtr t_lan(std::vector<BinderSlot> binders, std::vector<TypePtr> along,
              TypePtr body, std::vector<TypePtr> args) {
  return mk_type(TLan{std::move(binders), std::move(along), std::move(body),
                      std::move(args)});
}

TermPtr mk_term(TermNode node, Loc loc) {
  auto t = std::make_shared<Term>();
  const_cast<Term&>(*t).node = std::move(node);
  const_cast<Term&>(*t).loc = loc;
  return t;
}

TermPtr e_free(std::string name) {
  return mk_term(EVar{std::nullopt, std::move(name)});
}
TermPtr e_bound(int up, std::string hint) {
  return mk_term(EVar{up, std::move(hint)});
}
TermPtr e_top() { return mk_term(ETop{}); }
TermPtr e_inl(TermPtr t) { return mk_term(EInl{std::move(t)}); }
TermPtr e_inr(TermPtr t) { return mk_term(EInr{std::move(t)}); }
TermPtr e_pair(TermPtr l, TermPtr r) {
  return mk_term(EPair{std::move(l), std::move(r)});
}
TermPtr e_proj1(TermPtr t) { return mk_term(EProj1{std::move(t)}); }
TermPtr e_proj2(TermPtr t) { return mk_term(EProj2{std::move(t)}); }

// ---------------------------------------------------------------------------
// Fresh names
// ---------------------------------------------------------------------------

std::string fresh_name(const std::string& base) {
  static std::atomic<unsigned long> counter{0};
  return base_hint(base) + "%" + std::to_string(counter.fetch_add(1));
}

std::string base_hint(const std::string& name) {
  auto pos = name.find('%');
  std::string base = pos == std::string::npos ? name : name.substr(0, pos);
  return base.empty() ? "x" : base;
}

// ---------------------------------------------------------------------------
// Generic traversals
// ---------------------------------------------------------------------------

namespace {

// Callback on variable occurrences.  Receives the binder depth at the
// occurrence and the already-transformed argument list; returns a full
// replacement or nullopt to keep the (rebuilt) variable.
using TypeVarFn = std::function<std::optional<TypePtr>(
    int depth, const TVar& v, const std::vector<TypePtr>& args)>;

TypePtr walk_type(const TypePtr& t, int d, const TypeVarFn& fn) {
  return std::visit(
      overloaded{
          [&](const TZero&) { return t; },
          [&](const TOne&) { return t; },
          [&](const TSum& n) {
            return mk_type(TSum{walk_type(n.lhs, d, fn), walk_type(n.rhs, d, fn)},
                           t->loc);
          },
          [&](const TProd& n) {
            return mk_type(
                TProd{walk_type(n.lhs, d, fn), walk_type(n.rhs, d, fn)}, t->loc);
          },
          [&](const TVar& v) {
            std::vector<TypePtr> args;
            args.reserve(v.args.size());
            for (auto& a : v.args) args.push_back(walk_type(a, d, fn));
            if (auto r = fn(d, v, args)) return *r;
            return mk_type(TVar{v.ref, v.name, std::move(args)}, t->loc);
          },
          [&](const TNat& n) {
            return mk_type(TNat{n.binders, walk_type(n.source, d + 1, fn),
                                walk_type(n.target, d + 1, fn)},
                           t->loc);
          },
          [&](const TMu& n) {
            std::vector<TypePtr> args;
            for (auto& a : n.args) args.push_back(walk_type(a, d, fn));
            return mk_type(TMu{n.fix, n.params, walk_type(n.body, d + 1, fn),
                               std::move(args)},
                           t->loc);
          },
          [&](const TLan& n) {
            std::vector<TypePtr> along;
            for (auto& k : n.along) along.push_back(walk_type(k, d + 1, fn));
            std::vector<TypePtr> args;
            for (auto& a : n.args) args.push_back(walk_type(a, d, fn));
            return mk_type(TLan{n.binders, std::move(along),
                                walk_type(n.body, d + 1, fn), std::move(args)},
                           t->loc);
          },
      },
      t->node);
}

using TermVarFn =
    std::function<std::optional<TermPtr>(int edepth, const EVar& v)>;

// Transformer applied to each embedded type component of a term, given the
// number of type-binder levels between the term root and that component.
using TypeCompFn = std::function<TypePtr(const TypePtr&, int depth)>;

// Walk a term, applying `tfn` to embedded type components (threading the
// type-binder depth) and `efn` to term variables (threading the term-binder
// depth).
TermPtr walk_term(const TermPtr& t, int td, int ed, const TypeCompFn& tfn,
                  const TermVarFn& efn) {
  auto wty = [&](const TypePtr& ty, int depth) {
    return tfn ? tfn(ty, depth) : ty;
  };
  auto go = [&](const TermPtr& s) { return walk_term(s, td, ed, tfn, efn); };
  return std::visit(
      overloaded{
          [&](const EVar& v) -> TermPtr {
            if (efn) {
              if (auto r = efn(ed, v)) return *r;
            }
            return t;
          },
          [&](const ETop&) { return t; },
          [&](const EAbsurd& n) {
            return mk_term(EAbsurd{wty(n.annot, td), go(n.body)}, t->loc);
          },
          [&](const EInl& n) { return mk_term(EInl{go(n.body)}, t->loc); },
          [&](const EInr& n) { return mk_term(EInr{go(n.body)}, t->loc); },
          [&](const ECase& n) {
            return mk_term(
                ECase{go(n.scrutinee), n.hint_l,
                      walk_term(n.left, td, ed + 1, tfn, efn), n.hint_r,
                      walk_term(n.right, td, ed + 1, tfn, efn)},
                t->loc);
          },
          [&](const EPair& n) {
            return mk_term(EPair{go(n.lhs), go(n.rhs)}, t->loc);
          },
          [&](const EProj1& n) { return mk_term(EProj1{go(n.body)}, t->loc); },
          [&](const EProj2& n) { return mk_term(EProj2{go(n.body)}, t->loc); },
          [&](const ELam& n) {
            return mk_term(ELam{n.binders, n.var_hint,
                                walk_term(n.body, td + 1, ed + 1, tfn, efn)},
                           t->loc);
          },
          [&](const EApp& n) {
            std::vector<TypeArg> tas;
            tas.reserve(n.typeargs.size());
            for (auto& ta : n.typeargs)
              tas.push_back(TypeArg{ta.params, wty(ta.body, td + 1)});
            return mk_term(EApp{go(n.head), std::move(tas), go(n.arg)}, t->loc);
          },
          [&](const EMap& n) {
            auto wabs = [&](const std::vector<TypeArg>& xs) {
              std::vector<TypeArg> out;
              out.reserve(xs.size());
              for (auto& x : xs)
                out.push_back(TypeArg{x.params, wty(x.body, td + 1)});
              return out;
            };
            return mk_term(EMap{n.phis, n.gammas, wty(n.h, td + 1), wabs(n.fs),
                                wabs(n.gs)},
                           t->loc);
          },
          [&](const EIn& n) {
            return mk_term(EIn{n.fix, n.params, wty(n.body, td + 1)}, t->loc);
          },
          [&](const EFold& n) {
            return mk_term(EFold{n.fix, n.params, wty(n.body, td + 1),
                                 wty(n.target, td + 1)},
                           t->loc);
          },
          [&](const EKanIntro& n) {
            std::vector<TypePtr> ks;
            for (auto& k : n.ks) ks.push_back(wty(k, td + 1));
            return mk_term(
                EKanIntro{n.phis, n.alphas, std::move(ks), wty(n.f, td + 1)},
                t->loc);
          },
          [&](const EKanElim& n) {
            std::vector<TypePtr> ks;
            for (auto& k : n.ks) ks.push_back(wty(k, td + 1));
            return mk_term(EKanElim{n.phis, n.alphas, n.betas, wty(n.g, td + 1),
                                    std::move(ks), wty(n.f, td + 1),
                                    go(n.body)},
                           t->loc);
          },
      },
      t->node);
}

}  // namespace

// ---------------------------------------------------------------------------
// Open / close / substitution
// ---------------------------------------------------------------------------

TypePtr open_type(const TypePtr& t, const std::vector<std::string>& names,
                  int depth) {
  return walk_type(t, depth,
                   [&](int d, const TVar& v,
                       const std::vector<TypePtr>& args) -> std::optional<TypePtr> {
                     if (v.ref && v.ref->up == d) {
                       return t_free(names.at(v.ref->slot), args);
                     }
                     return std::nullopt;
                   });
}

TypePtr close_type(const TypePtr& t, const std::vector<std::string>& names,
                   int depth) {
  return walk_type(t, depth,
                   [&](int d, const TVar& v,
                       const std::vector<TypePtr>& args) -> std::optional<TypePtr> {
                     if (v.ref) return std::nullopt;
                     for (size_t i = 0; i < names.size(); ++i) {
                       if (v.name == names[i]) {
                         return t_bound(BoundRef{d, static_cast<int>(i)},
                                        base_hint(v.name), args);
                       }
                     }
                     return std::nullopt;
                   });
}

TermPtr open_term_types(const TermPtr& t, const std::vector<std::string>& names,
                        int depth) {
  return walk_term(t, depth, 0,
                   [&](const TypePtr& comp, int d) {
                     return open_type(comp, names, d);
                   },
                   nullptr);
}

TermPtr close_term_types(const TermPtr& t,
                         const std::vector<std::string>& names, int depth) {
  return walk_term(t, depth, 0,
                   [&](const TypePtr& comp, int d) {
                     return close_type(comp, names, d);
                   },
                   nullptr);
}

TermPtr map_term_types(const TermPtr& t,
                       const std::function<TypePtr(const TypePtr&)>& fn) {
  return walk_term(t, 0, 0,
                   [&](const TypePtr& comp, int) { return fn(comp); }, nullptr);
}

TermPtr open_term_var(const TermPtr& t, const std::string& name, int depth) {
  return walk_term(t, 0, depth, nullptr,
                   [&](int ed, const EVar& v) -> std::optional<TermPtr> {
                     if (v.ref && *v.ref == ed) return e_free(name);
                     return std::nullopt;
                   });
}

TermPtr close_term_var(const TermPtr& t, const std::string& name, int depth) {
  return walk_term(t, 0, depth, nullptr,
                   [&](int ed, const EVar& v) -> std::optional<TermPtr> {
                     if (!v.ref && v.name == name)
                       return e_bound(ed, base_hint(name));
                     return std::nullopt;
                   });
}

TermPtr subst_term_var(const TermPtr& t, const std::string& name,
                       const TermPtr& replacement) {
  return walk_term(t, 0, 0, nullptr,
                   [&](int, const EVar& v) -> std::optional<TermPtr> {
                     if (!v.ref && v.name == name) return replacement;
                     return std::nullopt;
                   });
}

TypePtr subst_free_type_var(const TypePtr& t, const std::string& name,
                            const TypePtr& replacement) {
  return walk_type(t, 0,
                   [&](int, const TVar& v,
                       const std::vector<TypePtr>&) -> std::optional<TypePtr> {
                     if (!v.ref && v.name == name) return replacement;
                     return std::nullopt;
                   });
}

TypePtr replace_free_type_var(const TypePtr& t, const std::string& name,
                              const std::string& newname) {
  return walk_type(t, 0,
                   [&](int, const TVar& v,
                       const std::vector<TypePtr>& args) -> std::optional<TypePtr> {
                     if (!v.ref && v.name == name) return t_free(newname, args);
                     return std::nullopt;
                   });
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

namespace {

bool slots_eq(const std::vector<BinderSlot>& a,
              const std::vector<BinderSlot>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].arity != b[i].arity) return false;
  return true;
}

bool types_eq(const std::vector<TypePtr>& a, const std::vector<TypePtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!alpha_eq(a[i], b[i])) return false;
  return true;
}

bool typeargs_eq(const std::vector<TypeArg>& a, const std::vector<TypeArg>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!slots_eq(a[i].params, b[i].params)) return false;
    if (!alpha_eq(a[i].body, b[i].body)) return false;
  }
  return true;
}

}  // namespace

bool alpha_eq(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const TZero&) { return true; },
          [&](const TOne&) { return true; },
          [&](const TSum& x) {
            auto& y = std::get<TSum>(b->node);
            return alpha_eq(x.lhs, y.lhs) && alpha_eq(x.rhs, y.rhs);
          },
          [&](const TProd& x) {
            auto& y = std::get<TProd>(b->node);
            return alpha_eq(x.lhs, y.lhs) && alpha_eq(x.rhs, y.rhs);
          },
          [&](const TVar& x) {
            auto& y = std::get<TVar>(b->node);
            if (x.ref.has_value() != y.ref.has_value()) return false;
            if (x.ref && !(*x.ref == *y.ref)) return false;
            if (!x.ref && x.name != y.name) return false;
            return types_eq(x.args, y.args);
          },
          [&](const TNat& x) {
            auto& y = std::get<TNat>(b->node);
            return slots_eq(x.binders, y.binders) &&
                   alpha_eq(x.source, y.source) && alpha_eq(x.target, y.target);
          },
          [&](const TMu& x) {
            auto& y = std::get<TMu>(b->node);
            return x.params.size() == y.params.size() &&
                   alpha_eq(x.body, y.body) && types_eq(x.args, y.args);
          },
          [&](const TLan& x) {
            auto& y = std::get<TLan>(b->node);
            return slots_eq(x.binders, y.binders) &&
                   types_eq(x.along, y.along) && alpha_eq(x.body, y.body) &&
                   types_eq(x.args, y.args);
          },
      },
      a->node);
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const EVar& x) {
            auto& y = std::get<EVar>(b->node);
            if (x.ref.has_value() != y.ref.has_value()) return false;
            if (x.ref) return *x.ref == *y.ref;
            return x.name == y.name;
          },
          [&](const ETop&) { return true; },
          [&](const EAbsurd& x) {
            auto& y = std::get<EAbsurd>(b->node);
            return alpha_eq(x.annot, y.annot) && alpha_eq(x.body, y.body);
          },
          [&](const EInl& x) {
            return alpha_eq(x.body, std::get<EInl>(b->node).body);
          },
          [&](const EInr& x) {
            return alpha_eq(x.body, std::get<EInr>(b->node).body);
          },
          [&](const ECase& x) {
            auto& y = std::get<ECase>(b->node);
            return alpha_eq(x.scrutinee, y.scrutinee) &&
                   alpha_eq(x.left, y.left) && alpha_eq(x.right, y.right);
          },
          [&](const EPair& x) {
            auto& y = std::get<EPair>(b->node);
            return alpha_eq(x.lhs, y.lhs) && alpha_eq(x.rhs, y.rhs);
          },
          [&](const EProj1& x) {
            return alpha_eq(x.body, std::get<EProj1>(b->node).body);
          },
          [&](const EProj2& x) {
            return alpha_eq(x.body, std::get<EProj2>(b->node).body);
          },
          [&](const ELam& x) {
            auto& y = std::get<ELam>(b->node);
            return slots_eq(x.binders, y.binders) && alpha_eq(x.body, y.body);
          },
          [&](const EApp& x) {
            auto& y = std::get<EApp>(b->node);
            return alpha_eq(x.head, y.head) &&
                   typeargs_eq(x.typeargs, y.typeargs) && alpha_eq(x.arg, y.arg);
          },
          [&](const EMap& x) {
            auto& y = std::get<EMap>(b->node);
            return slots_eq(x.phis, y.phis) && slots_eq(x.gammas, y.gammas) &&
                   alpha_eq(x.h, y.h) && typeargs_eq(x.fs, y.fs) &&
                   typeargs_eq(x.gs, y.gs);
          },
          [&](const EIn& x) {
            auto& y = std::get<EIn>(b->node);
            return x.params.size() == y.params.size() && alpha_eq(x.body, y.body);
          },
          [&](const EFold& x) {
            auto& y = std::get<EFold>(b->node);
            return x.params.size() == y.params.size() &&
                   alpha_eq(x.body, y.body) && alpha_eq(x.target, y.target);
          },
          [&](const EKanIntro& x) {
            auto& y = std::get<EKanIntro>(b->node);
            return slots_eq(x.phis, y.phis) && slots_eq(x.alphas, y.alphas) &&
                   types_eq(x.ks, y.ks) && alpha_eq(x.f, y.f);
          },
          [&](const EKanElim& x) {
            auto& y = std::get<EKanElim>(b->node);
            return slots_eq(x.phis, y.phis) && slots_eq(x.alphas, y.alphas) &&
                   slots_eq(x.betas, y.betas) && alpha_eq(x.g, y.g) &&
                   types_eq(x.ks, y.ks) && alpha_eq(x.f, y.f) &&
                   alpha_eq(x.body, y.body);
          },
      },
      a->node);
}

// ---------------------------------------------------------------------------
// Canonical keys
// ---------------------------------------------------------------------------

namespace {

void key_slots(std::ostream& os, const std::vector<BinderSlot>& slots) {
  os << '[';
  for (auto& s : slots) os << s.arity << ',';
  os << ']';
}

void key_type(std::ostream& os, const TypePtr& t) {
  std::visit(
      overloaded{
          [&](const TZero&) { os << 'Z'; },
          [&](const TOne&) { os << 'U'; },
          [&](const TSum& n) {
            os << "(+";
            key_type(os, n.lhs);
            os << ' ';
            key_type(os, n.rhs);
            os << ')';
          },
          [&](const TProd& n) {
            os << "(*";
            key_type(os, n.lhs);
            os << ' ';
            key_type(os, n.rhs);
            os << ')';
          },
          [&](const TVar& v) {
            if (v.ref)
              os << "(b" << v.ref->up << '.' << v.ref->slot;
            else
              os << "(f" << v.name;
            for (auto& a : v.args) {
              os << ' ';
              key_type(os, a);
            }
            os << ')';
          },
          [&](const TNat& n) {
            os << "(N";
            key_slots(os, n.binders);
            key_type(os, n.source);
            os << ' ';
            key_type(os, n.target);
            os << ')';
          },
          [&](const TMu& n) {
            os << "(M" << n.params.size() << ' ';
            key_type(os, n.body);
            for (auto& a : n.args) {
              os << ' ';
              key_type(os, a);
            }
            os << ')';
          },
          [&](const TLan& n) {
            os << "(L";
            key_slots(os, n.binders);
            os << '{';
            for (auto& k : n.along) {
              key_type(os, k);
              os << ',';
            }
            os << '}';
            key_type(os, n.body);
            for (auto& a : n.args) {
              os << ' ';
              key_type(os, a);
            }
            os << ')';
          },
      },
      t->node);
}

void key_typeargs(std::ostream& os, const std::vector<TypeArg>& xs) {
  os << '{';
  for (auto& x : xs) {
    key_slots(os, x.params);
    key_type(os, x.body);
    os << ',';
  }
  os << '}';
}

void key_term(std::ostream& os, const TermPtr& t) {
  std::visit(
      overloaded{
          [&](const EVar& v) {
            if (v.ref)
              os << "(v" << *v.ref << ')';
            else
              os << "(v'" << v.name << ')';
          },
          [&](const ETop&) { os << 'T'; },
          [&](const EAbsurd& n) {
            os << "(abs ";
            key_type(os, n.annot);
            os << ' ';
            key_term(os, n.body);
            os << ')';
          },
          [&](const EInl& n) {
            os << "(l ";
            key_term(os, n.body);
            os << ')';
          },
          [&](const EInr& n) {
            os << "(r ";
            key_term(os, n.body);
            os << ')';
          },
          [&](const ECase& n) {
            os << "(c ";
            key_term(os, n.scrutinee);
            os << ' ';
            key_term(os, n.left);
            os << ' ';
            key_term(os, n.right);
            os << ')';
          },
          [&](const EPair& n) {
            os << "(p ";
            key_term(os, n.lhs);
            os << ' ';
            key_term(os, n.rhs);
            os << ')';
          },
          [&](const EProj1& n) {
            os << "(p1 ";
            key_term(os, n.body);
            os << ')';
          },
          [&](const EProj2& n) {
            os << "(p2 ";
            key_term(os, n.body);
            os << ')';
          },
          [&](const ELam& n) {
            os << "(lam";
            key_slots(os, n.binders);
            key_term(os, n.body);
            os << ')';
          },
          [&](const EApp& n) {
            os << "(a ";
            key_term(os, n.head);
            key_typeargs(os, n.typeargs);
            key_term(os, n.arg);
            os << ')';
          },
          [&](const EMap& n) {
            os << "(map";
            key_slots(os, n.phis);
            key_slots(os, n.gammas);
            key_type(os, n.h);
            key_typeargs(os, n.fs);
            key_typeargs(os, n.gs);
            os << ')';
          },
          [&](const EIn& n) {
            os << "(in" << n.params.size() << ' ';
            key_type(os, n.body);
            os << ')';
          },
          [&](const EFold& n) {
            os << "(fold" << n.params.size() << ' ';
            key_type(os, n.body);
            os << ' ';
            key_type(os, n.target);
            os << ')';
          },
          [&](const EKanIntro& n) {
            os << "(kan";
            key_slots(os, n.phis);
            key_slots(os, n.alphas);
            os << '{';
            for (auto& k : n.ks) {
              key_type(os, k);
              os << ',';
            }
            os << '}';
            key_type(os, n.f);
            os << ')';
          },
          [&](const EKanElim& n) {
            os << "(cok";
            key_slots(os, n.phis);
            key_slots(os, n.alphas);
            key_slots(os, n.betas);
            key_type(os, n.g);
            os << '{';
            for (auto& k : n.ks) {
              key_type(os, k);
              os << ',';
            }
            os << '}';
            key_type(os, n.f);
            os << ' ';
            key_term(os, n.body);
            os << ')';
          },
      },
      t->node);
}

}  // namespace

std::string type_key(const TypePtr& t) {
  std::ostringstream os;
  key_type(os, t);
  return os.str();
}

std::string term_key(const TermPtr& t) {
  std::ostringstream os;
  key_term(os, t);
  return os.str();
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

namespace {

void collect_free(const TypePtr& t,
                  std::vector<std::pair<std::string, int>>& out,
                  std::set<std::string>& seen) {
  walk_type(t, 0,
            [&](int, const TVar& v,
                const std::vector<TypePtr>&) -> std::optional<TypePtr> {
              if (!v.ref && !seen.count(v.name)) {
                seen.insert(v.name);
                out.emplace_back(v.name, static_cast<int>(v.args.size()));
              }
              return std::nullopt;
            });
}

}  // namespace

std::vector<std::pair<std::string, int>> free_type_vars(const TypePtr& t) {
  std::vector<std::pair<std::string, int>> out;
  std::set<std::string> seen;
  collect_free(t, out, seen);
  return out;
}

std::vector<std::pair<std::string, int>> free_type_vars_of_term(
    const TermPtr& t) {
  std::vector<std::pair<std::string, int>> out;
  std::set<std::string> seen;
  walk_term(t, 0, 0,
            [&](const TypePtr& comp, int) {
              for (auto& [name, arity] : free_type_vars(comp)) {
                if (!seen.count(name)) {
                  seen.insert(name);
                  out.emplace_back(name, arity);
                }
              }
              return comp;
            },
            nullptr);
  return out;
}

std::vector<std::string> free_term_vars(const TermPtr& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  walk_term(t, 0, 0, nullptr,
            [&](int, const EVar& v) -> std::optional<TermPtr> {
              if (!v.ref && !seen.count(v.name)) {
                seen.insert(v.name);
                out.push_back(v.name);
              }
              return std::nullopt;
            });
  return out;
}

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

namespace {

// Arity of each slot for the binder levels currently in scope, innermost
// first.
using Scope = std::vector<std::vector<int>>;

std::vector<int> slot_arities(const std::vector<BinderSlot>& slots) {
  std::vector<int> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(s.arity);
  return out;
}

std::optional<std::string> check_type(const TypePtr& t, Scope& scope);

std::optional<std::string> check_types(const std::vector<TypePtr>& ts,
                                       Scope& scope) {
  for (auto& t : ts)
    if (auto e = check_type(t, scope)) return e;
  return std::nullopt;
}

std::optional<std::string> check_type(const TypePtr& t, Scope& scope) {
  return std::visit(
      overloaded{
          [&](const TZero&) -> std::optional<std::string> {
            return std::nullopt;
          },
          [&](const TOne&) -> std::optional<std::string> {
            return std::nullopt;
          },
          [&](const TSum& n) -> std::optional<std::string> {
            if (auto e = check_type(n.lhs, scope)) return e;
            return check_type(n.rhs, scope);
          },
          [&](const TProd& n) -> std::optional<std::string> {
            if (auto e = check_type(n.lhs, scope)) return e;
            return check_type(n.rhs, scope);
          },
          [&](const TVar& v) -> std::optional<std::string> {
            if (v.ref) {
              if (v.ref->up < 0 || v.ref->up >= static_cast<int>(scope.size()))
                return "dangling type reference (up=" +
                       std::to_string(v.ref->up) + ")";
              auto& slots = scope[scope.size() - 1 - v.ref->up];
              if (v.ref->slot < 0 ||
                  v.ref->slot >= static_cast<int>(slots.size()))
                return "bad slot " + std::to_string(v.ref->slot);
              if (static_cast<int>(v.args.size()) != slots[v.ref->slot])
                return "variable '" + v.name + "' of arity " +
                       std::to_string(slots[v.ref->slot]) + " applied to " +
                       std::to_string(v.args.size()) + " arguments";
            }
            return check_types(v.args, scope);
          },
          [&](const TNat& n) -> std::optional<std::string> {
            scope.push_back(slot_arities(n.binders));
            if (auto e = check_type(n.source, scope)) return e;
            if (auto e = check_type(n.target, scope)) return e;
            scope.pop_back();
            return std::nullopt;
          },
          [&](const TMu& n) -> std::optional<std::string> {
            if (n.fix.arity != static_cast<int>(n.params.size()))
              return "fixpoint arity does not match parameter count";
            if (n.args.size() != n.params.size())
              return "fixpoint applied to " + std::to_string(n.args.size()) +
                     " arguments, expected " + std::to_string(n.params.size());
            std::vector<int> slots{n.fix.arity};
            for (auto& p : n.params) slots.push_back(p.arity);
            scope.push_back(std::move(slots));
            if (auto e = check_type(n.body, scope)) return e;
            scope.pop_back();
            return check_types(n.args, scope);
          },
          [&](const TLan& n) -> std::optional<std::string> {
            if (n.args.size() != n.along.size())
              return "extension type applied to " +
                     std::to_string(n.args.size()) + " arguments, expected " +
                     std::to_string(n.along.size());
            scope.push_back(slot_arities(n.binders));
            if (auto e = check_types(n.along, scope)) return e;
            if (auto e = check_type(n.body, scope)) return e;
            scope.pop_back();
            return check_types(n.args, scope);
          },
      },
      t->node);
}

std::optional<std::string> check_term(const TermPtr& t, Scope& tscope,
                                      int escope) {
  auto ty = [&](const TypePtr& x,
                std::vector<int> slots) -> std::optional<std::string> {
    tscope.push_back(std::move(slots));
    auto e = check_type(x, tscope);
    tscope.pop_back();
    return e;
  };
  return std::visit(
      overloaded{
          [&](const EVar& v) -> std::optional<std::string> {
            if (v.ref && (*v.ref < 0 || *v.ref >= escope))
              return "dangling term reference";
            return std::nullopt;
          },
          [&](const ETop&) -> std::optional<std::string> {
            return std::nullopt;
          },
          [&](const EAbsurd& n) -> std::optional<std::string> {
            if (auto e = check_type(n.annot, tscope)) return e;
            return check_term(n.body, tscope, escope);
          },
          [&](const EInl& n) { return check_term(n.body, tscope, escope); },
          [&](const EInr& n) { return check_term(n.body, tscope, escope); },
          [&](const ECase& n) -> std::optional<std::string> {
            if (auto e = check_term(n.scrutinee, tscope, escope)) return e;
            if (auto e = check_term(n.left, tscope, escope + 1)) return e;
            return check_term(n.right, tscope, escope + 1);
          },
          [&](const EPair& n) -> std::optional<std::string> {
            if (auto e = check_term(n.lhs, tscope, escope)) return e;
            return check_term(n.rhs, tscope, escope);
          },
          [&](const EProj1& n) { return check_term(n.body, tscope, escope); },
          [&](const EProj2& n) { return check_term(n.body, tscope, escope); },
          [&](const ELam& n) -> std::optional<std::string> {
            tscope.push_back(slot_arities(n.binders));
            auto e = check_term(n.body, tscope, escope + 1);
            tscope.pop_back();
            return e;
          },
          [&](const EApp& n) -> std::optional<std::string> {
            if (auto e = check_term(n.head, tscope, escope)) return e;
            for (auto& ta : n.typeargs)
              if (auto e = ty(ta.body, slot_arities(ta.params))) return e;
            return check_term(n.arg, tscope, escope);
          },
          [&](const EMap& n) -> std::optional<std::string> {
            if (n.fs.size() != n.phis.size() || n.gs.size() != n.phis.size())
              return "map carries " + std::to_string(n.fs.size()) + "/" +
                     std::to_string(n.gs.size()) +
                     " source/target types for " +
                     std::to_string(n.phis.size()) + " substituted variables";
            std::vector<int> hslots = slot_arities(n.phis);
            for (auto& g : n.gammas) hslots.push_back(g.arity);
            if (auto e = ty(n.h, hslots)) return e;
            for (size_t i = 0; i < n.fs.size(); ++i) {
              for (auto* group : {&n.fs[i], &n.gs[i]}) {
                if (static_cast<int>(group->params.size()) != n.phis[i].arity)
                  return "map component binder count does not match the "
                         "substituted variable's arity";
                std::vector<int> slots = slot_arities(group->params);
                for (auto& g : n.gammas) slots.push_back(g.arity);
                if (auto e = ty(group->body, std::move(slots))) return e;
              }
            }
            return std::nullopt;
          },
          [&](const EIn& n) -> std::optional<std::string> {
            std::vector<int> slots{static_cast<int>(n.params.size())};
            for (auto& p : n.params) slots.push_back(p.arity);
            return ty(n.body, std::move(slots));
          },
          [&](const EFold& n) -> std::optional<std::string> {
            std::vector<int> slots{static_cast<int>(n.params.size())};
            for (auto& p : n.params) slots.push_back(p.arity);
            if (auto e = ty(n.body, std::move(slots))) return e;
            return ty(n.target, slot_arities(n.params));
          },
          [&](const EKanIntro& n) -> std::optional<std::string> {
            for (auto& k : n.ks)
              if (auto e = ty(k, slot_arities(n.alphas))) return e;
            std::vector<int> fslots = slot_arities(n.phis);
            for (auto& a : n.alphas) fslots.push_back(a.arity);
            return ty(n.f, std::move(fslots));
          },
          [&](const EKanElim& n) -> std::optional<std::string> {
            std::vector<int> gslots = slot_arities(n.phis);
            for (auto& b : n.betas) gslots.push_back(b.arity);
            if (auto e = ty(n.g, std::move(gslots))) return e;
            for (auto& k : n.ks)
              if (auto e = ty(k, slot_arities(n.alphas))) return e;
            std::vector<int> fslots = slot_arities(n.phis);
            for (auto& a : n.alphas) fslots.push_back(a.arity);
            if (auto e = ty(n.f, std::move(fslots))) return e;
            return check_term(n.body, tscope, escope);
          },
      },
      t->node);
}

}  // namespace

std::optional<std::string> validate_type(const TypePtr& t) {
  Scope scope;
  return check_type(t, scope);
}

std::optional<std::string> validate_term(const TermPtr& t) {
  Scope scope;
  return check_term(t, scope, 0);
}

}  // namespace nestcalc
