#pragma once
// Abstract syntax for the nested-types calculus.
//
// Representation: locally nameless.  Binder nodes carry name *hints* only;
// bound occurrences are (up, slot) de Bruijn references counting enclosing
// binder levels; free variables are plain names.  Every TypePtr/TermPtr
// handled at an API boundary is locally closed (no reference escapes the
// node's own binders), so splicing a subtree anywhere is capture-safe and no
// shift operation exists in the codebase.  Algorithms that must look under a
// binder open it with fresh free names (see open_type / open_term_types).
//
// Type and term variables live in separate de Bruijn families: a type
// reference counts only type-binder levels (Nat, mu, Lan, L's bracket group,
// application type-arguments, map/in/fold/kan component scopes), a term
// reference counts only term-binder levels (L's value variable, case branch
// binders).  An L-term opens one level of each family at once.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nestcalc {

struct Loc {
  int line = 0;
  int col = 0;
};

// One variable bound by a binder node.  `arity` is the number of type
// arguments an occurrence must be applied to (eta-long discipline).
struct BinderSlot {
  std::string hint;
  int arity = 0;
};

// A bound occurrence: skip `up` binder levels outward, take slot `slot`.
struct BoundRef {
  int up = 0;
  int slot = 0;
};

inline bool operator==(const BoundRef& a, const BoundRef& b) {
  return a.up == b.up && a.slot == b.slot;
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct TZero {};
struct TOne {};
struct TSum {
  TypePtr lhs, rhs;
};
struct TProd {
  TypePtr lhs, rhs;
};
// Variable applied to arguments.  `ref` set: bound occurrence (name keeps the
// binder hint for dumps only).  `ref` empty: free variable.  Arity is always
// args.size() by the eta-long invariant.
struct TVar {
  std::optional<BoundRef> ref;
  std::string name;
  std::vector<TypePtr> args;
};
// Transformer type: binds `binders` in source and target (one level).
struct TNat {
  std::vector<BinderSlot> binders;
  TypePtr source, target;
};
// Fixpoint applied to arguments: binds [fix, params...] in body (one level,
// slot 0 = fix with arity = params.size(), slots 1.. = params, arity 0).
// args.size() == params.size() always.
struct TMu {
  BinderSlot fix;
  std::vector<BinderSlot> params;
  TypePtr body;
  std::vector<TypePtr> args;
};
// Extension type applied to arguments: binds `binders` in every along-type
// and in body (one level).  args.size() == along.size().
struct TLan {
  std::vector<BinderSlot> binders;
  std::vector<TypePtr> along;
  TypePtr body;
  std::vector<TypePtr> args;
};

using TypeNode = std::variant<TZero, TOne, TSum, TProd, TVar, TNat, TMu, TLan>;

struct Type {
  TypeNode node;
  Loc loc{};
};

TypePtr mk_type(TypeNode node, Loc loc = {});
TypePtr t_zero();
TypePtr t_one();
TypePtr t_sum(TypePtr l, TypePtr r);
TypePtr t_prod(TypePtr l, TypePtr r);
TypePtr t_free(std::string name, std::vector<TypePtr> args = {});
TypePtr t_bound(BoundRef ref, std::string hint, std::vector<TypePtr> args = {});
TypePtr t_nat(std::vector<BinderSlot> binders, TypePtr src, TypePtr tgt);
TypePtr t_mu(BinderSlot fix, std::vector<BinderSlot> params, TypePtr body,
             std::vector<TypePtr> args);
TypePtr t_lan(std::vector<BinderSlot> binders, std::vector<TypePtr> along,
              TypePtr body, std::vector<TypePtr> args);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct EVar {
  std::optional<int> ref;  // term binder levels to skip (each binds one var)
  std::string name;
};
struct ETop {};
struct EAbsurd {
  TypePtr annot;  // result type of the vacuous branch
  TermPtr body;
};
struct EInl {
  TermPtr body;
};
struct EInr {
  TermPtr body;
};
struct ECase {
  TermPtr scrutinee;
  std::string hint_l;
  TermPtr left;  // one term-binder level
  std::string hint_r;
  TermPtr right;  // one term-binder level
};
struct EPair {
  TermPtr lhs, rhs;
};
struct EProj1 {
  TermPtr body;
};
struct EProj2 {
  TermPtr body;
};
// L[binders] x. body — opens one type level (binders) and one term level (x)
// over body simultaneously.
struct ELam {
  std::vector<BinderSlot> binders;
  std::string var_hint;
  TermPtr body;
};
// A type argument in an application: `(\params. body)` instantiating an
// arity-k binder (params empty for plain types).  body is under one type
// level whose slots are params.
struct TypeArg {
  std::vector<BinderSlot> params;
  TypePtr body;
};
// head [typeargs] arg
struct EApp {
  TermPtr head;
  std::vector<TypeArg> typeargs;
  TermPtr arg;
};
// map[phis; gammas]{H}{Fs}{Gs}: H under one level with slots [phis...,
// gammas...]; Fs[i]/Gs[i] under one level with slots [betas_i..., gammas...]
// where |betas_i| = phis[i].arity (TypeArg.params holds betas_i).
struct EMap {
  std::vector<BinderSlot> phis;
  std::vector<BinderSlot> gammas;
  TypePtr h;
  std::vector<TypeArg> fs;
  std::vector<TypeArg> gs;
};
// in{mu fix. \params. body}: body under one level, slots [fix, params...].
struct EIn {
  BinderSlot fix;
  std::vector<BinderSlot> params;
  TypePtr body;
};
// fold{mu fix. \params. body}{target}: body under [fix, params...]; target
// under its own single level with slots [params...] (fix not in scope).
struct EFold {
  BinderSlot fix;
  std::vector<BinderSlot> params;
  TypePtr body;
  TypePtr target;
};
// kan[phis; alphas]{Ks}{F}: each K under one level [alphas...]; F under one
// level [phis..., alphas...].
struct EKanIntro {
  std::vector<BinderSlot> phis;
  std::vector<BinderSlot> alphas;
  std::vector<TypePtr> ks;
  TypePtr f;
};
// cokan[phis; alphas; betas]{G}{Ks}{F} body: G under [phis..., betas...];
// each K under [alphas...]; F under [phis..., alphas...]; body is a term in
// the ambient scope (the binder groups do not scope over it).
struct EKanElim {
  std::vector<BinderSlot> phis;
  std::vector<BinderSlot> alphas;
  std::vector<BinderSlot> betas;
  TypePtr g;
  std::vector<TypePtr> ks;
  TypePtr f;
  TermPtr body;
};

using TermNode =
    std::variant<EVar, ETop, EAbsurd, EInl, EInr, ECase, EPair, EProj1,
                 EProj2, ELam, EApp, EMap, EIn, EFold, EKanIntro, EKanElim>;

struct Term {
  TermNode node;
  Loc loc{};
};

TermPtr mk_term(TermNode node, Loc loc = {});
TermPtr e_free(std::string name);
TermPtr e_bound(int up, std::string hint);
TermPtr e_top();
TermPtr e_inl(TermPtr t);
TermPtr e_inr(TermPtr t);
TermPtr e_pair(TermPtr l, TermPtr r);
TermPtr e_proj1(TermPtr t);
TermPtr e_proj2(TermPtr t);

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

// `type Name p1 .. pn = body` — body under one level with slots = params.
struct TypeDecl {
  std::string name;
  std::vector<BinderSlot> params;
  TypePtr body;
  Loc loc{};
};

// `term Name : type = def` (both in the ambient declaration context).
struct TermDecl {
  std::string name;
  TypePtr type;
  TermPtr def;
  Loc loc{};
};

// `context [gamma ; phi ; x : T, ...]` — sets the ambient judgment contexts
// for subsequent declarations.  gamma/phi entries carry arities.
struct ContextDecl {
  std::vector<BinderSlot> gamma;
  std::vector<BinderSlot> phi;
  std::vector<std::pair<std::string, TypePtr>> delta;
  Loc loc{};
};

struct PragmaDecl {
  std::string key;    // currently only "gadt"
  std::string value;  // "on" | "off"
  Loc loc{};
};

using Decl = std::variant<TypeDecl, TermDecl, ContextDecl, PragmaDecl>;

struct ParsedFile {
  std::string path;
  std::vector<Decl> decls;
};

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

// Fresh name generation: appends "%N" (N from a process-global counter) to a
// base hint.  '%' is not a lexer identifier character, so generated names can
// never collide with user-written ones.
std::string fresh_name(const std::string& base);
// Strip a "%N" suffix back to the base hint (used by the pretty-printer).
std::string base_hint(const std::string& name);

// Replace references to binder level `depth` by free variables `names`
// (one per slot).  names.size() must cover every slot referenced.
TypePtr open_type(const TypePtr& t, const std::vector<std::string>& names,
                  int depth = 0);
// Inverse of open_type: capture the named free variables as references to
// binder level `depth`.
TypePtr close_type(const TypePtr& t, const std::vector<std::string>& names,
                   int depth = 0);

// Same pair for the types embedded in a term (crossing L binders etc.).
TermPtr open_term_types(const TermPtr& t, const std::vector<std::string>& names,
                        int depth = 0);
TermPtr close_term_types(const TermPtr& t,
                         const std::vector<std::string>& names, int depth = 0);

// Rewrite every embedded type component of a term (annotations, type
// arguments, map/in/fold/kan signatures) with `fn`.  Each component is passed
// intact and locally closed from the term's perspective, so free-name
// substitutions applied through this hook are capture-safe at any depth.
TermPtr map_term_types(const TermPtr& t,
                       const std::function<TypePtr(const TypePtr&)>& fn);

// Open/close the single term variable bound at level `depth`.
TermPtr open_term_var(const TermPtr& t, const std::string& name,
                      int depth = 0);
TermPtr close_term_var(const TermPtr& t, const std::string& name,
                       int depth = 0);

// Capture-free substitution of a term for a free term variable.
TermPtr subst_term_var(const TermPtr& t, const std::string& name,
                       const TermPtr& replacement);

// Substitute a type for an arity-0 free type variable (occurrences carry no
// arguments).  Capture-free: bound references never collide with names.
TypePtr subst_free_type_var(const TypePtr& t, const std::string& name,
                            const TypePtr& replacement);
// Rename the head of every application of free variable `name`, keeping its
// arguments (higher-arity variable-for-variable replacement).
TypePtr replace_free_type_var(const TypePtr& t, const std::string& name,
                              const std::string& newname);

// Alpha-equivalence: structural equality ignoring binder hints and the name
// field of bound occurrences.  Free variables compare by name.
bool alpha_eq(const TypePtr& a, const TypePtr& b);
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Canonical key strings (hints erased); alpha-equivalent values share keys.
// Used for memoization and registry lookups.
std::string type_key(const TypePtr& t);
std::string term_key(const TermPtr& t);

// Free variables in first-occurrence order, with the applied arity observed
// at each occurrence (eta-long: every occurrence of a variable shows its
// arity).  Inconsistent arities across occurrences surface during kinding.
std::vector<std::pair<std::string, int>> free_type_vars(const TypePtr& t);
std::vector<std::pair<std::string, int>> free_type_vars_of_term(
    const TermPtr& t);
std::vector<std::string> free_term_vars(const TermPtr& t);

// Structural validation: local closedness (no reference escapes), eta-long
// arity coherence on bound occurrences, and argument-count invariants on
// mu/Lan applications.  Returns a diagnostic for the first violation.
std::optional<std::string> validate_type(const TypePtr& t);
std::optional<std::string> validate_term(const TermPtr& t);

}  // namespace nestcalc
