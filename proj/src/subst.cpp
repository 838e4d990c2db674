#include "nestcalc/subst.hpp"

#include <utility>

#include "nestcalc/util.hpp"

namespace nestcalc {

namespace {

// One recursive pass implementing the clause table in the header.  `h` is
// locally closed; `phi` occurs only as a free name, so bound references are
// never the substituted variable.
TypePtr subst2(const TypePtr& h, const std::string& phi,
               const std::vector<std::string>& alphas, const TypePtr& f) {
  auto go = [&](const TypePtr& s) { return subst2(s, phi, alphas, f); };
  auto go_all = [&](const std::vector<TypePtr>& ts) {
    std::vector<TypePtr> out;
    out.reserve(ts.size());
    for (auto& s : ts) out.push_back(go(s));
    return out;
  };
  return std::visit(
      overloaded{
          [&](const TZero&) { return h; },
          [&](const TOne&) { return h; },
          [&](const TSum& n) {
            return mk_type(TSum{go(n.lhs), go(n.rhs)}, h->loc);
          },
          [&](const TProd& n) {
            return mk_type(TProd{go(n.lhs), go(n.rhs)}, h->loc);
          },
          [&](const TVar& n) -> TypePtr {
            auto args = go_all(n.args);
            if (!n.ref && n.name == phi) {
              return subst_type_parallel(f, alphas, args);
            }
            return mk_type(TVar{n.ref, n.name, std::move(args)}, h->loc);
          },
          [&](const TNat&) { return h; },
          [&](const TMu& n) {
            return mk_type(TMu{n.fix, n.params, n.body, go_all(n.args)},
                           h->loc);
          },
          [&](const TLan& n) {
            // The body sits under the Lan's binders; open fresh so the
            // substitution cannot be captured, substitute, close again.
            std::vector<std::string> fresh;
            fresh.reserve(n.binders.size());
            for (auto& b : n.binders) fresh.push_back(fresh_name(b.hint));
            auto body = close_type(go(open_type(n.body, fresh)), fresh);
            return mk_type(TLan{n.binders, n.along, body, go_all(n.args)},
                           h->loc);
          },
      },
      h->node);
}

}  // namespace

TypePtr subst_type(const TypePtr& h, const std::string& phi,
                   const std::vector<std::string>& alphas, const TypePtr& f) {
  return subst2(h, phi, alphas, f);
}

TypePtr subst_type_parallel(const TypePtr& t,
                            const std::vector<std::string>& names,
                            const std::vector<TypePtr>& repls) {
  if (names.empty()) return t;
  // A parallel substitution cannot be expressed as a fold of single
  // substitutions when replacements mention other substituted names, so we
  // detour through fresh intermediate names that nothing can mention.
  std::vector<std::string> fresh;
  fresh.reserve(names.size());
  auto out = t;
  for (auto& name : names) {
    fresh.push_back(fresh_name(base_hint(name)));
    out = replace_free_type_var(out, name, fresh.back());
  }
  for (size_t i = 0; i < fresh.size() && i < repls.size(); ++i) {
    out = subst_free_type_var(out, fresh[i], repls[i]);
  }
  return out;
}

TypePtr subst_type_sequential(const TypePtr& t,
                              const std::vector<std::string>& names,
                              const std::vector<TypePtr>& repls) {
  auto out = t;
  for (size_t i = 0; i < names.size() && i < repls.size(); ++i) {
    out = subst_free_type_var(out, names[i], repls[i]);
  }
  return out;
}

TermPtr subst_term_type(const TermPtr& t, const std::string& name,
                        const TypePtr& repl) {
  return map_term_types(
      t, [&](const TypePtr& comp) {
        return subst_free_type_var(comp, name, repl);
      });
}

TermPtr subst_term_type_second_order(const TermPtr& t, const std::string& phi,
                                     const std::vector<std::string>& alphas,
                                     const TypePtr& f) {
  return map_term_types(t, [&](const TypePtr& comp) {
    return subst_type(comp, phi, alphas, f);
  });
}

}  // namespace nestcalc
