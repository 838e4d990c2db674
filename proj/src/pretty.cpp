#include "nestcalc/pretty.hpp"

#include <set>
#include <sstream>

#include "nestcalc/util.hpp"

namespace nestcalc {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "type", "term", "pragma", "context", "mu",   "Nat",  "Lan",
      "L",    "map",  "in",     "fold",    "kan",  "cokan", "case",
      "of",   "inl",  "inr",    "fst",     "snd",  "absurd", "top"};
  return kw;
}

// Precedence levels: 0 sum / trailing forms, 1 product / prefix, 2
// application, 3 atom.
class Printer {
 public:
  std::string show_type(const TypePtr& t) {
    note_free(free_type_vars(t));
    std::ostringstream os;
    type(os, t, 0);
    return os.str();
  }

  std::string show_term(const TermPtr& t) {
    note_free(free_type_vars_of_term(t));
    for (auto& v : free_term_vars(t)) in_scope_.insert(v);
    std::ostringstream os;
    term(os, t, 0);
    return os.str();
  }

 private:
  std::set<std::string> in_scope_;  // print names + free names to avoid

  void note_free(const std::vector<std::pair<std::string, int>>& vs) {
    for (auto& [n, a] : vs) {
      (void)a;
      in_scope_.insert(n);
    }
  }

  std::string choose(const std::string& hint, std::set<std::string>& group) {
    std::string base = base_hint(hint);
    std::string cand = base;
    for (int i = 1; keywords().count(cand) || in_scope_.count(cand) ||
                    group.count(cand);
         ++i)
      cand = base + std::to_string(i);
    group.insert(cand);
    return cand;
  }

  // Choose print names for one binder group and record them in scope.
  std::vector<std::string> enter(const std::vector<BinderSlot>& slots) {
    std::set<std::string> group;
    std::vector<std::string> names;
    names.reserve(slots.size());
    for (auto& s : slots) names.push_back(choose(s.hint, group));
    for (auto& n : names) in_scope_.insert(n);
    return names;
  }

  static void wrap(std::ostringstream& os, bool parens,
                   const std::function<void()>& body) {
    if (parens) os << '(';
    body();
    if (parens) os << ')';
  }

  void binder_list(std::ostringstream& os,
                   const std::vector<BinderSlot>& slots,
                   const std::vector<std::string>& names) {
    for (size_t i = 0; i < slots.size(); ++i) {
      if (i) os << ", ";
      os << names[i];
      if (slots[i].arity > 0) os << '^' << slots[i].arity;
    }
  }

  void type(std::ostringstream& os, const TypePtr& t, int level) {
    std::visit(
        overloaded{
            [&](const TZero&) { os << '0'; },
            [&](const TOne&) { os << '1'; },
            [&](const TSum& n) {
              wrap(os, level > 0, [&] {
                type(os, n.lhs, 0);
                os << " + ";
                type(os, n.rhs, 1);
              });
            },
            [&](const TProd& n) {
              wrap(os, level > 1, [&] {
                type(os, n.lhs, 1);
                os << " * ";
                type(os, n.rhs, 2);
              });
            },
            [&](const TVar& v) {
              // Bound occurrences are opened before printing; reaching one
              // here means the caller printed a non-locally-closed node.
              std::string name = v.ref ? ("?" + v.name) : v.name;
              wrap(os, !v.args.empty() && level > 2, [&] {
                os << name;
                for (auto& a : v.args) {
                  os << ' ';
                  type(os, a, 3);
                }
              });
            },
            [&](const TNat& n) {
              auto names = enter(n.binders);
              os << "Nat[";
              binder_list(os, n.binders, names);
              os << "](";
              type(os, open_type(n.source, names), 0);
              os << ", ";
              type(os, open_type(n.target, names), 0);
              os << ')';
            },
            [&](const TMu& n) {
              wrap(os, !n.args.empty() && level > 2, [&] {
                mu_form(os, n.fix, n.params, n.body);
                for (auto& a : n.args) {
                  os << ' ';
                  type(os, a, 3);
                }
              });
            },
            [&](const TLan& n) {
              wrap(os, !n.args.empty() && level > 2, [&] {
                auto names = enter(n.binders);
                os << "Lan[";
                binder_list(os, n.binders, names);
                os << "]{";
                for (size_t i = 0; i < n.along.size(); ++i) {
                  if (i) os << ", ";
                  type(os, open_type(n.along[i], names), 0);
                }
                os << "}{";
                type(os, open_type(n.body, names), 0);
                os << '}';
                for (auto& a : n.args) {
                  os << ' ';
                  type(os, a, 3);
                }
              });
            },
        },
        t->node);
  }

  // Prints "(mu f. \a, b. body)" including the enclosing parentheses; the
  // chosen parameter names are returned for callers that reuse them (fold's
  // second component).
  std::vector<std::string> mu_form(std::ostringstream& os,
                                   const BinderSlot& fix,
                                   const std::vector<BinderSlot>& params,
                                   const TypePtr& body) {
    std::vector<BinderSlot> all{fix};
    all.insert(all.end(), params.begin(), params.end());
    auto names = enter(all);
    os << "(mu " << names[0] << ". ";
    if (!params.empty()) {
      os << '\\';
      for (size_t i = 0; i < params.size(); ++i) {
        if (i) os << ", ";
        os << names[i + 1];
      }
      os << ". ";
    }
    type(os, open_type(body, names), 0);
    os << ')';
    return names;
  }

  void typearg(std::ostringstream& os, const TypeArg& ta,
               const std::vector<BinderSlot>& extra_slots,
               const std::vector<std::string>& extra_names) {
    if (ta.params.empty()) {
      std::vector<std::string> names = extra_names;
      type(os, open_type(ta.body, names), 0);
      return;
    }
    auto own = enter(ta.params);
    os << "(\\";
    binder_list(os, ta.params, own);
    os << ". ";
    std::vector<std::string> names = own;
    names.insert(names.end(), extra_names.begin(), extra_names.end());
    (void)extra_slots;
    type(os, open_type(ta.body, names), 0);
    os << ')';
  }

  void term(std::ostringstream& os, const TermPtr& t, int level) {
    std::visit(
        overloaded{
            [&](const EVar& v) { os << (v.ref ? "?" + v.name : v.name); },
            [&](const ETop&) { os << "top"; },
            [&](const EAbsurd& n) {
              wrap(os, level > 1, [&] {
                os << "absurd{";
                type(os, n.annot, 0);
                os << "} ";
                term(os, n.body, 1);
              });
            },
            [&](const EInl& n) {
              wrap(os, level > 1, [&] {
                os << "inl ";
                term(os, n.body, 1);
              });
            },
            [&](const EInr& n) {
              wrap(os, level > 1, [&] {
                os << "inr ";
                term(os, n.body, 1);
              });
            },
            [&](const ECase& n) {
              wrap(os, level > 0, [&] {
                os << "case ";
                term(os, n.scrutinee, 0);
                os << " of { inl ";
                std::set<std::string> g1;
                std::string x = choose(n.hint_l, g1);
                in_scope_.insert(x);
                os << x << " -> ";
                term(os, open_term_var(n.left, x), 0);
                os << " ; inr ";
                std::set<std::string> g2;
                std::string y = choose(n.hint_r, g2);
                in_scope_.insert(y);
                os << y << " -> ";
                term(os, open_term_var(n.right, y), 0);
                os << " }";
              });
            },
            [&](const EPair& n) {
              os << '(';
              term(os, n.lhs, 0);
              os << ", ";
              term(os, n.rhs, 0);
              os << ')';
            },
            [&](const EProj1& n) {
              wrap(os, level > 1, [&] {
                os << "fst ";
                term(os, n.body, 1);
              });
            },
            [&](const EProj2& n) {
              wrap(os, level > 1, [&] {
                os << "snd ";
                term(os, n.body, 1);
              });
            },
            [&](const ELam& n) {
              wrap(os, level > 0, [&] {
                auto names = enter(n.binders);
                std::set<std::string> g;
                std::string x = choose(n.var_hint, g);
                in_scope_.insert(x);
                os << "L[";
                binder_list(os, n.binders, names);
                os << "] " << x << ". ";
                term(os,
                     open_term_var(open_term_types(n.body, names), x), 0);
              });
            },
            [&](const EApp& n) {
              wrap(os, level > 2, [&] {
                term(os, n.head, 3);
                os << " [";
                for (size_t i = 0; i < n.typeargs.size(); ++i) {
                  if (i) os << ", ";
                  typearg(os, n.typeargs[i], {}, {});
                }
                os << "] ";
                term(os, n.arg, 3);
              });
            },
            [&](const EMap& n) {
              auto phinames = enter(n.phis);
              auto gammanames = enter(n.gammas);
              os << "map[";
              binder_list(os, n.phis, phinames);
              if (!n.gammas.empty()) {
                os << "; ";
                binder_list(os, n.gammas, gammanames);
              }
              os << "]{";
              std::vector<std::string> hnames = phinames;
              hnames.insert(hnames.end(), gammanames.begin(), gammanames.end());
              type(os, open_type(n.h, hnames), 0);
              os << '}';
              auto comps = [&](const std::vector<TypeArg>& xs) {
                os << '{';
                for (size_t i = 0; i < xs.size(); ++i) {
                  if (i) os << ", ";
                  typearg(os, xs[i], n.gammas, gammanames);
                }
                os << '}';
              };
              comps(n.fs);
              comps(n.gs);
            },
            [&](const EIn& n) {
              os << "in{";
              mu_body(os, n.fix, n.params, n.body);
              os << '}';
            },
            [&](const EFold& n) {
              os << "fold{";
              auto names = mu_body(os, n.fix, n.params, n.body);
              os << "}{";
              std::vector<std::string> pnames(names.begin() + 1, names.end());
              type(os, open_type(n.target, pnames), 0);
              os << '}';
            },
            [&](const EKanIntro& n) {
              auto phinames = enter(n.phis);
              auto alphanames = enter(n.alphas);
              os << "kan[";
              binder_list(os, n.phis, phinames);
              os << "; ";
              binder_list(os, n.alphas, alphanames);
              os << "]{";
              for (size_t i = 0; i < n.ks.size(); ++i) {
                if (i) os << ", ";
                type(os, open_type(n.ks[i], alphanames), 0);
              }
              os << "}{";
              std::vector<std::string> fnames = phinames;
              fnames.insert(fnames.end(), alphanames.begin(), alphanames.end());
              type(os, open_type(n.f, fnames), 0);
              os << '}';
            },
            [&](const EKanElim& n) {
              wrap(os, level > 2, [&] {
                auto phinames = enter(n.phis);
                auto alphanames = enter(n.alphas);
                auto betanames = enter(n.betas);
                os << "cokan[";
                binder_list(os, n.phis, phinames);
                os << "; ";
                binder_list(os, n.alphas, alphanames);
                os << "; ";
                binder_list(os, n.betas, betanames);
                os << "]{";
                std::vector<std::string> gnames = phinames;
                gnames.insert(gnames.end(), betanames.begin(), betanames.end());
                type(os, open_type(n.g, gnames), 0);
                os << "}{";
                for (size_t i = 0; i < n.ks.size(); ++i) {
                  if (i) os << ", ";
                  type(os, open_type(n.ks[i], alphanames), 0);
                }
                os << "}{";
                std::vector<std::string> fnames = phinames;
                fnames.insert(fnames.end(), alphanames.begin(),
                              alphanames.end());
                type(os, open_type(n.f, fnames), 0);
                os << "} ";
                term(os, n.body, 3);
              });
            },
        },
        t->node);
  }

  // Prints "mu f. \a. body" without parentheses (for in/fold braces);
  // returns the chosen names [fix, params...].
  std::vector<std::string> mu_body(std::ostringstream& os,
                                   const BinderSlot& fix,
                                   const std::vector<BinderSlot>& params,
                                   const TypePtr& body) {
    std::vector<BinderSlot> all{fix};
    all.insert(all.end(), params.begin(), params.end());
    auto names = enter(all);
    os << "mu " << names[0] << ". ";
    if (!params.empty()) {
      os << '\\';
      for (size_t i = 0; i < params.size(); ++i) {
        if (i) os << ", ";
        os << names[i + 1];
      }
      os << ". ";
    }
    type(os, open_type(body, names), 0);
    return names;
  }
};

}  // namespace

std::string pretty(const TypePtr& t) { return Printer{}.show_type(t); }
std::string pretty(const TermPtr& t) { return Printer{}.show_term(t); }

std::string pretty_binders(const std::vector<BinderSlot>& slots) {
  std::ostringstream os;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (i) os << ", ";
    os << slots[i].hint;
    if (slots[i].arity > 0) os << '^' << slots[i].arity;
  }
  return os.str();
}

}  // namespace nestcalc
