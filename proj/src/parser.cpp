#include "nestcalc/parser.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nestcalc/lexer.hpp"

namespace nestcalc {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "type", "term", "pragma", "context", "mu",   "Nat",  "Lan",
      "L",    "map",  "in",     "fold",    "kan",  "cokan", "case",
      "of",   "inl",  "inr",    "fst",     "snd",  "absurd", "top"};
  return kw;
}

struct Err {
  ParseError e;
};

[[noreturn]] void fail(Loc loc, std::string msg) {
  throw Err{ParseError{loc, std::move(msg)}};
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedFile run_file(const std::string& path) {
    ParsedFile out;
    out.path = path;
    while (!at(TokKind::End)) out.decls.push_back(parse_decl());
    return out;
  }

  // Replay declarations from an already-parsed file so that standalone
  // type/term parsing sees the same aliases and ambient context.
  void replay(const std::vector<Decl>& decls) {
    for (auto& d : decls) {
      std::visit(overloaded{
                     [&](const TypeDecl& td) { type_aliases_[td.name] = td; },
                     [&](const TermDecl& td) { term_aliases_[td.name] = td; },
                     [&](const ContextDecl& cd) { ctx_ = cd; },
                     [&](const PragmaDecl&) {},
                 },
                 d);
    }
  }

  void set_context(const ContextDecl& ctx) { ctx_ = ctx; }

  TypePtr run_type() {
    auto t = parse_type();
    expect(TokKind::End, "end of input");
    return t;
  }

  TermPtr run_term() {
    auto t = parse_term();
    expect(TokKind::End, "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  struct ScopeVar {
    std::string name;
    int arity;
  };
  std::vector<ScopeVar> tyscope_;
  std::vector<std::string> tmscope_;
  ContextDecl ctx_;
  std::map<std::string, TypeDecl> type_aliases_;
  std::map<std::string, TermDecl> term_aliases_;

  // --- token plumbing ---
  const Token& peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(TokKind k) const { return peek().kind == k; }
  bool at_kw(const std::string& w) const {
    return peek().kind == TokKind::Ident && peek().text == w;
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(TokKind k) {
    if (at(k)) {
      next();
      return true;
    }
    return false;
  }
  Token expect(TokKind k, const std::string& what) {
    if (!at(k)) fail(peek().loc, "expected " + what + ", found '" +
                                     (peek().kind == TokKind::End ? "end of input"
                                                                  : peek().text) +
                                     "'");
    return next();
  }
  Token expect_kw(const std::string& w) {
    if (!at_kw(w)) fail(peek().loc, "expected '" + w + "'");
    return next();
  }
  std::string expect_ident(const std::string& what) {
    Token t = expect(TokKind::Ident, what);
    if (keywords().count(t.text))
      fail(t.loc, "'" + t.text + "' is a keyword and cannot name a " + what);
    return t.text;
  }

  // --- scopes ---
  size_t push_scope(const std::vector<BinderSlot>& slots) {
    size_t mark = tyscope_.size();
    for (auto& s : slots) tyscope_.push_back({s.hint, s.arity});
    return mark;
  }
  void pop_scope(size_t mark) { tyscope_.resize(mark); }

  static std::vector<std::string> names_of(
      const std::vector<BinderSlot>& slots) {
    std::vector<std::string> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(s.hint);
    return out;
  }

  // Innermost declared arity for a type variable, if any.
  std::optional<int> lookup_ty(const std::string& name) const {
    for (auto it = tyscope_.rbegin(); it != tyscope_.rend(); ++it)
      if (it->name == name) return it->arity;
    for (auto& b : ctx_.phi)
      if (b.hint == name) return b.arity;
    for (auto& b : ctx_.gamma)
      if (b.hint == name) return b.arity;
    return std::nullopt;
  }

  // --- binder groups ---
  std::vector<BinderSlot> parse_binders(bool allow_empty) {
    std::vector<BinderSlot> out;
    if (allow_empty && !at(TokKind::Ident)) return out;
    std::set<std::string> seen;
    while (true) {
      Loc l = peek().loc;
      std::string name = expect_ident("binder");
      int arity = 0;
      if (accept(TokKind::Caret)) {
        Token n = expect(TokKind::Number, "arity");
        arity = std::stoi(n.text);
      }
      if (!seen.insert(name).second)
        fail(l, "duplicate binder '" + name + "' in one group");
      out.push_back({name, arity});
      if (!accept(TokKind::Comma)) break;
    }
    return out;
  }

  // --- types ---
  TypePtr parse_type() {
    TypePtr t = parse_prod();
    while (at(TokKind::Plus)) {
      Loc l = next().loc;
      TypePtr r = parse_prod();
      t = mk_type(TSum{t, r}, l);
    }
    return t;
  }

  TypePtr parse_prod() {
    TypePtr t = parse_app();
    while (at(TokKind::Star)) {
      Loc l = next().loc;
      TypePtr r = parse_app();
      t = mk_type(TProd{t, r}, l);
    }
    return t;
  }

  // Whether the next token can begin an argument position.
  bool at_arg_start() {
    if (at(TokKind::Number) || at(TokKind::LParen)) return true;
    if (!at(TokKind::Ident)) return false;
    const std::string& name = peek().text;
    return name == "Nat" || !keywords().count(name);
  }

  // An argument position: a single self-delimiting type.
  TypePtr parse_arg() {
    Loc l = peek().loc;
    if (at(TokKind::Number)) return parse_app();
    if (at_kw("Nat")) return parse_app();
    if (at(TokKind::LParen)) return parse_app();
    if (at(TokKind::Ident)) {
      const std::string& name = peek().text;
      if (keywords().count(name))
        fail(l, "expected a type argument, found keyword '" + name + "'");
      if (auto arity = lookup_ty(name)) {
        if (*arity != 0)
          fail(l, "variable '" + name + "' of arity " + std::to_string(*arity) +
                      " cannot appear bare as an argument; apply it in "
                      "parentheses");
        next();
        return t_free(name);
      }
      auto it = type_aliases_.find(name);
      if (it != type_aliases_.end()) {
        if (!it->second.params.empty())
          fail(l, "type '" + name +
                      "' expects arguments; parenthesize the application");
        next();
        return instantiate_alias(it->second, {}, {}, l);
      }
      fail(l, "unknown type identifier '" + name + "'");
    }
    fail(l, "expected a type argument");
  }

  TypePtr parse_app() {
    Loc l = peek().loc;
    if (at(TokKind::Number)) {
      Token n = next();
      if (n.text == "0") return mk_type(TZero{}, l);
      if (n.text == "1") return mk_type(TOne{}, l);
      fail(l, "only 0 and 1 denote types");
    }
    if (at_kw("Nat")) return parse_nat_form();
    if (at_kw("Lan")) {
      TLan lan = parse_lan_form();
      std::vector<TypePtr> args;
      for (size_t i = 0; i < lan.along.size(); ++i) args.push_back(parse_arg());
      lan.args = std::move(args);
      return mk_type(std::move(lan), l);
    }
    if (at(TokKind::LParen)) {
      if (peek(1).kind == TokKind::Ident && peek(1).text == "mu") {
        next();  // (
        TMu mu = parse_mu_form();
        expect(TokKind::RParen, "')' after fixpoint");
        std::vector<TypePtr> args;
        for (size_t i = 0; i < mu.params.size(); ++i) args.push_back(parse_arg());
        mu.args = std::move(args);
        return mk_type(std::move(mu), l);
      }
      next();  // (
      TypePtr t = parse_type();
      expect(TokKind::RParen, "')'");
      return t;
    }
    if (at(TokKind::Ident)) {
      std::string name = peek().text;
      if (keywords().count(name))
        fail(l, "expected a type, found keyword '" + name + "'");
      next();
      if (auto arity = lookup_ty(name)) {
        std::vector<TypePtr> args;
        for (int i = 0; i < *arity; ++i) {
          if (!at_arg_start())
            fail(peek().loc, "variable '" + name + "' of arity " +
                                 std::to_string(*arity) + " is applied to " +
                                 std::to_string(i) +
                                 " arguments; every occurrence must be "
                                 "saturated");
          args.push_back(parse_arg());
        }
        return mk_type(TVar{std::nullopt, name, std::move(args)}, l);
      }
      auto it = type_aliases_.find(name);
      if (it != type_aliases_.end()) return parse_alias_app(it->second, l);
      fail(l, "unknown type identifier '" + name + "'");
    }
    fail(l, "expected a type");
  }

  TypePtr parse_nat_form() {
    Loc l = expect_kw("Nat").loc;
    expect(TokKind::LBracket, "'[' after Nat");
    std::vector<BinderSlot> binders = parse_binders(/*allow_empty=*/true);
    expect(TokKind::RBracket, "']'");
    expect(TokKind::LParen, "'('");
    size_t mark = push_scope(binders);
    TypePtr src = parse_type();
    expect(TokKind::Comma, "','");
    TypePtr tgt = parse_type();
    pop_scope(mark);
    expect(TokKind::RParen, "')'");
    auto names = names_of(binders);
    return mk_type(
        TNat{binders, close_type(src, names), close_type(tgt, names)}, l);
  }

  // Parses `mu f . [\ params .] body`; caller handles delimiters and args.
  TMu parse_mu_form() {
    expect_kw("mu");
    std::string fix = expect_ident("fixpoint variable");
    expect(TokKind::Dot, "'.' after fixpoint variable");
    std::vector<BinderSlot> params;
    if (accept(TokKind::Backslash)) {
      params = parse_binders(/*allow_empty=*/false);
      expect(TokKind::Dot, "'.' after fixpoint parameters");
    }
    for (auto& p : params)
      if (p.hint == fix)
        fail(peek().loc, "fixpoint variable '" + fix + "' reused as parameter");
    BinderSlot fixslot{fix, static_cast<int>(params.size())};
    std::vector<BinderSlot> all{fixslot};
    all.insert(all.end(), params.begin(), params.end());
    size_t mark = push_scope(all);
    TypePtr body = parse_type();
    pop_scope(mark);
    return TMu{fixslot, params, close_type(body, names_of(all)), {}};
  }

  TLan parse_lan_form() {
    expect_kw("Lan");
    expect(TokKind::LBracket, "'[' after Lan");
    std::vector<BinderSlot> binders = parse_binders(/*allow_empty=*/true);
    expect(TokKind::RBracket, "']'");
    auto names = names_of(binders);
    expect(TokKind::LBrace, "'{'");
    std::vector<TypePtr> along;
    size_t mark = push_scope(binders);
    along.push_back(parse_type());
    while (accept(TokKind::Comma)) along.push_back(parse_type());
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    for (auto& k : along) k = close_type(k, names);
    expect(TokKind::LBrace, "'{'");
    mark = push_scope(binders);
    TypePtr body = parse_type();
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    return TLan{binders, std::move(along), close_type(body, names), {}};
  }

  TypePtr parse_alias_app(const TypeDecl& d, Loc l) {
    std::vector<std::optional<TypePtr>> type_args(d.params.size());
    std::vector<std::optional<std::string>> var_args(d.params.size());
    for (size_t i = 0; i < d.params.size(); ++i) {
      if (d.params[i].arity == 0) {
        type_args[i] = parse_arg();
      } else {
        Loc al = peek().loc;
        std::string vn = expect_ident("variable argument");
        auto arity = lookup_ty(vn);
        if (!arity)
          fail(al, "unknown type identifier '" + vn + "'");
        if (*arity != d.params[i].arity)
          fail(al, "type '" + d.name + "' expects a variable of arity " +
                       std::to_string(d.params[i].arity) + " here, but '" + vn +
                       "' has arity " + std::to_string(*arity));
        var_args[i] = vn;
      }
    }
    return instantiate_alias(d, type_args, var_args, l);
  }

  TypePtr instantiate_alias(const TypeDecl& d,
                            std::vector<std::optional<TypePtr>> type_args,
                            std::vector<std::optional<std::string>> var_args,
                            Loc l) {
    std::vector<std::string> fresh;
    for (auto& p : d.params) fresh.push_back(fresh_name(p.hint));
    TypePtr body = open_type(d.body, fresh);
    for (size_t i = 0; i < d.params.size(); ++i) {
      if (i < type_args.size() && type_args[i]) {
        body = subst_free_type_var(body, fresh[i], *type_args[i]);
      } else if (i < var_args.size() && var_args[i]) {
        body = replace_free_type_var(body, fresh[i], *var_args[i]);
      }
    }
    auto t = std::make_shared<Type>(*body);
    const_cast<Type&>(*t).loc = l;
    return t;
  }

  // --- terms ---
  TermPtr parse_term() {
    if (at_kw("L")) return parse_lam();
    if (at_kw("case")) return parse_case();
    return parse_prefix();
  }

  TermPtr parse_lam() {
    Loc l = expect_kw("L").loc;
    expect(TokKind::LBracket, "'[' after L");
    std::vector<BinderSlot> binders = parse_binders(/*allow_empty=*/true);
    expect(TokKind::RBracket, "']'");
    std::string var = expect_ident("value variable");
    expect(TokKind::Dot, "'.' after value variable");
    size_t mark = push_scope(binders);
    tmscope_.push_back(var);
    TermPtr body = parse_term();
    tmscope_.pop_back();
    pop_scope(mark);
    body = close_term_var(body, var);
    body = close_term_types(body, names_of(binders));
    return mk_term(ELam{binders, var, std::move(body)}, l);
  }

  TermPtr parse_case() {
    Loc l = expect_kw("case").loc;
    TermPtr scrut = parse_term();
    expect_kw("of");
    expect(TokKind::LBrace, "'{'");
    expect_kw("inl");
    std::string x = expect_ident("branch variable");
    expect(TokKind::Arrow, "'->'");
    tmscope_.push_back(x);
    TermPtr left = parse_term();
    tmscope_.pop_back();
    expect(TokKind::Semi, "';' between case branches");
    expect_kw("inr");
    std::string y = expect_ident("branch variable");
    expect(TokKind::Arrow, "'->'");
    tmscope_.push_back(y);
    TermPtr right = parse_term();
    tmscope_.pop_back();
    expect(TokKind::RBrace, "'}'");
    return mk_term(ECase{std::move(scrut), x, close_term_var(left, x), y,
                         close_term_var(right, y)},
                   l);
  }

  TermPtr parse_prefix() {
    Loc l = peek().loc;
    if (at_kw("inl")) {
      next();
      return mk_term(EInl{parse_prefix()}, l);
    }
    if (at_kw("inr")) {
      next();
      return mk_term(EInr{parse_prefix()}, l);
    }
    if (at_kw("fst")) {
      next();
      return mk_term(EProj1{parse_prefix()}, l);
    }
    if (at_kw("snd")) {
      next();
      return mk_term(EProj2{parse_prefix()}, l);
    }
    if (at_kw("absurd")) {
      next();
      expect(TokKind::LBrace, "'{' after absurd");
      TypePtr annot = parse_type();
      expect(TokKind::RBrace, "'}'");
      return mk_term(EAbsurd{annot, parse_prefix()}, l);
    }
    return parse_postfix();
  }

  TermPtr parse_postfix() {
    TermPtr t = parse_atom_term();
    while (at(TokKind::LBracket)) {
      Loc l = next().loc;
      std::vector<TypeArg> tas;
      if (!at(TokKind::RBracket)) {
        tas.push_back(parse_typearg());
        while (accept(TokKind::Comma)) tas.push_back(parse_typearg());
      }
      expect(TokKind::RBracket, "']'");
      TermPtr arg = parse_atom_term();
      t = mk_term(EApp{t, std::move(tas), std::move(arg)}, l);
    }
    return t;
  }

  TypeArg parse_typearg() {
    if (at(TokKind::LParen) && peek(1).kind == TokKind::Backslash) {
      next();  // (
      next();  // backslash
      std::vector<BinderSlot> params = parse_binders(/*allow_empty=*/false);
      expect(TokKind::Dot, "'.'");
      size_t mark = push_scope(params);
      TypePtr body = parse_type();
      pop_scope(mark);
      expect(TokKind::RParen, "')'");
      return TypeArg{params, close_type(body, names_of(params))};
    }
    return TypeArg{{}, parse_type()};
  }

  TermPtr parse_atom_term() {
    Loc l = peek().loc;
    if (at_kw("top")) {
      next();
      return mk_term(ETop{}, l);
    }
    if (at_kw("map")) return parse_map();
    if (at_kw("in")) return parse_in();
    if (at_kw("fold")) return parse_fold();
    if (at_kw("kan")) return parse_kan();
    if (at_kw("cokan")) return parse_cokan();
    if (at(TokKind::LParen)) {
      next();
      TermPtr t = parse_term();
      if (accept(TokKind::Comma)) {
        TermPtr r = parse_term();
        expect(TokKind::RParen, "')'");
        return mk_term(EPair{std::move(t), std::move(r)}, l);
      }
      expect(TokKind::RParen, "')'");
      return t;
    }
    if (at(TokKind::Ident)) {
      std::string name = peek().text;
      if (keywords().count(name))
        fail(l, "expected a term, found keyword '" + name + "'");
      next();
      for (auto it = tmscope_.rbegin(); it != tmscope_.rend(); ++it)
        if (*it == name) return e_free(name);
      for (auto& [dn, dt] : ctx_.delta)
        if (dn == name) return e_free(name);
      // References to earlier term declarations stay as free variables; the
      // typechecker resolves them against the declared type, and the rewriter
      // unfolds them on demand.  Splicing the definition here would let an
      // enclosing binder capture its free variables.
      if (term_aliases_.count(name)) return e_free(name);
      fail(l, "unknown term identifier '" + name + "'");
    }
    fail(l, "expected a term");
  }

  TermPtr parse_map() {
    Loc l = expect_kw("map").loc;
    expect(TokKind::LBracket, "'[' after map");
    std::vector<BinderSlot> phis = parse_binders(/*allow_empty=*/false);
    std::vector<BinderSlot> gammas;
    if (accept(TokKind::Semi)) gammas = parse_binders(/*allow_empty=*/true);
    expect(TokKind::RBracket, "']'");
    for (auto& g : gammas)
      for (auto& p : phis)
        if (g.hint == p.hint)
          fail(l, "'" + g.hint + "' appears in both map binder groups");

    std::vector<BinderSlot> hslots = phis;
    hslots.insert(hslots.end(), gammas.begin(), gammas.end());
    expect(TokKind::LBrace, "'{'");
    size_t mark = push_scope(hslots);
    TypePtr h = parse_type();
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    h = close_type(h, names_of(hslots));

    auto parse_comps = [&]() {
      std::vector<TypeArg> out;
      expect(TokKind::LBrace, "'{'");
      for (size_t i = 0; i < phis.size(); ++i) {
        if (i > 0) expect(TokKind::Comma, "','");
        std::vector<BinderSlot> betas;
        if (at(TokKind::LParen) && peek(1).kind == TokKind::Backslash) {
          next();
          next();
          betas = parse_binders(/*allow_empty=*/false);
          expect(TokKind::Dot, "'.'");
          if (static_cast<int>(betas.size()) != phis[i].arity)
            fail(l, "map component for '" + phis[i].hint + "' binds " +
                        std::to_string(betas.size()) + " variables, expected " +
                        std::to_string(phis[i].arity));
          std::vector<BinderSlot> slots = betas;
          slots.insert(slots.end(), gammas.begin(), gammas.end());
          size_t m = push_scope(slots);
          TypePtr body = parse_type();
          pop_scope(m);
          expect(TokKind::RParen, "')'");
          out.push_back(TypeArg{betas, close_type(body, names_of(slots))});
        } else {
          if (phis[i].arity != 0)
            fail(peek().loc, "map component for '" + phis[i].hint +
                                 "' must bind " +
                                 std::to_string(phis[i].arity) +
                                 " variables: write (\\b1,... . F)");
          size_t m = push_scope(gammas);
          TypePtr body = parse_type();
          pop_scope(m);
          out.push_back(TypeArg{{}, close_type(body, names_of(gammas))});
        }
      }
      expect(TokKind::RBrace, "'}'");
      return out;
    };
    std::vector<TypeArg> fs = parse_comps();
    std::vector<TypeArg> gs = parse_comps();
    return mk_term(EMap{phis, gammas, h, std::move(fs), std::move(gs)}, l);
  }

  TermPtr parse_in() {
    Loc l = expect_kw("in").loc;
    expect(TokKind::LBrace, "'{' after in");
    TMu mu = parse_mu_form();
    expect(TokKind::RBrace, "'}'");
    return mk_term(EIn{mu.fix, mu.params, mu.body}, l);
  }

  TermPtr parse_fold() {
    Loc l = expect_kw("fold").loc;
    expect(TokKind::LBrace, "'{' after fold");
    TMu mu = parse_mu_form();
    expect(TokKind::RBrace, "'}'");
    expect(TokKind::LBrace, "'{'");
    size_t mark = push_scope(mu.params);
    TypePtr target = parse_type();
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    target = close_type(target, names_of(mu.params));
    return mk_term(EFold{mu.fix, mu.params, mu.body, target}, l);
  }

  TermPtr parse_kan() {
    Loc l = expect_kw("kan").loc;
    expect(TokKind::LBracket, "'[' after kan");
    std::vector<BinderSlot> phis = parse_binders(/*allow_empty=*/true);
    expect(TokKind::Semi, "';'");
    std::vector<BinderSlot> alphas = parse_binders(/*allow_empty=*/true);
    expect(TokKind::RBracket, "']'");
    expect(TokKind::LBrace, "'{'");
    std::vector<TypePtr> ks;
    size_t mark = push_scope(alphas);
    ks.push_back(parse_type());
    while (accept(TokKind::Comma)) ks.push_back(parse_type());
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    for (auto& k : ks) k = close_type(k, names_of(alphas));
    std::vector<BinderSlot> fslots = phis;
    fslots.insert(fslots.end(), alphas.begin(), alphas.end());
    expect(TokKind::LBrace, "'{'");
    mark = push_scope(fslots);
    TypePtr f = parse_type();
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    f = close_type(f, names_of(fslots));
    return mk_term(EKanIntro{phis, alphas, std::move(ks), f}, l);
  }

  TermPtr parse_cokan() {
    Loc l = expect_kw("cokan").loc;
    expect(TokKind::LBracket, "'[' after cokan");
    std::vector<BinderSlot> phis = parse_binders(/*allow_empty=*/true);
    expect(TokKind::Semi, "';'");
    std::vector<BinderSlot> alphas = parse_binders(/*allow_empty=*/true);
    expect(TokKind::Semi, "';'");
    std::vector<BinderSlot> betas = parse_binders(/*allow_empty=*/true);
    expect(TokKind::RBracket, "']'");

    std::vector<BinderSlot> gslots = phis;
    gslots.insert(gslots.end(), betas.begin(), betas.end());
    expect(TokKind::LBrace, "'{'");
    size_t mark = push_scope(gslots);
    TypePtr g = parse_type();
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    g = close_type(g, names_of(gslots));

    expect(TokKind::LBrace, "'{'");
    std::vector<TypePtr> ks;
    mark = push_scope(alphas);
    ks.push_back(parse_type());
    while (accept(TokKind::Comma)) ks.push_back(parse_type());
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    for (auto& k : ks) k = close_type(k, names_of(alphas));

    std::vector<BinderSlot> fslots = phis;
    fslots.insert(fslots.end(), alphas.begin(), alphas.end());
    expect(TokKind::LBrace, "'{'");
    mark = push_scope(fslots);
    TypePtr f = parse_type();
    pop_scope(mark);
    expect(TokKind::RBrace, "'}'");
    f = close_type(f, names_of(fslots));

    TermPtr body = parse_atom_term();
    return mk_term(
        EKanElim{phis, alphas, betas, g, std::move(ks), f, std::move(body)}, l);
  }

  // --- declarations ---
  Decl parse_decl() {
    if (at_kw("pragma")) return parse_pragma();
    if (at_kw("context")) return parse_context();
    if (at_kw("type")) return parse_typedecl();
    if (at_kw("term")) return parse_termdecl();
    fail(peek().loc, "expected a declaration (pragma, context, type, term)");
  }

  Decl parse_pragma() {
    Loc l = expect_kw("pragma").loc;
    std::string key = expect(TokKind::Ident, "pragma name").text;
    std::string value = expect(TokKind::Ident, "pragma value").text;
    if (key != "gadt" || (value != "on" && value != "off"))
      fail(l, "unknown pragma '" + key + " " + value +
                  "' (supported: gadt on|off)");
    return PragmaDecl{key, value, l};
  }

  Decl parse_context() {
    Loc l = expect_kw("context").loc;
    expect(TokKind::LBracket, "'[' after context");
    ContextDecl cd;
    cd.loc = l;
    cd.gamma = parse_binders(/*allow_empty=*/true);
    if (accept(TokKind::Semi)) {
      cd.phi = parse_binders(/*allow_empty=*/true);
      if (accept(TokKind::Semi)) {
        // Delta entries; their types live in the new gamma/phi.
        ContextDecl saved = ctx_;
        ctx_ = cd;
        if (at(TokKind::Ident)) {
          while (true) {
            std::string n = expect_ident("value variable");
            expect(TokKind::Colon, "':'");
            cd.delta.emplace_back(n, parse_type());
            if (!accept(TokKind::Comma)) break;
          }
        }
        ctx_ = saved;
      }
    }
    expect(TokKind::RBracket, "']'");
    for (auto& g : cd.gamma)
      for (auto& p : cd.phi)
        if (g.hint == p.hint)
          fail(l, "'" + g.hint + "' declared in both context parts");
    ctx_ = cd;
    return cd;
  }

  Decl parse_typedecl() {
    Loc l = expect_kw("type").loc;
    std::string name = expect_ident("type name");
    if (type_aliases_.count(name))
      fail(l, "type '" + name + "' is already defined");
    // Parameters are juxtaposed (no commas), each with an optional arity.
    std::vector<BinderSlot> params;
    while (at(TokKind::Ident) && !keywords().count(peek().text)) {
      std::string p = next().text;
      for (auto& q : params)
        if (q.hint == p) fail(l, "duplicate parameter '" + p + "'");
      int arity = 0;
      if (accept(TokKind::Caret))
        arity = std::stoi(expect(TokKind::Number, "arity").text);
      params.push_back({p, arity});
    }
    expect(TokKind::Equals, "'='");
    size_t mark = push_scope(params);
    TypePtr body = parse_type();
    pop_scope(mark);
    TypeDecl d{name, params, close_type(body, names_of(params)), l};
    type_aliases_[name] = d;
    return d;
  }

  Decl parse_termdecl() {
    Loc l = expect_kw("term").loc;
    std::string name = expect_ident("term name");
    if (term_aliases_.count(name))
      fail(l, "term '" + name + "' is already defined");
    expect(TokKind::Colon, "':'");
    TypePtr ty = parse_type();
    expect(TokKind::Equals, "'='");
    TermPtr def = parse_term();
    TermDecl d{name, ty, def, l};
    term_aliases_[name] = d;
    return d;
  }
};

}  // namespace

ParseResult parse_file(const std::string& source, const std::string& path) {
  auto toks = lex(source);
  if (!toks) return toks.error();
  try {
    Parser p(std::move(toks.value()));
    return p.run_file(path);
  } catch (const Err& e) {
    return e.e;
  }
}

ParseResult parse_file_at(const std::string& path) {
  std::ifstream in(path);
  if (!in) return ParseError{{}, "cannot open file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_file(ss.str(), path);
}

Result<TypePtr, ParseError> parse_type_string(const std::string& source,
                                              const ContextDecl& ctx,
                                              const std::vector<Decl>& decls) {
  auto toks = lex(source);
  if (!toks) return toks.error();
  try {
    Parser p(std::move(toks.value()));
    p.replay(decls);
    if (!ctx.gamma.empty() || !ctx.phi.empty() || !ctx.delta.empty())
      p.set_context(ctx);
    return p.run_type();
  } catch (const Err& e) {
    return e.e;
  }
}

Result<TermPtr, ParseError> parse_term_string(const std::string& source,
                                              const ContextDecl& ctx,
                                              const std::vector<Decl>& decls) {
  auto toks = lex(source);
  if (!toks) return toks.error();
  try {
    Parser p(std::move(toks.value()));
    p.replay(decls);
    if (!ctx.gamma.empty() || !ctx.phi.empty() || !ctx.delta.empty())
      p.set_context(ctx);
    return p.run_term();
  } catch (const Err& e) {
    return e.e;
  }
}

}  // namespace nestcalc
