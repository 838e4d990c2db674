// Surface syntax: lexing, parsing, alias expansion, pretty-printing, and the
// structural laws tying them together (parse . pretty == id up to alpha).
#include <doctest.h>

#include <string>
#include <vector>

#include "nestcalc/ast.hpp"
#include "nestcalc/parser.hpp"
#include "nestcalc/pretty.hpp"

using namespace nestcalc;

namespace {

ContextDecl ctx_gamma(std::vector<BinderSlot> gamma) {
  ContextDecl ctx;
  ctx.gamma = std::move(gamma);
  return ctx;
}

ContextDecl ctx_gamma_phi(std::vector<BinderSlot> gamma,
                          std::vector<BinderSlot> phi) {
  ContextDecl ctx;
  ctx.gamma = std::move(gamma);
  ctx.phi = std::move(phi);
  return ctx;
}

TypePtr parse_type_ok(const std::string& src, const ContextDecl& ctx = {},
                      const std::vector<Decl>& decls = {}) {
  auto r = parse_type_string(src, ctx, decls);
  REQUIRE_MESSAGE(r.is_ok(), ("parse failed on \"" + src + "\": " +
                              (r.is_ok() ? std::string() : r.error().message)));
  return r.value();
}

TermPtr parse_term_ok(const std::string& src, const ContextDecl& ctx = {},
                      const std::vector<Decl>& decls = {}) {
  auto r = parse_term_string(src, ctx, decls);
  REQUIRE_MESSAGE(r.is_ok(), ("parse failed on \"" + src + "\": " +
                              (r.is_ok() ? std::string() : r.error().message)));
  return r.value();
}

std::string parse_type_err(const std::string& src, const ContextDecl& ctx = {},
                           const std::vector<Decl>& decls = {}) {
  auto r = parse_type_string(src, ctx, decls);
  REQUIRE_MESSAGE(!r.is_ok(), ("expected a parse error on \"" + src + "\""));
  return r.error().message;
}

// The List fixpoint applied to a: (mu f. \b. 1 + b * f b) a.
TypePtr list_of_a() {
  auto body =
      t_sum(t_one(), t_prod(t_free("b"), t_free("f", {t_free("b")})));
  return t_mu(BinderSlot{"f", 1}, {BinderSlot{"b", 0}},
              close_type(body, {"f", "b"}), {t_free("a")});
}

}  // namespace

TEST_CASE("sum and product precedence and associativity") {
  auto ctx = ctx_gamma({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}});
  // * binds tighter than +; both associate to the left.
  auto t = parse_type_ok("a + b * c + d", ctx);
  auto expected = t_sum(t_sum(t_free("a"), t_prod(t_free("b"), t_free("c"))),
                        t_free("d"));
  CHECK(alpha_eq(t, expected));

  auto u = parse_type_ok("a * b * c", ctx);
  CHECK(alpha_eq(u, t_prod(t_prod(t_free("a"), t_free("b")), t_free("c"))));

  auto v = parse_type_ok("(a + b) * c", ctx);
  CHECK(alpha_eq(v, t_prod(t_sum(t_free("a"), t_free("b")), t_free("c"))));
}

TEST_CASE("variable applications are arity-exact") {
  auto ctx = ctx_gamma_phi({{"a", 0}}, {{"f", 1}, {"g", 2}});
  auto t = parse_type_ok("f (g a (f a))", ctx);
  auto expected =
      t_free("f", {t_free("g", {t_free("a"), t_free("f", {t_free("a")})})});
  CHECK(alpha_eq(t, expected));

  // Partial and over-saturated applications are rejected while parsing.
  CHECK(parse_type_err("f", ctx) != "");
  CHECK(parse_type_err("g a", ctx) != "");
  CHECK(parse_type_err("a a", ctx) != "");
  CHECK(parse_type_err("x", ctx) != "");
}

TEST_CASE("list fixpoint parses to the expected tree") {
  auto ctx = ctx_gamma({{"a", 0}});
  auto t = parse_type_ok("(mu f. \\b. 1 + b * f b) a", ctx);
  CHECK(alpha_eq(t, list_of_a()));
  // Binder hints do not matter for alpha-equivalence.
  auto u = parse_type_ok("(mu list. \\elt. 1 + elt * list elt) a", ctx);
  CHECK(alpha_eq(u, list_of_a()));
  CHECK(type_key(u) == type_key(t));
}

TEST_CASE("fixpoint body must stay eta-long") {
  auto ctx = ctx_gamma({{"a", 0}});
  // `f` alone under the mu is a bare arity-1 variable: not a type.
  auto msg = parse_type_err("(mu f. \\b. f) a", ctx);
  CHECK(msg.find("arity") != std::string::npos);
}

TEST_CASE("nat types bind their own variables") {
  auto t = parse_type_ok("Nat[a](a, a)");
  auto body = t_free("a");
  auto expected = t_nat({BinderSlot{"a", 0}}, close_type(body, {"a"}),
                        close_type(body, {"a"}));
  CHECK(alpha_eq(t, expected));

  // The binder list may be empty; components then live in the outer scope.
  auto ctx = ctx_gamma({{"c", 0}});
  auto u = parse_type_ok("Nat[](c, c + c)", ctx);
  auto expected2 = t_nat({}, t_free("c"), t_sum(t_free("c"), t_free("c")));
  CHECK(alpha_eq(u, expected2));

  // Nat binders shadow outer names.
  auto v = parse_type_ok("Nat[c](c, c * c)", ctx);
  auto expected3 =
      t_nat({BinderSlot{"c", 0}}, close_type(t_free("c"), {"c"}),
            close_type(t_prod(t_free("c"), t_free("c")), {"c"}));
  CHECK(alpha_eq(v, expected3));
}

TEST_CASE("type aliases expand at parse time") {
  auto file = parse_file(
      "context [a ; ;]\n"
      "type List b = (mu f. \\c. 1 + c * f c) b\n"
      "type Pair b = b * b\n"
      "type T = List (Pair a)\n",
      "<test>");
  REQUIRE(file.is_ok());
  auto& decls = file.value().decls;
  REQUIRE(decls.size() == 4);
  auto& t = std::get<TypeDecl>(decls[3]);
  auto expected = parse_type_ok("(mu f. \\c. 1 + c * f c) (a * a)",
                                ctx_gamma({{"a", 0}}));
  CHECK(alpha_eq(t.body, expected));
}

TEST_CASE("alias parameters of positive arity take bare variables") {
  auto file = parse_file(
      "context [a ; p^1 ;]\n"
      "type Twice f^1 b = f (f b)\n"
      "type T = Twice p a\n",
      "<test>");
  if (!file.is_ok()) FAIL(file.error().message);
  auto& t = std::get<TypeDecl>(file.value().decls.back());
  auto expected = parse_type_ok("p (p a)", ctx_gamma_phi({{"a", 0}}, {{"p", 1}}));
  CHECK(alpha_eq(t.body, expected));

  // A compound argument in a higher-arity position has no eta-long spelling.
  auto bad = parse_file(
      "context [a ; ;]\n"
      "type Twice f^1 b = f (f b)\n"
      "type T = Twice (mu f. \\c. 1 + c * f c) a\n",
      "<test>");
  CHECK(!bad.is_ok());
}

TEST_CASE("lambda terms parse with simultaneous type and term binders") {
  auto t = parse_term_ok("L[a] x. x");
  ELam lam{{BinderSlot{"a", 0}}, "x", close_term_var(e_free("x"), "x")};
  CHECK(alpha_eq(t, mk_term(std::move(lam))));

  auto file = parse_file("term id : Nat[a](a, a) = L[a] x. x", "<test>");
  REQUIRE(file.is_ok());
  auto& d = std::get<TermDecl>(file.value().decls[0]);
  CHECK(alpha_eq(d.type, parse_type_ok("Nat[a](a, a)")));
}

TEST_CASE("term applications carry explicit type argument lists") {
  ContextDecl ctx;
  ctx.gamma = {{"c", 0}};
  ctx.delta = {{"f", parse_type_ok("Nat[a](a, a)")},
               {"g", parse_type_ok("Nat[](c, c)", ctx_gamma({{"c", 0}}))},
               {"y", t_free("c")}};
  auto t = parse_term_ok("f [c] y", ctx);
  auto* app = std::get_if<EApp>(&t->node);
  REQUIRE(app != nullptr);
  CHECK(app->typeargs.size() == 1);
  CHECK(alpha_eq(app->typeargs[0].body, t_free("c")));

  // Empty instantiation still writes its brackets.
  auto u = parse_term_ok("g [] y", ctx);
  auto* app2 = std::get_if<EApp>(&u->node);
  REQUIRE(app2 != nullptr);
  CHECK(app2->typeargs.empty());

  // Application is left-associative: h [..] x [..] y nests left.
  ctx.delta.push_back({"h", parse_type_ok("Nat[a](a, Nat[](a, a))")});
  auto v = parse_term_ok("h [c] y [] y", ctx);
  auto* outer = std::get_if<EApp>(&v->node);
  REQUIRE(outer != nullptr);
  CHECK(std::get_if<EApp>(&outer->head->node) != nullptr);
}

TEST_CASE("case, injections, pairs, and projections") {
  ContextDecl ctx;
  ctx.gamma = {{"a", 0}, {"b", 0}};
  ctx.delta = {{"s", parse_type_ok("a + b", ctx_gamma({{"a", 0}, {"b", 0}}))},
               {"p", parse_type_ok("a * b", ctx_gamma({{"a", 0}, {"b", 0}}))}};
  auto t = parse_term_ok(
      "case s of { inl x -> inl (x, fst p) ; inr y -> inr (snd p, y) }", ctx);
  auto* c = std::get_if<ECase>(&t->node);
  REQUIRE(c != nullptr);
  CHECK(std::get_if<EInl>(&c->left->node) != nullptr);
  CHECK(std::get_if<EInr>(&c->right->node) != nullptr);

  auto u = parse_term_ok("absurd { a * b } s", ctx);
  auto* ab = std::get_if<EAbsurd>(&u->node);
  REQUIRE(ab != nullptr);
  CHECK(alpha_eq(ab->annot, parse_type_ok("a * b", ctx)));
}

TEST_CASE("map terms parse their binder groups") {
  auto t = parse_term_ok(
      "map[p^1; g]{ p (g * g) }{ (\\b. b + b) }{ (\\b. b) }");
  auto* m = std::get_if<EMap>(&t->node);
  REQUIRE(m != nullptr);
  REQUIRE(m->phis.size() == 1);
  CHECK(m->phis[0].arity == 1);
  REQUIRE(m->gammas.size() == 1);
  REQUIRE(m->fs.size() == 1);
  CHECK(m->fs[0].params.size() == 1);

  // The component binder count must match the functorial arity.
  auto r = parse_term_string(
      "map[p^1; g]{ p (g * g) }{ (\\b, c. b) }{ (\\b. b) }");
  CHECK(!r.is_ok());

  // Arity-0 functorial slots may write components without a lambda.
  auto u = parse_term_ok("map[p; g]{ p * g }{ g + g }{ g }");
  auto* m2 = std::get_if<EMap>(&u->node);
  REQUIRE(m2 != nullptr);
  CHECK(m2->fs[0].params.empty());
}

TEST_CASE("in and fold parse fixpoint braces") {
  auto t = parse_term_ok("in{ mu f. \\b. 1 + b * f b }");
  auto* i = std::get_if<EIn>(&t->node);
  REQUIRE(i != nullptr);
  CHECK(i->fix.arity == 1);
  REQUIRE(i->params.size() == 1);

  auto u = parse_term_ok("fold{ mu f. \\b. 1 + b * f b }{ b * b }");
  auto* f = std::get_if<EFold>(&u->node);
  REQUIRE(f != nullptr);
  // The algebra carrier is parsed with the lambda parameters in scope.
  auto target = open_type(f->target, {"b"});
  CHECK(alpha_eq(target, t_prod(t_free("b"), t_free("b"))));
}

TEST_CASE("kan forms parse only structurally") {
  // The binder groups are self-contained: p is bound by the form itself.
  auto t = parse_term_ok("kan[p^1; a]{ 1 }{ p a }");
  auto* k = std::get_if<EKanIntro>(&t->node);
  REQUIRE(k != nullptr);
  CHECK(k->ks.size() == 1);

  // The smallest instance binds nothing at all.
  auto t0 = parse_term_ok("kan[;]{ 1 }{ 1 }");
  auto* k0 = std::get_if<EKanIntro>(&t0->node);
  REQUIRE(k0 != nullptr);
  CHECK(k0->phis.empty());
  CHECK(k0->alphas.empty());

  ContextDecl ctx;
  ctx.delta = {{"t", parse_type_ok("Nat[a](a, a)")}};
  auto u = parse_term_ok("cokan[p^1; a; b]{ p b }{ 1 }{ p a } t", ctx);
  auto* e = std::get_if<EKanElim>(&u->node);
  REQUIRE(e != nullptr);
  CHECK(e->betas.size() == 1);
  CHECK(alpha_eq(e->body, e_free("t")));
}

TEST_CASE("references to earlier term declarations stay free variables") {
  auto file = parse_file(
      "term id : Nat[a](a, a) = L[a] x. x\n"
      "term idid : Nat[a](a, a) = L[a] x. id [a] x\n",
      "<test>");
  REQUIRE(file.is_ok());
  auto& d = std::get<TermDecl>(file.value().decls[1]);
  // `id` is kept as a free variable, not replaced by its definition, so a
  // binder in the use site can never capture the definition's variables.
  auto expected = parse_term_ok("L[a] x. id [a] x", {}, file.value().decls);
  CHECK(alpha_eq(d.def, expected));
  auto fvs = free_term_vars(d.def);
  REQUIRE(fvs.size() == 1);
  CHECK(fvs[0] == "id");

  // A local binder with the same name shadows the declaration.
  auto file2 = parse_file(
      "term id : Nat[a](a, a) = L[a] x. x\n"
      "term t : Nat[a](Nat[](a, a), Nat[](a, a)) = L[a] id . id\n",
      "<test>");
  REQUIRE(file2.is_ok());
  auto& d2 = std::get<TermDecl>(file2.value().decls[1]);
  CHECK(alpha_eq(d2.def, parse_term_ok("L[a] y. y")));
  CHECK(free_term_vars(d2.def).empty());
}

TEST_CASE("references to undeclared terms are positioned errors") {
  auto file = parse_file("term t : 1 = mystery\n", "<test>");
  REQUIRE(!file.is_ok());
  CHECK(file.error().message.find("mystery") != std::string::npos);
  CHECK(file.error().loc.line == 1);
}

TEST_CASE("comments and layout are ignored") {
  auto t = parse_type_ok(
      "-- a comment line\n"
      "1 +   -- trailing comment\n"
      "1\n");
  CHECK(alpha_eq(t, t_sum(t_one(), t_one())));
}

TEST_CASE("duplicate and malformed declarations are rejected") {
  CHECK(!parse_file("type T = 1\ntype T = 1", "<t>").is_ok());
  CHECK(!parse_file("pragma gadt maybe", "<t>").is_ok());
  CHECK(!parse_file("context [a ; a ;]", "<t>").is_ok());
  CHECK(parse_file("pragma gadt on", "<t>").is_ok());
}

TEST_CASE("printing inserts parentheses only where grammar demands") {
  auto ctx = ctx_gamma_phi({{"a", 0}, {"b", 0}}, {{"f", 1}});
  auto check_round = [&](const std::string& src) {
    auto t = parse_type_ok(src, ctx);
    auto printed = pretty(t);
    auto again = parse_type_ok(printed, ctx);
    CAPTURE(src);
    CAPTURE(printed);
    CHECK(alpha_eq(t, again));
  };
  check_round("a + b * a");
  check_round("(a + b) * a");
  check_round("f (a + b)");
  check_round("f (f a) * b + 1");
  check_round("Nat[c](c, f c)");
  check_round("(mu g. \\c. 1 + c * g c) (a * b)");
  check_round("(mu g. \\c, d. c + g d c) a b");
  check_round("Nat[](f a, f (f a))");
}

TEST_CASE("printing terms round-trips through the parser") {
  ContextDecl ctx;
  ctx.gamma = {{"a", 0}, {"b", 0}};
  ctx.phi = {{"p", 1}};
  ctx.delta = {{"s", parse_type_ok("a + b", ctx_gamma({{"a", 0}, {"b", 0}}))},
               {"q", parse_type_ok("a * b", ctx_gamma({{"a", 0}, {"b", 0}}))},
               {"n", parse_type_ok("Nat[c](c, c)")},
               {"w", parse_type_ok("Nat[a](p a, p a)",
                                   ctx_gamma_phi({}, {{"p", 1}}))}};
  auto check_round = [&](const std::string& src) {
    auto t = parse_term_ok(src, ctx);
    auto printed = pretty(t);
    auto again = parse_term_ok(printed, ctx);
    CAPTURE(src);
    CAPTURE(printed);
    CHECK(alpha_eq(t, again));
  };
  check_round("top");
  check_round("L[c] x. x");
  check_round("L[] x. (fst x, snd x)");
  check_round("case s of { inl x -> inr x ; inr y -> inl y }");
  check_round("n [a * b] q");
  check_round("L[c] x. n [c] (n [c] x)");
  check_round("map[p^1; g]{ p (g * g) }{ (\\c. c + c) }{ (\\c. c) }");
  check_round("map[p; g]{ p * g }{ g + g }{ g }");
  check_round("in{ mu f. \\c. 1 + c * f c }");
  check_round("fold{ mu f. \\c. 1 + c * f c }{ c * c }");
  check_round("kan[q^1; c]{ 1 }{ q c }");
  check_round("kan[;]{ 1 }{ 1 }");
  check_round("cokan[q^1; c; d]{ q d }{ 1 }{ q c } w");
  check_round("absurd { a } (fst q)");
  check_round("inl (inr top)");
}

TEST_CASE("printer renames colliding binder hints") {
  // Two nested binders with the same hint must not print ambiguously.
  auto inner = t_nat({BinderSlot{"a", 0}},
                     close_type(t_free("a"), {"a"}),
                     close_type(t_free("a"), {"a"}));
  auto outer = t_nat({BinderSlot{"a", 0}}, close_type(inner, {"a"}),
                     close_type(t_free("a"), {"a"}));
  auto printed = pretty(outer);
  auto again = parse_type_ok(printed);
  CHECK(alpha_eq(again, outer));

  // A binder hint colliding with a free variable must also be renamed.
  auto clash = t_nat({BinderSlot{"c", 0}},
                     close_type(t_prod(t_free("c"), t_free("d")), {"c"}),
                     close_type(t_free("c"), {"c"}));
  auto printed2 = pretty(clash);
  auto again2 = parse_type_ok(printed2, ctx_gamma({{"d", 0}}));
  CHECK(alpha_eq(again2, clash));
}

TEST_CASE("alpha equivalence ignores hints but not structure") {
  auto t1 = parse_type_ok("Nat[a](a, a)");
  auto t2 = parse_type_ok("Nat[z](z, z)");
  CHECK(alpha_eq(t1, t2));
  auto t3 = parse_type_ok("Nat[a](a, a + 1)");
  CHECK(!alpha_eq(t1, t3));
  auto ctx = ctx_gamma({{"x", 0}, {"y", 0}});
  CHECK(!alpha_eq(parse_type_ok("x", ctx), parse_type_ok("y", ctx)));
}

TEST_CASE("locations point at the offending token") {
  auto r = parse_type_string("1 + ]");
  REQUIRE(!r.is_ok());
  CHECK(r.error().loc.line == 1);
  CHECK(r.error().loc.col == 5);
}
