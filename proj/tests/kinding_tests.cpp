// Well-formedness judgment: which types kind-check over which contexts, and
// which of the named violations each ill-formed type reports.
#include <doctest.h>

#include <string>
#include <vector>

#include "nestcalc/kinding.hpp"
#include "nestcalc/parser.hpp"

using namespace nestcalc;

namespace {

TypeContext ctx(std::vector<BinderSlot> gamma, std::vector<BinderSlot> phi = {}) {
  return TypeContext{std::move(gamma), std::move(phi)};
}

ContextDecl as_decl(const TypeContext& c) {
  ContextDecl d;
  d.gamma = c.gamma;
  d.phi = c.phi;
  return d;
}

TypePtr ty(const std::string& src, const TypeContext& c = {}) {
  auto r = parse_type_string(src, as_decl(c));
  REQUIRE_MESSAGE(r.is_ok(), ("parse failed on \"" + src + "\": " +
                              (r.is_ok() ? std::string() : r.error().message)));
  return r.value();
}

void accepts(const std::string& src, const TypeContext& c,
             bool gadt = false) {
  auto err = check_type(ty(src, c), c, gadt);
  CAPTURE(src);
  CHECK_MESSAGE(!err.has_value(), (err ? describe(*err) : std::string()));
}

std::string rejects(const std::string& src, const TypeContext& c,
                    bool gadt = false) {
  auto err = check_type(ty(src, c), c, gadt);
  CAPTURE(src);
  REQUIRE_MESSAGE(err.has_value(), ("expected a kind error for \"" + src + "\""));
  return error_code(*err);
}

}  // namespace

TEST_CASE("base connectives kind over any context") {
  accepts("0", {});
  accepts("1", {});
  accepts("1 + 1 * 1", {});
  accepts("a * (b + 0)", ctx({{"a", 0}, {"b", 0}}));
}

TEST_CASE("variables resolve through gamma or phi at the right arity") {
  accepts("f a", ctx({{"a", 0}}, {{"f", 1}}));
  accepts("f a", ctx({{"a", 0}, {"f", 1}}));  // non-functorial use is fine

  auto c = ctx({{"a", 0}}, {{"f", 1}});
  // These shapes cannot be written in surface syntax (the parser enforces
  // arity), so build them directly.
  auto unapplied = t_free("f");
  CHECK(error_code(*check_type(unapplied, c, false)) == "ArityMismatch");
  auto unknown = t_free("zzz");
  CHECK(error_code(*check_type(unknown, c, false)) == "UnknownVariable");
}

TEST_CASE("standard nested fixpoints kind-check") {
  auto c = ctx({{"a", 0}});
  // Lists: a regular datatype in fixpoint clothing.
  accepts("(mu f. \\b. 1 + b * f b) a", c);
  // Perfect trees: the recursive call squares its parameter.
  accepts("(mu p. \\b. b + p (b * b)) a", c);
  // Bushes: truly nested, the parameter recurses through the fixpoint.
  accepts("(mu f. \\b. 1 + b * f (f b)) a", c);
  // Forests: two interleaved shapes.
  accepts("(mu f. \\b. 1 + b * f (b * b)) a", c);
  // Two parameters.
  accepts("(mu f. \\b, c. c + b * f c b) a (a + 1)", c);
}

TEST_CASE("fixpoint bodies may not use enclosing functorial variables") {
  // With f functorial, the rose-tree body smuggles f into the fixpoint.
  auto c = ctx({{"a", 0}}, {{"f", 1}});
  CHECK(rejects("(mu w. \\b. b * f (w b)) a", c) ==
        "IllegalFunctorialVariableInMuBody");
  CHECK(rejects("(mu g. \\b. f b + g b) a", c) ==
        "IllegalFunctorialVariableInMuBody");

  // The same shape is fine when f merely sits in gamma.
  accepts("(mu w. \\b. b * f (w b)) a", ctx({{"a", 0}, {"f", 1}}));

  // Nested fixpoints: the inner body may use its own variables only.
  accepts("(mu f. \\b. 1 + (mu g. \\c. c + g (c * c)) b * f b) a",
          ctx({{"a", 0}}));
  CHECK(rejects("(mu f. \\b. 1 + (mu g. \\c. f c + g c) b) a",
                ctx({{"a", 0}})) == "IllegalFunctorialVariableInMuBody");
}

TEST_CASE("transformer components forget the enclosing functorial part") {
  auto c = ctx({{"a", 0}}, {{"f", 1}});
  // f is functorial outside, hence invisible inside the Nat components.
  CHECK(rejects("Nat[b](f b, b)", c) == "UnknownVariable");
  // gamma passes through.
  accepts("Nat[b](b * a, b)", c);
  // The binders themselves are in scope.
  accepts("Nat[b, c](b + c, c)", {});
  // A transformer type is a plain object: it can sit inside a fixpoint body.
  accepts("(mu g. \\b. Nat[c](c, c) + g b) a", ctx({{"a", 0}}));
}

TEST_CASE("higher-arity transformer binders need gadt mode") {
  auto c = ctx({{"a", 0}});
  CHECK(rejects("Nat[p^1](p a, a)", c) == "NatBinderArityViolation");
  accepts("Nat[p^1](p a, a)", c, /*gadt=*/true);
}

TEST_CASE("extension types are gadt-only") {
  auto c = ctx({{"b", 0}});
  CHECK(rejects("Lan[a]{ a }{ a } b", c) == "LanDisabled");
  accepts("Lan[a]{ a }{ a } b", c, /*gadt=*/true);
  // Degenerate instance: no binders, constant along-type.
  accepts("Lan[]{ 1 }{ 1 } b", c, true);
}

TEST_CASE("extension bodies see enclosing functorial variables") {
  auto c = ctx({{"b", 0}}, {{"f", 1}});
  // body in phi+binders, along in binders only, arguments outside.
  accepts("Lan[a]{ a }{ f a } b", c, true);
  CHECK(rejects("Lan[a]{ f a }{ a } b", c, true) == "UnknownVariable");
  accepts("Lan[a]{ a }{ a } (f b)", c, true);
  // Inside a fixpoint body the enclosing functorial part is still banned.
  CHECK(rejects("(mu g. \\c. Lan[a]{ a }{ f a } c) b", c, true) ==
        "IllegalFunctorialVariableInMuBody");
}

TEST_CASE("api-built malformed applications are caught") {
  auto c = ctx({{"a", 0}}, {{"f", 2}});
  auto bad = t_free("f", {t_free("a")});
  auto err = check_type(bad, c, false);
  REQUIRE(err.has_value());
  CHECK(error_code(*err) == "ArityMismatch");
  CHECK(describe(*err).find("f") != std::string::npos);

  // A fixpoint applied to the wrong number of arguments.
  auto body = close_type(t_free("b"), {"g", "b"});
  auto badmu = t_mu(BinderSlot{"g", 1}, {BinderSlot{"b", 0}}, body,
                    {t_free("a"), t_free("a")});
  auto err2 = check_type(badmu, c, false);
  REQUIRE(err2.has_value());
  CHECK(error_code(*err2) == "ArityMismatch");
}

TEST_CASE("demotion forgets functoriality and preserves kinding") {
  auto c = ctx({{"a", 0}}, {{"f", 1}});
  auto t = ty("f (f a) + a", c);
  REQUIRE(!check_type(t, c, false).has_value());

  auto d = demote(c, t, "f");
  REQUIRE(d.has_value());
  CHECK(d->ctx.phi.empty());
  REQUIRE(d->ctx.gamma.size() == 2);
  CHECK(!check_type(d->type, d->ctx, false).has_value());

  // The demoted occurrences got the fresh name.
  auto frees = free_type_vars(d->type);
  bool found = false;
  for (auto& [name, arity] : frees) {
    if (name == d->fresh) {
      found = true;
      CHECK(arity == 1);
    }
    CHECK(name != "f");
  }
  CHECK(found);

  CHECK(!demote(c, t, "nosuch").has_value());
}

TEST_CASE("weakening preserves kinding") {
  auto c = ctx({{"a", 0}});
  auto t = ty("(mu f. \\b. 1 + b * f b) a", c);
  REQUIRE(!check_type(t, c, false).has_value());

  auto widened = weaken(weaken(c, {"z", 0}, false), {"h", 2}, true);
  CHECK(!check_type(t, widened, false).has_value());
  CHECK(widened.gamma.size() == 2);
  CHECK(widened.phi.size() == 1);
}

TEST_CASE("kind errors carry usable descriptions") {
  auto c = ctx({}, {{"f", 1}});
  auto err = check_type(ty("(mu g. \\b. f b + g b) 1", c), c, false);
  REQUIRE(err.has_value());
  auto text = describe(*err);
  CHECK(text.find("f") != std::string::npos);
  CHECK(text.find("functorial") != std::string::npos);
}
