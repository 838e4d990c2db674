// Second-order substitution: the clause table, capture safety, and the
// parallel/sequential first-order helpers it leans on.
#include <doctest.h>

#include <string>
#include <vector>

#include "nestcalc/parser.hpp"
#include "nestcalc/pretty.hpp"
#include "nestcalc/subst.hpp"

using namespace nestcalc;

namespace {

ContextDecl dctx(std::vector<BinderSlot> gamma,
                 std::vector<BinderSlot> phi = {}) {
  ContextDecl d;
  d.gamma = std::move(gamma);
  d.phi = std::move(phi);
  return d;
}

TypePtr ty(const std::string& src, const ContextDecl& c = {}) {
  auto r = parse_type_string(src, c);
  REQUIRE_MESSAGE(r.is_ok(), ("parse failed on \"" + src + "\": " +
                              (r.is_ok() ? std::string() : r.error().message)));
  return r.value();
}

void check_subst(const std::string& h, const std::string& phi,
                 const std::vector<std::string>& alphas, const std::string& f,
                 const std::string& expected, const ContextDecl& hctx,
                 const ContextDecl& fctx, const ContextDecl& ectx) {
  auto out = subst_type(ty(h, hctx), phi, alphas, ty(f, fctx));
  CAPTURE(h);
  CAPTURE(f);
  CHECK_MESSAGE(alpha_eq(out, ty(expected, ectx)),
                ("got " + pretty(out) + ", expected " + expected));
}

}  // namespace

TEST_CASE("substitution replaces applications of the functorial variable") {
  auto hc = dctx({{"b", 0}}, {{"phi", 1}});
  auto fc = dctx({{"a", 0}});
  auto ec = dctx({{"b", 0}});
  check_subst("phi b", "phi", {"a"}, "1 + a", "1 + b", hc, fc, ec);
  check_subst("b + phi (b * b)", "phi", {"a"}, "a + a",
              "b + (b * b + b * b)", hc, fc, ec);
  // Arguments are substituted before they land in the designated holes.
  check_subst("phi (phi b)", "phi", {"a"}, "a * a", "(b * b) * (b * b)", hc,
              fc, ec);
}

TEST_CASE("substitution at higher arity places arguments by position") {
  auto hc = dctx({{"b", 0}, {"c", 0}}, {{"phi", 2}});
  auto fc = dctx({{"a1", 0}, {"a2", 0}});
  auto ec = dctx({{"b", 0}, {"c", 0}});
  check_subst("phi b c", "phi", {"a1", "a2"}, "a2 + a1", "c + b", hc, fc, ec);
  check_subst("phi (phi b c) c", "phi", {"a1", "a2"}, "a1 * a2",
              "(b * c) * c", hc, fc, ec);
}

TEST_CASE("constants and other variables are untouched") {
  auto hc = dctx({{"b", 0}}, {{"phi", 1}, {"psi", 1}});
  auto fc = dctx({{"a", 0}});
  auto ec = dctx({{"b", 0}}, {{"psi", 1}});
  check_subst("0 + 1", "phi", {"a"}, "a", "0 + 1", hc, fc, ec);
  check_subst("psi (phi b)", "phi", {"a"}, "a * a", "psi (b * b)", hc, fc,
              ec);
}

TEST_CASE("transformer types are opaque to substitution") {
  auto hc = dctx({{"b", 0}}, {{"phi", 1}});
  auto fc = dctx({{"a", 0}});
  auto ec = dctx({{"b", 0}});
  check_subst("Nat[c](c, c) + phi b", "phi", {"a"}, "1 + a",
              "Nat[c](c, c) + (1 + b)", hc, fc, ec);
}

TEST_CASE("fixpoints substitute only in their arguments") {
  auto hc = dctx({{"x", 0}}, {{"phi", 1}});
  auto fc = dctx({{"a", 0}});
  auto ec = dctx({{"x", 0}});
  check_subst("(mu g. \\b. 1 + b * g b) (phi x)", "phi", {"a"}, "a * a",
              "(mu g. \\b. 1 + b * g b) (x * x)", hc, fc, ec);
}

TEST_CASE("unrolling a fixpoint body lands on the one-step unfolding") {
  // The perfect-tree body over its own fixpoint: substituting the applied
  // fixpoint for the recursion variable and renaming the parameter yields
  // the expected one-level unfolding.
  auto hc = dctx({{"b", 0}}, {{"p", 1}});
  auto h = ty("b + p (b * b)", hc);
  auto tree = ty("(mu p. \\b. b + p (b * b)) c", dctx({{"c", 0}}));
  auto step = subst_type(h, "p", {"c"}, tree);
  auto unrolled = subst_free_type_var(step, "b", t_free("c"));
  auto expected = ty("c + (mu p. \\b. b + p (b * b)) (c * c)",
                     dctx({{"c", 0}}));
  CHECK_MESSAGE(alpha_eq(unrolled, expected), pretty(unrolled));
}

TEST_CASE("extension types substitute in body and arguments, not along") {
  auto hc = dctx({{"x", 0}}, {{"phi", 1}});
  auto fc = dctx({{"a", 0}});
  auto ec = dctx({{"x", 0}});
  check_subst("Lan[al]{ al }{ phi al } (phi x)", "phi", {"a"}, "a + 1",
              "Lan[al]{ al }{ al + 1 } (x + 1)", hc, fc, ec);
}

TEST_CASE("substitution cannot capture under extension binders") {
  // F mentions a free variable that happens to collide with the binder hint.
  auto h = ty("Lan[x]{ x }{ phi x } y", dctx({{"y", 0}}, {{"phi", 1}}));
  auto f = ty("a + x", dctx({{"a", 0}, {"x", 0}}));
  auto out = subst_type(h, "phi", {"a"}, f);
  // The free x of F must stay free in the result.
  auto frees = free_type_vars(out);
  bool has_free_x = false;
  for (auto& [name, arity] : frees) has_free_x |= (name == "x" && arity == 0);
  CHECK_MESSAGE(has_free_x, pretty(out));
  // And the printed form re-parses to the same tree (binder renamed).
  auto again = ty(pretty(out), dctx({{"y", 0}, {"x", 0}}));
  CHECK(alpha_eq(again, out));
}

TEST_CASE("parallel substitution is simultaneous") {
  auto t = ty("a * b", dctx({{"a", 0}, {"b", 0}}));
  auto swapped = subst_type_parallel(t, {"a", "b"}, {t_free("b"), t_free("a")});
  CHECK(alpha_eq(swapped, ty("b * a", dctx({{"a", 0}, {"b", 0}}))));

  // The sequential helper, by contrast, threads earlier replacements through
  // later ones.
  auto seq = subst_type_sequential(t, {"a", "b"}, {t_free("b"), t_free("c")});
  CHECK(alpha_eq(seq, ty("c * c", dctx({{"c", 0}}))));
}

TEST_CASE("substitution reaches types embedded in terms") {
  ContextDecl c;
  c.gamma = {{"b", 0}};
  c.phi = {{"phi", 1}};
  auto r = parse_term_string("L[] x. absurd { phi b } x", c);
  REQUIRE(r.is_ok());
  auto out = subst_term_type_second_order(r.value(), "phi", {"a"},
                                          ty("1 + a", dctx({{"a", 0}})));
  auto expected =
      parse_term_string("L[] x. absurd { 1 + b } x", dctx({{"b", 0}}));
  REQUIRE(expected.is_ok());
  CHECK(alpha_eq(out, expected.value()));

  auto renamed = subst_term_type(r.value(), "b", t_free("z"));
  auto expected2 = parse_term_string("L[] x. absurd { phi z } x",
                                     dctx({{"z", 0}}, {{"phi", 1}}));
  REQUIRE(expected2.is_ok());
  CHECK(alpha_eq(renamed, expected2.value()));
}

TEST_CASE("substituting an absent variable is the identity") {
  auto hc = dctx({{"b", 0}});
  auto t = ty("(mu f. \\c. 1 + c * f c) b + Nat[d](d, d)", hc);
  auto out = subst_type(t, "phi", {"a"}, ty("a", dctx({{"a", 0}})));
  CHECK(alpha_eq(out, t));
  CHECK(type_key(out) == type_key(t));
}
