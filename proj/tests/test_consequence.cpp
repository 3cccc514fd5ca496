#include "doctest.h"

#include <string>
#include <vector>

#include "nearlat/algebra_io.hpp"
#include "nearlat/consequence.hpp"

using namespace nearlat;

namespace {

FiniteAlgebra fixture(const std::string& name) {
  return read_algebra_file(std::string(NEARLAT_FIXTURES_DIR) + "/" + name);
}

ConsequenceQuery query(const AlgebraClass& cls, const std::vector<std::string>& prem,
                       const std::string& concl, Mode mode) {
  Signature sig = cls.signature();
  ConsequenceQuery q;
  for (const auto& p : prem) q.premises.push_back(parse_formula(p, sig));
  q.conclusion = parse_formula(concl, sig);
  q.mode = mode;
  return q;
}

}  // namespace

TEST_CASE("the three modes differ on the four-element example") {
  AlgebraClass cls({fixture("fig2.alg")}, {"fig2"});

  // Two incomparable designated bottoms entail anything by degrees: only
  // elements below both count, and there are none.
  CHECK(consequence(query(cls, {"bot1", "bot2"}, "x0", Mode::Degrees), cls).holds);

  // Folding the premises into the conclusion through m loses that: at
  // x0 = c the compound evaluates to 1 and the bound a slips between.
  ConsequenceResult folded =
      consequence(query(cls, {"m(bot1,bot2,x0)"}, "x0", Mode::Degrees), cls);
  CHECK_FALSE(folded.holds);
  REQUIRE(folded.witness.has_value());
  FiniteAlgebra a = fixture("fig2.alg");
  REQUIRE(folded.witness->valuation.size() == 1);
  CHECK(folded.witness->valuation[0].first == 0);
  CHECK(folded.witness->valuation[0].second == *a.index_of("c"));
  REQUIRE(folded.witness->separating.has_value());
  CHECK(*folded.witness->separating == *a.index_of("a"));

  // Plain mode disagrees with degrees here.
  ConsequenceResult plain =
      consequence(query(cls, {"bot1", "bot2"}, "x0", Mode::Plain), cls);
  CHECK_FALSE(plain.holds);
  CHECK(plain.witness.has_value());

  // Truth mode: no valuation makes bot1 equal the top, so it holds vacuously.
  CHECK(consequence(query(cls, {"bot1", "bot2"}, "x0", Mode::Truth), cls).holds);
}

TEST_CASE("plain consequences that do hold") {
  AlgebraClass cls({fixture("fig1.alg"), fixture("fig2.alg")}, {"fig1", "fig2"});
  CHECK(consequence(query(cls, {"x0"}, "x0|x1", Mode::Plain), cls).holds);
  CHECK(consequence(query(cls, {"m(x0,x1,x2)"}, "x0|x2", Mode::Plain), cls).holds);
  CHECK(consequence(query(cls, {"x0|x2", "x1|x2"}, "m(x0,x1,x2)", Mode::Plain), cls)
            .holds);
  CHECK_FALSE(consequence(query(cls, {"x0|x1"}, "x0", Mode::Plain), cls).holds);
  // Empty premises: the conclusion would have to be the top everywhere.
  CHECK_FALSE(consequence(query(cls, {}, "x0|x1", Mode::Plain), cls).holds);
}

TEST_CASE("witnesses are lexicographically first") {
  AlgebraClass cls({fixture("fig2.alg")}, {"fig2"});
  ConsequenceResult r = consequence(query(cls, {"x0|x1"}, "x0", Mode::Plain), cls);
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->member == 0);
  CHECK(r.witness->label == "fig2");
  // First failing valuation in scan order: x0 = a, x1 = b (indexes 0, 1).
  REQUIRE(r.witness->valuation.size() == 2);
  CHECK(r.witness->valuation[0].second == 0);
  CHECK(r.witness->valuation[1].second == 1);
}

TEST_CASE("term equivalence over a class") {
  AlgebraClass cls({fixture("fig1.alg"), fixture("fig2.alg")});
  Signature sig = cls.signature();
  // Permuting the first two arguments never changes the value.
  EquivalenceResult sym = equivalent_in_class(parse_formula("m(x0,x1,x2)", sig),
                                              parse_formula("m(x1,x0,x2)", sig), cls);
  CHECK(sym.equal);
  EquivalenceResult diff = equivalent_in_class(parse_formula("x0|x1", sig),
                                               parse_formula("x0", sig), cls);
  CHECK_FALSE(diff.equal);
  REQUIRE(diff.witness.has_value());
  CHECK(diff.witness->lhs != diff.witness->rhs);
}

TEST_CASE("formula generation is bounded and deterministic") {
  auto depth0 = generate_formulas(3, 0);
  CHECK(depth0.size() == 3);
  auto depth1 = generate_formulas(3, 1);
  CHECK(depth1.size() == 30);  // 3 variables + 27 one-step compounds
  // Determinism: regenerate and compare printed forms.
  auto again = generate_formulas(3, 1);
  for (size_t i = 0; i < depth1.size(); ++i)
    CHECK(to_string(depth1[i]) == to_string(again[i]));
  CHECK_THROWS_AS(generate_formulas(3, 2), std::invalid_argument);
}

TEST_CASE("schema audit is clean over distributive members") {
  AlgebraClass cls({fixture("fig2.alg"), fixture("fig1.alg")});
  DnTermAudit audit = audit_dn_term(cls);
  CHECK(audit.ok());
  CHECK(audit.instances > 0);
}

TEST_CASE("schema audit flags a non-distributive member") {
  // The five-element pentagon: 0 < a < c < 1 and 0 < b < 1. Every pair has
  // a join and every upset is a lattice, but distribution fails.
  FiniteAlgebra n5 =
      from_hasse({"0", "a", "c", "b", "1"}, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}});
  CHECK(check_nearlattice(n5).ok);
  CHECK_FALSE(check_distributive(n5).ok);
  AlgebraClass cls({n5}, {"n5"}, ClassLaws::Nearlattice);
  DnTermAudit audit = audit_dn_term(cls);
  CHECK_FALSE(audit.ok());
  CHECK_FALSE(audit.equational_failures.empty());
  // The consequence schemas themselves survive in any nearlattice.
  CHECK(audit.schema_violations.empty());
}

TEST_CASE("closed sets of the class consequence") {
  FiniteAlgebra a = fixture("fig2.alg");
  AlgebraClass cls({a});
  auto closed = sfilters(a, cls);
  CHECK(closed.size() == 9);  // the eight filters plus the empty set
  CHECK(closed.front() == 0);
}

TEST_CASE("generated filters line up with top blocks") {
  FiniteAlgebra a = fixture("fig2.alg");
  HypothesisAudit h = truth_filter_hypothesis(a);
  CHECK(h.ok);
}

TEST_CASE("mode names round trip") {
  for (Mode m : {Mode::Plain, Mode::Degrees, Mode::Truth}) {
    auto back = mode_from_string(to_string(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK_FALSE(mode_from_string("loud").has_value());
}
