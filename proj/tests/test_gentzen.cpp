#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "nearlat/algebra_io.hpp"
#include "nearlat/gentzen.hpp"

using namespace nearlat;

namespace {

FiniteAlgebra fixture(const std::string& name) {
  return read_algebra_file(std::string(NEARLAT_FIXTURES_DIR) + "/" + name);
}

ProofNode must_prove(const std::string& text, int depth = 8) {
  ProveOutcome out = prove(parse_sequent(text), depth);
  REQUIRE_MESSAGE(out.proof.has_value(), "no proof for " << text << ": " << out.note);
  ProofCheck pc = check_proof(*out.proof);
  REQUIRE_MESSAGE(pc.valid, pc.node << ": " << pc.reason);
  return *out.proof;
}

void collect_rules(const ProofNode& p, std::set<Rule>& out) {
  out.insert(p.rule);
  for (const auto& c : p.children) collect_rules(c, out);
}

}  // namespace

TEST_CASE("sequent parsing and printing") {
  Sequent s = parse_sequent("x1|x2, x0 |- m(x0,x1,x2)");
  CHECK(s.premises.size() == 2);
  // Left side sorted; join sugar prints in canonical m-form.
  CHECK(to_string(s) == "x0, m(x1,x1,x2) |- m(x0,x1,x2)");
  Sequent empty_left = parse_sequent("|- x0|x1");
  CHECK(empty_left.premises.empty());
  CHECK(to_string(empty_left) == "|- m(x0,x0,x1)");
  // Duplicates collapse; order does not matter for equality.
  CHECK(parse_sequent("x0, x0, x1 |- x2") == parse_sequent("x1, x0 |- x2"));
  CHECK_THROWS_AS(parse_sequent("x0 |-"), SequentError);
  CHECK_THROWS_AS(parse_sequent("x0, x1"), SequentError);
}

TEST_CASE("rule names round trip") {
  for (Rule r : {Rule::Axiom, Rule::Weakening, Rule::Cut, Rule::OrLeft,
                 Rule::OrRightL, Rule::OrRightR, Rule::MLeft1, Rule::MLeft2,
                 Rule::MRight, Rule::MnLeft}) {
    auto back = rule_from_name(rule_name(r));
    REQUIRE(back.has_value());
    CHECK(*back == r);
    CHECK(rule_arity(r) >= 0);
    CHECK(rule_arity(r) <= 2);
  }
  CHECK_FALSE(rule_from_name("Resolution").has_value());
}

TEST_CASE("axioms and projections prove in one step") {
  ProofNode ax = must_prove("x0 |- x0", 1);
  CHECK(ax.rule == Rule::Axiom);
  CHECK(ax.children.empty());
  ProofNode ml = must_prove("m(x0,x1,x2) |- x0|x2", 1);
  CHECK(ml.rule == Rule::MLeft1);
  ProofNode mr = must_prove("m(x0,x1,x2) |- x1|x2", 1);
  CHECK(mr.rule == Rule::MLeft2);
}

TEST_CASE("joining the premises into the conclusion") {
  // Both joins entail the compound; the search needs the two-premise rule
  // with the shared context.
  ProofNode p = must_prove("x0|x2, x1|x2 |- m(x0,x1,x2)", 5);
  CHECK(p.rule == Rule::MRight);
  std::set<Rule> used;
  collect_rules(p, used);
  CHECK(used.count(Rule::Weakening) == 1);
  CHECK(used.count(Rule::Axiom) == 1);
}

TEST_CASE("iterated compound on the left") {
  // m(x0|x2,x2,x2) is the two-generator compound of {x0,x2} into x2.
  ProofNode one = must_prove("m(x0|x2,x2,x2) |- x2", 3);
  CHECK(one.rule == Rule::MnLeft);
  // Three generators, still one peeling step per generator.
  ProofNode nested = must_prove("m(m(x0|x2,x1,x2),x2,x2) |- x2", 5);
  CHECK(nested.rule == Rule::MnLeft);
  REQUIRE(nested.subst.size() == 4);  // phi0..phi2 and phi
  CHECK(nested.subst.back().first == "phi");
}

TEST_CASE("compounds that are not literal iterated terms need a cut") {
  // m(x0,x2,x2) is not of the iterated shape (the first slot is no join),
  // but it still entails x2; the search gets there through Cut.
  ProofNode p = must_prove("m(x0,x2,x2) |- x2", 8);
  std::set<Rule> used;
  collect_rules(p, used);
  CHECK(used.count(Rule::Cut) == 1);
}

TEST_CASE("case split over a disjunction") {
  ProofNode p = must_prove("x0|x1 |- x1|x0", 4);
  std::set<Rule> used;
  collect_rules(p, used);
  CHECK(used.count(Rule::OrLeft) == 1);
  CHECK(used.count(Rule::OrRightL) + used.count(Rule::OrRightR) >= 1);
}

TEST_CASE("underivable sequents come back with a bounded note") {
  ProveOutcome out = prove(parse_sequent("x0 |- x1"), 4);
  CHECK_FALSE(out.proof.has_value());
  CHECK(out.note.find("depth") != std::string::npos);
  ProveOutcome weak = prove(parse_sequent("x0|x1 |- x0"), 4);
  CHECK_FALSE(weak.proof.has_value());
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(prove(parse_sequent("x0 |- x0"), 0), std::invalid_argument);
  CHECK_THROWS_AS(prove(parse_sequent("x0 |- x0"), 3, -1), std::invalid_argument);
}

TEST_CASE("certificates round trip byte for byte") {
  for (const char* text :
       {"x0 |- x0", "m(x0,x1,x2) |- x0|x2", "x0|x2, x1|x2 |- m(x0,x1,x2)",
        "x0|x1 |- x1|x0", "m(x0|x2,x2,x2) |- x2", "m(x0,x2,x2) |- x2"}) {
    ProofNode p = must_prove(text);
    std::string cert = write_certificate(p);
    ProofNode back = parse_certificate(cert);
    CHECK(write_certificate(back) == cert);
    ProofCheck pc = check_proof(back);
    CHECK(pc.valid);
    CHECK(back.sequent == p.sequent);
  }
}

TEST_CASE("tampered proofs are rejected with a location") {
  ProofNode p = must_prove("x0|x2, x1|x2 |- m(x0,x1,x2)", 5);
  ProofNode broken = p;
  // Change the root conclusion without touching the children.
  broken.sequent.conclusion = parse_sequent("x0 |- m(x1,x0,x2)").conclusion;
  ProofCheck pc = check_proof(broken);
  CHECK_FALSE(pc.valid);
  CHECK(pc.node == "root");
  CHECK_FALSE(pc.reason.empty());

  ProofNode deep = p;
  REQUIRE_FALSE(deep.children.empty());
  deep.children[0].rule = Rule::Axiom;
  deep.children[0].children.clear();
  deep.children[0].subst.clear();
  ProofCheck pd = check_proof(deep);
  CHECK_FALSE(pd.valid);
  CHECK(pd.node.rfind("root.", 0) == 0);
}

TEST_CASE("certificate parse errors carry line numbers") {
  for (const char* bad :
       {"1. x0 |- x0 ; NoSuchRule ; from - ; subst\n",
        "2. x0 |- x0 ; Axiom ; from - ; subst\n",           // ids must be 1..k
        "1. x0 |- x0 ; Axiom ; from 1 ; subst\n",           // child of itself
        "1. x0 |- x0 ; Axiom ; from - ; subst\n"
        "2. x1 |- x1 ; Axiom ; from - ; subst\n"}) {        // two roots remain
    CHECK_THROWS_AS(parse_certificate(bad), CertificateError);
  }
  try {
    parse_certificate("1. x0 |- x0 ; Weakening ; from - ; subst\n");
    FAIL_CHECK("arity mismatch accepted");
  } catch (const CertificateError& e) {
    CHECK(e.line_number == 1);
    CHECK(std::string(e.what()).rfind("line 1: ", 0) == 0);
  }
}

TEST_CASE("hand-built cut passes validation") {
  Signature sig;
  TermPtr x0 = parse_formula("x0", sig);
  TermPtr x1 = parse_formula("x1", sig);
  TermPtr cutf = parse_formula("x1|x0", sig);
  TermPtr goal = parse_formula("x0|x1", sig);

  ProofNode ax{Rule::Axiom, Sequent::make({x0}, x0), {}, {{"phi", x0}}};
  ProofNode left{Rule::OrRightR, Sequent::make({x0}, cutf), {ax},
                 {{"phi", x1}, {"psi", x0}}};
  ProofNode ax2{Rule::Axiom, Sequent::make({x0}, x0), {}, {{"phi", x0}}};
  ProofNode wk{Rule::Weakening, Sequent::make({x0, cutf}, x0), {ax2},
               {{"psi", cutf}}};
  ProofNode right{Rule::OrRightL, Sequent::make({x0, cutf}, goal), {wk},
                  {{"phi", x0}, {"psi", x1}}};
  ProofNode cut{Rule::Cut, Sequent::make({x0}, goal), {left, right},
                {{"phi", cutf}, {"psi", goal}}};
  ProofCheck pc = check_proof(cut);
  REQUIRE_MESSAGE(pc.valid, pc.node << ": " << pc.reason);

  // And it is sound over the examples.
  AlgebraClass cls({fixture("fig1.alg"), fixture("fig2.alg")});
  SoundnessReport rep = soundness_audit(cut, cls);
  CHECK(rep.consistent);

  // Swapping the cut formula binding must be caught.
  ProofNode wrong = cut;
  wrong.subst[0].second = parse_formula("x0|x1", sig);
  CHECK_FALSE(check_proof(wrong).valid);
}

TEST_CASE("soundness audit on plain sequents") {
  AlgebraClass cls({fixture("fig1.alg"), fixture("fig2.alg")});
  CHECK(soundness_audit(parse_sequent("m(x0,x1,x2) |- x0|x2"), cls).consistent);
  SoundnessReport bad = soundness_audit(parse_sequent("x0|x1 |- x0"), cls);
  CHECK_FALSE(bad.consistent);
  CHECK_FALSE(bad.detail.empty());
}
