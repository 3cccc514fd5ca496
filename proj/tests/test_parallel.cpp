#include "doctest.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nearlat/algebra_io.hpp"
#include "nearlat/consequence.hpp"
#include "nearlat/enumerate.hpp"

using namespace nearlat;

// The parallel kernels must return bit-identical results to the serial
// reference, including which witness gets reported.

namespace {

FiniteAlgebra fixture(const std::string& name) {
  return read_algebra_file(std::string(NEARLAT_FIXTURES_DIR) + "/" + name);
}

bool same_witness(const CheckResult& a, const CheckResult& b) {
  if (a.ok != b.ok) return false;
  if (a.ok) return true;
  if (!a.witness || !b.witness) return false;
  return a.witness->law == b.witness->law && a.witness->tuple == b.witness->tuple &&
         a.witness->lhs == b.witness->lhs && a.witness->rhs == b.witness->rhs;
}

}  // namespace

TEST_CASE("law checks agree on valid and corrupted tables") {
  FiniteAlgebra good = fixture("fig1.alg");
  CHECK(same_witness(check_nearlattice(good, Exec::Serial),
                     check_nearlattice(good, Exec::Parallel)));
  CHECK(same_witness(check_distributive(good, Exec::Serial),
                     check_distributive(good, Exec::Parallel)));

  std::mt19937 rng(20240811);
  std::vector<std::uint8_t> base = good.table();
  for (int round = 0; round < 40; ++round) {
    std::vector<std::uint8_t> t = base;
    // Corrupt one to three cells.
    int hits = 1 + int(rng() % 3);
    for (int h = 0; h < hits; ++h)
      t[rng() % t.size()] = std::uint8_t(rng() % unsigned(good.size()));
    FiniteAlgebra bad(good.size(), t);
    CHECK(same_witness(check_nearlattice(bad, Exec::Serial),
                       check_nearlattice(bad, Exec::Parallel)));
  }
}

TEST_CASE("consequence scans agree, witness included") {
  AlgebraClass cls({fixture("fig1.alg"), fixture("fig2.alg")}, {"fig1", "fig2"});
  Signature sig = cls.signature();
  std::vector<ConsequenceQuery> queries;
  for (const char* concl : {"x0", "x0|x1", "m(x0,x1,x2)", "x1|x2"}) {
    for (Mode mode : {Mode::Plain, Mode::Degrees}) {
      ConsequenceQuery q;
      q.premises = {parse_formula("x0|x2", sig), parse_formula("x1|x2", sig)};
      q.conclusion = parse_formula(concl, sig);
      q.mode = mode;
      queries.push_back(q);
    }
  }
  for (const auto& q : queries) {
    ConsequenceResult s = consequence(q, cls, Exec::Serial);
    ConsequenceResult p = consequence(q, cls, Exec::Parallel);
    CHECK(s.holds == p.holds);
    CHECK(s.witness.has_value() == p.witness.has_value());
    if (s.witness && p.witness) {
      CHECK(s.witness->member == p.witness->member);
      CHECK(s.witness->valuation == p.witness->valuation);
      CHECK(s.witness->separating == p.witness->separating);
    }
  }
}

TEST_CASE("equivalence scans agree") {
  AlgebraClass cls({fixture("fig1.alg")});
  Signature sig = cls.signature();
  auto pairs = {
      std::pair<const char*, const char*>{"m(x0,x1,x2)", "m(x1,x0,x2)"},
      std::pair<const char*, const char*>{"x0|x1", "x1|x0"},
      std::pair<const char*, const char*>{"x0|x1", "x0"},
      std::pair<const char*, const char*>{"m(x0,x1,x2)", "x0|x2"},
  };
  for (auto [l, r] : pairs) {
    EquivalenceResult s =
        equivalent_in_class(parse_formula(l, sig), parse_formula(r, sig), cls,
                            Exec::Serial);
    EquivalenceResult p =
        equivalent_in_class(parse_formula(l, sig), parse_formula(r, sig), cls,
                            Exec::Parallel);
    CHECK(s.equal == p.equal);
    if (s.witness && p.witness) {
      CHECK(s.witness->member == p.witness->member);
      CHECK(s.witness->valuation == p.witness->valuation);
      CHECK(s.witness->lhs == p.witness->lhs);
      CHECK(s.witness->rhs == p.witness->rhs);
    } else {
      CHECK(s.witness.has_value() == p.witness.has_value());
    }
  }
}

TEST_CASE("enumeration agrees across execution policies") {
  for (int n = 1; n <= 4; ++n) {
    auto s = enumerate_dn(n, Exec::Serial);
    auto p = enumerate_dn(n, Exec::Parallel);
    REQUIRE(s.size() == p.size());
    for (size_t i = 0; i < s.size(); ++i) {
      CHECK(canonical_key(s[i]) == canonical_key(p[i]));
      CHECK(s[i].table() == p[i].table());
    }
  }
}
