#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "nearlat/algebra_io.hpp"
#include "nearlat/congruences.hpp"
#include "nearlat/filters.hpp"

using namespace nearlat;

namespace {

FiniteAlgebra fixture(const std::string& name) {
  return read_algebra_file(std::string(NEARLAT_FIXTURES_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("congruences of the four-element example") {
  FiniteAlgebra a = fixture("fig2.alg");  // order a, b, c, 1
  auto cs = all_congruences(a);
  std::vector<Partition> expect = {
      {0, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 1, 1},
      {0, 1, 2, 0}, {0, 1, 2, 1}, {0, 1, 2, 2}, {0, 1, 2, 3}};
  CHECK(cs == expect);
}

TEST_CASE("rejected partitions") {
  FiniteAlgebra a = fixture("fig2.alg");
  // Merging just a and b: m(a,a,a) = a while m(a,a,b) = 1, so a ~ b would
  // force a ~ 1.
  CHECK_FALSE(is_congruence(a, {0, 0, 1, 2}));
  // Blocks {a,1}, {b,c}: m(b,b,b) = b while m(b,b,c) = 1, and b !~ 1.
  CHECK_FALSE(is_congruence(a, {0, 1, 1, 0}));
  CHECK(is_congruence(a, {0, 1, 2, 3}));
  CHECK(is_congruence(a, total_partition(4)));
}

TEST_CASE("partition utilities") {
  CHECK(canonical_partition({2, 2, 0, 1}) == Partition{0, 0, 1, 2});
  CHECK(identity_partition(3) == Partition{0, 1, 2});
  CHECK(total_partition(3) == Partition{0, 0, 0});
  CHECK(refines({0, 1, 2, 3}, {0, 0, 1, 1}));
  CHECK_FALSE(refines({0, 0, 1, 1}, {0, 1, 2, 3}));
  CHECK(join_partitions({0, 0, 1, 2}, {0, 1, 1, 2}) == Partition{0, 0, 0, 1});
  auto bs = blocks_of({0, 1, 0, 2});
  CHECK(bs == std::vector<std::uint64_t>{0b0101, 0b0010, 0b1000});
}

TEST_CASE("quotient by a congruence") {
  FiniteAlgebra a = fixture("fig2.alg");
  // Collapse b, c, 1; the blocks {a}, {b,c,1} form a two-element chain.
  FiniteAlgebra q = quotient(a, {0, 1, 1, 1});
  CHECK(q.size() == 2);
  CHECK(check_nearlattice(q).ok);
  CHECK(q.greatest().has_value());
  // Constants follow their blocks.
  CHECK(q.constants().at("top") == q.constants().at("bot2"));
  CHECK(q.constants().at("bot1") != q.constants().at("top"));
  // Quotient by the identity is isomorphic (here: equal tables).
  FiniteAlgebra same = quotient(a, identity_partition(4));
  CHECK(same.table() == a.table());
}

TEST_CASE("generalized matrix relations on a chain") {
  FiniteAlgebra chain = from_hasse({"0", "1", "2"}, {{0, 1}, {1, 2}});
  // Closure system of all upsets plus the empty set.
  std::vector<std::uint64_t> closed = {0b000, 0b100, 0b110, 0b111};
  GMatrix g(chain, closed);
  CHECK(g.closure_of(0b001) == 0b111);
  CHECK(g.closure_of(0b100) == 0b100);
  // Principal upsets separate points, so the Frege relation is identity.
  CHECK(frege_relation(g) == identity_partition(3));
  CHECK(tarski_congruence(g) == identity_partition(3));
  // A closure system that cannot see the difference between 1 and 2...
  // {0,1,2} and {} only: every singleton closes to the whole carrier.
  GMatrix blind(chain, {0b000, 0b111});
  CHECK(frege_relation(blind) == total_partition(3));
  CHECK(tarski_congruence(blind) == total_partition(3));
}

TEST_CASE("Leibniz congruence of a filter") {
  FiniteAlgebra a = fixture("fig2.alg");
  // For the filter {1}: no two distinct elements are indistinguishable.
  std::uint64_t top_only = 1ULL << *a.index_of("1");
  CHECK(leibniz_congruence(a, top_only) == identity_partition(4));
  // For the improper filter everything collapses.
  CHECK(leibniz_congruence(a, a.universe_mask()) == total_partition(4));
}

TEST_CASE("point regularity of the four-element example") {
  FiniteAlgebra a = fixture("fig2.alg");
  AlgebraClass cls({a.with_top()});
  PointRegularityResult r = is_point_regular(cls);
  CHECK(r.ok);
  CHECK(r.detail.empty());
}
