#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "nearlat/algebra_io.hpp"
#include "nearlat/modal.hpp"

using namespace nearlat;

namespace {

FiniteAlgebra fixture(const std::string& name) {
  return read_algebra_file(std::string(NEARLAT_FIXTURES_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("boxes on the four-element example") {
  FiniteAlgebra a = fixture("fig2.alg");
  int top = *a.index_of("1");
  std::vector<std::uint8_t> identity = {0, 1, 2, 3};
  std::vector<std::uint8_t> constant(4, std::uint8_t(top));
  // a and b swap; no two distinct elements here have a meet, so every
  // top-fixing table distributes over meets vacuously.
  std::vector<std::uint8_t> swap = {1, 0, 2, 3};

  for (const auto& box : {identity, constant, swap}) {
    FiniteAlgebra m = a.with_box(box);
    ModalCheckResult r = check_modal(m);
    CHECK(r.ok);
    ModalCheckResult viaIdentity = check_identity_M(m);
    CHECK(viaIdentity.ok);
  }
  CHECK(box_is_monotone(a.with_box(identity)));
  CHECK(box_is_monotone(a.with_box(constant)));
  // The swap is monotone too: the only comparabilities run into the top.
  CHECK(box_is_monotone(a.with_box(swap)));
}

TEST_CASE("a box that moves the top is rejected") {
  FiniteAlgebra a = fixture("fig2.alg");
  FiniteAlgebra m = a.with_box({0, 1, 2, 0});
  ModalCheckResult r = check_modal(m);
  REQUIRE_FALSE(r.ok);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->condition == "box fixes top");
  CHECK_THROWS_AS(check_identity_M(m), std::invalid_argument);
}

TEST_CASE("a box that breaks meet distribution is rejected") {
  FiniteAlgebra chain = from_hasse({"0", "1", "2"}, {{0, 1}, {1, 2}});
  FiniteAlgebra m = chain.with_top().with_box({2, 0, 2});
  ModalCheckResult r = check_modal(m);
  REQUIRE_FALSE(r.ok);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->condition != "box fixes top");
  // The single characteristic identity fails as well.
  ModalCheckResult v = check_identity_M(m);
  CHECK_FALSE(v.ok);
  CHECK(v.witness.has_value());
  CHECK_FALSE(box_is_monotone(m));
}

TEST_CASE("monotone boxes on a chain pass") {
  FiniteAlgebra chain = from_hasse({"0", "1", "2"}, {{0, 1}, {1, 2}});
  // On a chain every pair has a meet; box must preserve them all, which for
  // top-fixing tables means exactly the monotone ones.
  FiniteAlgebra good = chain.with_top().with_box({0, 0, 2});
  CHECK(check_modal(good).ok);
  CHECK(check_identity_M(good).ok);
  CHECK(box_is_monotone(good));
}

TEST_CASE("missing pieces are reported as usage errors") {
  FiniteAlgebra chain = from_hasse({"0", "1"}, {{0, 1}});
  // No box table at all.
  CHECK_THROWS_AS(check_modal(chain.with_top()), std::invalid_argument);
}
