#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nearlat/algebra.hpp"

namespace nearlat {

// Partition of the universe as a block-id array in restricted-growth form:
// block ids appear in order of first occurrence, so equal partitions have
// equal arrays.
using Partition = std::vector<int>;

Partition canonical_partition(const Partition& p);
Partition identity_partition(int n);
Partition total_partition(int n);
std::vector<std::uint64_t> blocks_of(const Partition& p);
std::string partition_to_string(const FiniteAlgebra& a, const Partition& p);

// p finer than or equal to q (as relations, p within q).
bool refines(const Partition& p, const Partition& q);

// Least equivalence containing both (transitive closure of the union).
Partition join_partitions(const Partition& p, const Partition& q);

// Compatibility with m, checked one argument slot at a time; on distributive
// nearlattices the join/existing-meet criterion runs too and must agree.
// Partitions must cover 0..n-1 with block ids.
bool is_congruence(const FiniteAlgebra& a, const Partition& p);

// Every congruence, restricted-growth enumeration order. Guarded to n <= 12.
std::vector<Partition> all_congruences(const FiniteAlgebra& a);

// Generalized matrix: an algebra with an explicit closure system.
class GMatrix {
 public:
  GMatrix(FiniteAlgebra algebra, std::vector<std::uint64_t> closed_sets);
  const FiniteAlgebra& algebra() const { return algebra_; }
  const std::vector<std::uint64_t>& closed_sets() const { return closed_; }
  std::uint64_t closure_of(std::uint64_t x) const;

 private:
  FiniteAlgebra algebra_;
  std::vector<std::uint64_t> closed_;
};

// Elements are related when their singleton closures coincide. An
// equivalence, not necessarily a congruence.
Partition frege_relation(const GMatrix& g);

// Largest congruence within the Frege relation.
Partition tarski_congruence(const GMatrix& g);

// Largest congruence no block of which meets both f and its complement.
Partition leibniz_congruence(const FiniteAlgebra& a, std::uint64_t f);

// Block algebra named by block representatives; constants and box carry
// over. Verifies the natural map preserves the operations.
FiniteAlgebra quotient(const FiniteAlgebra& a, const Partition& theta);

struct PointRegularityResult {
  bool ok;
  std::string detail;  // on failure: member label and the two congruences
};

// Do distinct congruences of each member always have distinct blocks at the
// declared top? Every member needs a "top" constant.
PointRegularityResult is_point_regular(const AlgebraClass& cls);

}  // namespace nearlat
