#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nearlat/algebra.hpp"

namespace nearlat {

// Subsets of an algebra's universe travel as bitmasks (bit i = element i).
// The routines below assume a validated distributive nearlattice; most run
// two independent characterizations and throw std::logic_error if the
// characterizations ever disagree.

std::uint64_t up_closure(const FiniteAlgebra& a, std::uint64_t s);

// Nonempty, upward closed, closed under existing binary meets. Also checks
// the closure criterion (a,b in F implies m(a,b,c) in F for every c) and
// insists the two answers match.
bool is_filter(const FiniteAlgebra& a, std::uint64_t s);

// Least filter containing x (x nonempty). Computed as the meets of subsets
// of the up-closure; cross-checked against an up/meet closure fixpoint and,
// on small algebras, against the intersection of all filters containing x.
std::uint64_t generated_filter(const FiniteAlgebra& a, std::uint64_t x);

// All filters, ascending bitmask order. Guarded to size <= 20.
std::vector<std::uint64_t> all_filters(const FiniteAlgebra& a);

// x -> upper bounds of the lower bounds of x. lu_closure(a, 0) is the
// greatest-element singleton whenever the algebra has one.
std::uint64_t lu_closure(const FiniteAlgebra& a, std::uint64_t x);

// Frink condition: every finite subset X of s satisfies lu(X) within s.
// Checks all X of size <= 3 (plus the empty set) and separately the whole
// carrier at once; disagreement throws.
bool is_frink_filter(const FiniteAlgebra& a, std::uint64_t s);

// Ascending bitmask order; verifies the result is intersection-closed and
// contains the universe. Guarded to size <= 20.
std::vector<std::uint64_t> all_frink_filters(const FiniteAlgebra& a);

// Distributivity of the inclusion lattice of all Frink filters, by
// exhaustive triple check.
bool frink_lattice_is_distributive(const FiniteAlgebra& a);

// "{a,y,1}" with element names in index order; "{}" for the empty set.
std::string subset_to_string(const FiniteAlgebra& a, std::uint64_t s);

}  // namespace nearlat
