#pragma once

#include <string>
#include <vector>

#include "nearlat/algebra.hpp"
#include "nearlat/exec.hpp"

namespace nearlat {

// Relabeling old index -> new index giving the least operation table (then
// box table, then constant bindings) over all permutations that respect the
// order invariants. Two algebras are isomorphic (constants and box
// included) exactly when their canonical forms coincide.
std::vector<int> canonical_relabeling(const FiniteAlgebra& a);
FiniteAlgebra canonical_form(const FiniteAlgebra& a);

// Printable fingerprint of the canonical form; equal keys = isomorphic.
std::string canonical_key(const FiniteAlgebra& a);

// All distributive nearlattices of the given size up to isomorphism, in
// canonical form, sorted by table. Generation goes through naturally
// labeled partial orders; every output passes both validity checks.
// Guarded to size <= 7.
std::vector<FiniteAlgebra> enumerate_dn(int size, Exec exec = Exec::Parallel);

// Sizes 1..max_size concatenated.
std::vector<FiniteAlgebra> enumerate_dn_upto(int max_size,
                                             Exec exec = Exec::Parallel);

// Independent oracle: depth-first search over raw operation tables (with
// the absorption cells pre-forced and identity instances pruning partial
// tables), keeping the distributive nearlattices up to isomorphism. Must
// match enumerate_dn. Guarded to size <= 4.
std::vector<FiniteAlgebra> enumerate_dn_by_tables(int size,
                                                  Exec exec = Exec::Parallel);

// All box expansions of each base member passing the modal conditions, up
// to isomorphism of the expanded algebra. Members need a declared top.
std::vector<FiniteAlgebra> enumerate_modal(const std::vector<FiniteAlgebra>& base);

// Every quotient of every member lands (up to isomorphism) back in the
// class. Congruence enumeration must be feasible for each member.
bool class_closed_under_quotients(const AlgebraClass& cls);

}  // namespace nearlat
