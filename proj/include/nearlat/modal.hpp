#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nearlat/algebra.hpp"

namespace nearlat {

struct ModalWitness {
  std::string condition;
  std::vector<int> tuple;
  int lhs;
  int rhs;  // -1 when a required meet does not exist
};

struct ModalCheckResult {
  bool ok;
  std::optional<ModalWitness> witness;
};

// Box fixes the top, and distributes over every existing binary meet (the
// image meet must exist too). Needs a declared top and a box table.
ModalCheckResult check_modal(const FiniteAlgebra& a);

// The single identity equivalent to the conditions above when box fixes the
// top: box m(x,y,z) = m(box(x|z), box(y|z), box z), checked over all
// triples. Throws unless box fixes the top.
ModalCheckResult check_identity_M(const FiniteAlgebra& a);

bool box_is_monotone(const FiniteAlgebra& a);

}  // namespace nearlat
