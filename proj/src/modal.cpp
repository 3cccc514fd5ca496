#include "nearlat/modal.hpp"

#include <stdexcept>

namespace nearlat {

namespace {

int declared_top(const FiniteAlgebra& a) {
  if (!a.has_box())
    throw std::invalid_argument("modal check: algebra has no box operation");
  auto it = a.constants().find("top");
  if (it == a.constants().end())
    throw std::invalid_argument("modal check: missing declared top");
  return it->second;
}

}  // namespace

ModalCheckResult check_modal(const FiniteAlgebra& a) {
  int top = declared_top(a);
  if (a.box(top) != top)
    return {false, ModalWitness{"box fixes top", {top}, a.box(top), top}};
  const int n = a.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int g = a.meet(x, y);
      if (g < 0) continue;
      int h = a.meet(a.box(x), a.box(y));
      if (h < 0 || a.box(g) != h)
        return {false, ModalWitness{"meet preservation", {x, y}, a.box(g), h}};
    }
  return {true, std::nullopt};
}

ModalCheckResult check_identity_M(const FiniteAlgebra& a) {
  int top = declared_top(a);
  if (a.box(top) != top)
    throw std::invalid_argument("identity check requires box to fix the top");
  const int n = a.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int lhs = a.box(a.m(x, y, z));
        int rhs = a.m(a.box(a.join(x, z)), a.box(a.join(y, z)), a.box(z));
        if (lhs != rhs)
          return {false, ModalWitness{"box-m identity", {x, y, z}, lhs, rhs}};
      }
  return {true, std::nullopt};
}

bool box_is_monotone(const FiniteAlgebra& a) {
  if (!a.has_box())
    throw std::invalid_argument("monotonicity check: no box operation");
  const int n = a.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (a.leq(x, y) && !a.leq(a.box(x), a.box(y))) return false;
  return true;
}

}  // namespace nearlat
