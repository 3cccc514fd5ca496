#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nearlat/algebra.hpp"
#include "nearlat/exec.hpp"
#include "nearlat/term.hpp"

namespace nearlat {

// Three readings of "the premises entail the conclusion" over a class:
//   Plain:   m^n(h(premises), h(conclusion)) comes out below h(conclusion)
//            (equivalently equal to it); with no premises, h(conclusion)
//            must be the greatest element.
//   Degrees: every element below all premise values is below the conclusion
//            value.
//   Truth:   premise values all equal the declared top forces the
//            conclusion value to equal it.
enum class Mode { Plain, Degrees, Truth };

std::string to_string(Mode m);
std::optional<Mode> mode_from_string(const std::string& s);

struct ConsequenceQuery {
  std::vector<TermPtr> premises;
  TermPtr conclusion;
  Mode mode = Mode::Plain;
};

struct ConsequenceWitness {
  std::size_t member;  // class position
  std::string label;
  // (variable index, element index), variables in first-occurrence order
  std::vector<std::pair<int, int>> valuation;
  // degrees mode: least element below all premises but not the conclusion
  std::optional<int> separating;
};

struct ConsequenceResult {
  bool holds;
  std::optional<ConsequenceWitness> witness;
};

// Counterexamples are lexicographically first: by class position, then by
// valuation in mixed-radix order with the first variable most significant.
// Both Exec paths report the identical witness.
ConsequenceResult consequence(const ConsequenceQuery& q, const AlgebraClass& cls,
                              Exec exec = Exec::Parallel);

struct EquivalenceWitness {
  std::size_t member;
  std::string label;
  std::vector<std::pair<int, int>> valuation;
  int lhs, rhs;
};

struct EquivalenceResult {
  bool equal;
  std::optional<EquivalenceWitness> witness;
};

// s and t take the same value under every valuation in every member; each
// valuation is cross-checked against the two order inequalities.
EquivalenceResult equivalent_in_class(const TermPtr& s, const TermPtr& t,
                                      const AlgebraClass& cls,
                                      Exec exec = Exec::Parallel);

// All formulas over variables x0..x{var_bound-1} with nesting depth at most
// depth_bound, deterministic order (shallower first, then term order).
// Throws when the count would exceed the guard.
std::vector<TermPtr> generate_formulas(int var_bound, int depth_bound,
                                       const Signature& sig = {});

struct DnTermAudit {
  long long instances = 0;
  std::vector<std::string> schema_violations;
  std::vector<std::string> equational_failures;
  bool ok() const { return schema_violations.empty() && equational_failures.empty(); }
};

// Instantiates the disjunction/m-term consequence schemas over all formulas
// within the bounds and evaluates each in plain mode over the class; also
// runs the identity checks on every member. A class of distributive
// nearlattices must come back clean.
DnTermAudit audit_dn_term(const AlgebraClass& cls, int depth_bound = 1,
                          int var_bound = 3, int mn_bound = 1);

// Sets closed under the class consequence: the filters plus the empty set,
// ascending mask order. Each returned set is audited for closure under the
// schema instances that hold over the class.
std::vector<std::uint64_t> sfilters(const FiniteAlgebra& a, const AlgebraClass& cls);

struct HypothesisAudit {
  bool ok;
  std::string detail;
};

// For every nonempty generating set X of at most max_generators elements:
// the generated filter must equal the block of top in the largest congruence
// keeping that filter a union of blocks. Needs a declared top.
HypothesisAudit truth_filter_hypothesis(const FiniteAlgebra& a,
                                        int max_generators = 2);

}  // namespace nearlat
