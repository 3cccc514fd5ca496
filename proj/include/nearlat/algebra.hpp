#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nearlat/exec.hpp"
#include "nearlat/term.hpp"

namespace nearlat {

// Finite algebra with a dense ternary operation table, optional named
// constants, and an optional unary box table. Elements are indices
// 0..size-1; the table is in row-major order, m[(i*n + j)*n + k].
//
// The type itself only checks shape. Whether the table satisfies the
// nearlattice laws is the business of check_nearlattice / check_distributive;
// AlgebraClass validates its members once on construction.
class FiniteAlgebra {
 public:
  FiniteAlgebra(int n, std::vector<std::uint8_t> table,
                std::vector<std::string> names = {},
                std::map<std::string, int> constants = {},
                std::optional<std::vector<std::uint8_t>> box = {});

  int size() const { return n_; }
  int m(int i, int j, int k) const {
    return table_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::vector<std::uint8_t>& table() const { return table_; }

  const std::string& name_of(int i) const { return names_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index_of(const std::string& name) const;

  const std::map<std::string, int>& constants() const { return constants_; }
  bool has_box() const { return box_.has_value(); }
  int box(int i) const { return (*box_)[static_cast<std::size_t>(i)]; }
  const std::vector<std::uint8_t>& box_table() const { return *box_; }

  // Order derived from the operation: i <= j iff m(i,i,j) == j.
  bool leq(int i, int j) const { return (up_[static_cast<std::size_t>(i)] >> j) & 1; }
  std::uint64_t upset(int i) const { return up_[static_cast<std::size_t>(i)]; }
  std::uint64_t downset(int i) const { return down_[static_cast<std::size_t>(i)]; }
  std::uint64_t universe_mask() const {
    return n_ == 64 ? ~0ull : (1ull << n_) - 1;
  }
  int join(int i, int j) const { return m(i, i, j); }
  // Greatest lower bound, or -1 when {i,j} has no lower bound. Meaningful
  // only on tables whose derived relation is a partial order.
  int meet(int i, int j) const { return meet_[static_cast<std::size_t>(i) * n_ + j]; }
  std::optional<int> greatest() const;

  Signature signature() const;
  FiniteAlgebra with_top() const;       // declare "top" at the greatest element
  FiniteAlgebra without_constants() const;
  FiniteAlgebra with_box(std::vector<std::uint8_t> box) const;
  FiniteAlgebra renamed(std::vector<std::string> names) const;

 private:
  int n_;
  std::vector<std::uint8_t> table_;
  std::vector<std::string> names_;
  std::map<std::string, int> constants_;
  std::optional<std::vector<std::uint8_t>> box_;
  std::vector<std::uint64_t> up_, down_;
  std::vector<int> meet_;
};

// A failed identity instance: the law name, the variable tuple that breaks
// it (lexicographically first), and the two sides' values.
struct IdentityWitness {
  std::string law;
  std::vector<int> tuple;
  int lhs = -1, rhs = -1;
};

struct CheckResult {
  bool ok = false;
  std::optional<IdentityWitness> witness;
};

// Laws scanned: "absorption"   m(x,y,x) = x
//               "interchange"  m(m(x,y,z), m(y,m(u,x,z),z), w)
//                                = m(w, w, m(y,m(x,u,z),z))
CheckResult check_nearlattice(const FiniteAlgebra& a, Exec exec = Exec::Parallel);

// Laws scanned: "mid-join distribution"  m(x, m(y,y,z), w)
//                                          = m(m(x,y,w), m(x,y,w), m(x,z,w))
//               "join distribution"      m(x, x, m(y,z,w))
//                                          = m(m(x,x,y), m(x,x,z), w)
// The two scans must agree with each other and with the upset-distributivity
// criterion; a disagreement raises std::logic_error. Requires a nearlattice.
CheckResult check_distributive(const FiniteAlgebra& a, Exec exec = Exec::Parallel);

// Independent route: derived relation is a partial order, every pair has a
// least upper bound equal to m(i,i,j), every principal upset is a lattice,
// and m(x,y,a) is the upset meet of the joins. Used to cross-validate
// check_nearlattice on arbitrary tables.
bool order_route_is_nearlattice(const FiniteAlgebra& a, std::string* reason = nullptr);

// Every principal upset is a distributive lattice. Meaningful on
// nearlattices only.
bool upsets_distributive(const FiniteAlgebra& a);

// Builds the algebra from a cover relation, synthesizing
// m(x,y,a) = (x v a) ^_a (y v a). Throws std::runtime_error on a cycle, a
// pair without a join, or an upset where some pair lacks a meet.
FiniteAlgebra from_hasse(const std::vector<std::string>& names,
                         const std::vector<std::pair<int, int>>& covers,
                         std::map<std::string, int> constants = {},
                         std::optional<std::vector<std::uint8_t>> box = {});

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluates t under the assignment asg (variable index -> element; entries
// of -1 count as unassigned). Throws EvalError on an unassigned variable, a
// constant the algebra does not declare, or box on a box-less algebra.
int eval_term(const FiniteAlgebra& a, const TermPtr& t, const std::vector<int>& asg);

// Value of m^n(args..., b). Computes the recursion and separately the
// meet-of-joins form (a0 v b) ^_b ... ^_b (an v b); raises std::logic_error
// if they differ (they cannot on a nearlattice).
int mn_eval(const FiniteAlgebra& a, const std::vector<int>& args, int b);

// All maps A -> B preserving m, constants, and box. Exhaustive; throws
// std::invalid_argument when |B|^|A| exceeds the guard or when B lacks a
// constant/box that A declares.
std::vector<std::vector<int>> find_homomorphisms(const FiniteAlgebra& a,
                                                 const FiniteAlgebra& b);

// How much a class constructor verifies about each member.
enum class ClassLaws { Distributive, Nearlattice, Unchecked };

// Validated collection of distributive nearlattices quantified over by the
// consequence relations. Relaxed law levels exist so audits can accept
// deliberately broken classes and report on them.
class AlgebraClass {
 public:
  explicit AlgebraClass(std::vector<FiniteAlgebra> members,
                        std::vector<std::string> labels = {},
                        ClassLaws laws = ClassLaws::Distributive);

  std::size_t count() const { return members_.size(); }
  const FiniteAlgebra& member(std::size_t i) const { return members_[i]; }
  const std::vector<FiniteAlgebra>& members() const { return members_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  Signature signature() const;

 private:
  std::vector<FiniteAlgebra> members_;
  std::vector<std::string> labels_;
};

}  // namespace nearlat
