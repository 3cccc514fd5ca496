#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nearlat {

// Language signature: the ternary operation m is always present, plus an
// optional set of named constants and an optional unary box.
struct Signature {
  std::vector<std::string> constants;
  bool has_box = false;

  bool has_constant(const std::string& name) const;
  void add_constant(const std::string& name);
  static Signature merged(const Signature& a, const Signature& b);
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable formula tree. Variables are x0, x1, ...; joins are sugar for
// m(a,a,b) and are represented as plain m nodes.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, M, Box };

  static TermPtr var(int index);
  static TermPtr constant(std::string name);
  static TermPtr m(TermPtr a, TermPtr b, TermPtr c);
  static TermPtr box(TermPtr a);
  static TermPtr join(TermPtr a, TermPtr b);  // m(a,a,b)

  Kind kind() const { return kind_; }
  int var_index() const { return var_index_; }
  const std::string& const_name() const { return const_name_; }
  const TermPtr& child(int i) const { return kids_[static_cast<size_t>(i)]; }
  std::size_t hash() const { return hash_; }

  // True for m(p,p,q); then p, q are the two disjuncts.
  bool is_join() const;

 private:
  Term() = default;
  Kind kind_ = Kind::Var;
  int var_index_ = -1;
  std::string const_name_;
  std::array<TermPtr, 3> kids_;
  std::size_t hash_ = 0;
};

bool equal(const TermPtr& a, const TermPtr& b);
// Total structural order; used wherever a deterministic ordering is needed.
int compare(const TermPtr& a, const TermPtr& b);
std::string to_string(const TermPtr& t);
int term_depth(const TermPtr& t);

// Simultaneous substitution of terms for variables.
TermPtr substitute(const TermPtr& t, const std::map<int, TermPtr>& subst);

// Variable indices in first-occurrence order.
std::vector<int> variables_of(const TermPtr& t);

// Iterated operation: with args = [a0..an], builds
//   m^n(a0,...,an,b) = m(m^{n-1}(a0,...,a_{n-1},b), an, b),
//   m^0(a0,b)        = m(a0,a0,b).
// args must be nonempty.
TermPtr build_mn(const std::vector<TermPtr>& args, const TermPtr& last);

struct FormulaError : std::runtime_error {
  explicit FormulaError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
  std::size_t position;
};

// Grammar:  term := atom ('|' atom)*          (left-associative join sugar)
//           atom := var | const | 'm' '(' term ',' term ',' term ')'
//                 | 'box' '(' term ')' | '(' term ')'
// Variables are 'x' followed by digits. Constant names come from sig.
TermPtr parse_formula(const std::string& text, const Signature& sig);

}  // namespace nearlat
