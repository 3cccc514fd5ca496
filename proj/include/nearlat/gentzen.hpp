#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nearlat/algebra.hpp"
#include "nearlat/term.hpp"

namespace nearlat {

// Left side is kept sorted and deduplicated; equality is order-insensitive.
struct Sequent {
  std::vector<TermPtr> premises;
  TermPtr conclusion;

  static Sequent make(std::vector<TermPtr> premises, TermPtr conclusion);
};

bool operator==(const Sequent& a, const Sequent& b);
std::string to_string(const Sequent& s);  // "p1, p2 |- q"

struct SequentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p1, p2 |- q"; an empty left side is written "|- q".
Sequent parse_sequent(const std::string& text, const Signature& sig = {});

// Rules of the sequent calculus. Branching: Axiom, MLeft1, MLeft2 have no
// premises; Weakening, OrRightL, OrRightR, MnLeft one; Cut, OrLeft, MRight
// two.
//   Axiom     phi |- phi
//   Weakening Gamma |- phi            =>  Gamma, psi |- phi
//   Cut       Gamma |- phi  and  Gamma, phi |- psi  =>  Gamma |- psi
//   OrLeft    phi |- chi  and  psi |- chi  =>  phi|psi |- chi
//   OrRightL  Gamma |- phi            =>  Gamma |- phi|psi
//   OrRightR  Gamma |- psi            =>  Gamma |- phi|psi
//   MLeft1    m(phi,psi,chi) |- phi|chi
//   MLeft2    m(phi,psi,chi) |- psi|chi
//   MRight    Gamma |- phi|chi  and  Gamma |- psi|chi
//                                     =>  Gamma |- m(phi,psi,chi)
//   MnLeft    phi0,...,phin |- phi    =>  m^n(phi0,...,phin,phi) |- phi
enum class Rule {
  Axiom,
  Weakening,
  Cut,
  OrLeft,
  OrRightL,
  OrRightR,
  MLeft1,
  MLeft2,
  MRight,
  MnLeft
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);
int rule_arity(Rule r);

struct ProofNode {
  Rule rule = Rule::Axiom;
  Sequent sequent;
  std::vector<ProofNode> children;
  // Schema variable bindings in fixed order: phi/psi/chi, or phi0..phin
  // followed by phi for MnLeft.
  std::vector<std::pair<std::string, TermPtr>> subst;
};

struct ProofCheck {
  bool valid = false;
  std::string node;    // "root", "root.1.0", ... for the offending node
  std::string reason;  // empty when valid
};

// Structural validation only; a valid proof certifies its root sequent.
ProofCheck check_proof(const ProofNode& p);

struct ProveOutcome {
  std::optional<ProofNode> proof;
  // Set when no proof was found: the bounds used and the Cut restriction.
  std::string note;
};

// Bounded backward search. Any returned proof passes check_proof; not-found
// is not a refutation. Cut formulas are drawn from the subformula closure
// of the goal, joins of two such subformulas, and the iterated-m compound
// of the premises into the conclusion; the left branch of a Cut is only
// searched a few steps deep, which keeps the candidate loop cheap.
ProveOutcome prove(const Sequent& s, int depth, int mn_bound = 3);

// Reusable search session. Subproofs and plausibility verdicts found for one
// query prune the next, so batches of sequents over a shared formula pool run
// far faster than repeated prove() calls. The iterated-m bound is fixed at
// construction. A session never misses a proof the one-shot function finds;
// shared subproofs can settle sequents the one-shot search gives up on, and
// every returned tree passes check_proof.
class Prover {
 public:
  explicit Prover(int mn_bound = 3);
  ~Prover();
  Prover(Prover&&) noexcept;
  Prover& operator=(Prover&&) noexcept;

  ProveOutcome prove(const Sequent& s, int depth);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Certificate text: one node per line, children before parents,
// "ID. <sequent> ; <rule> ; from <child IDs|-> ; subst <var=term,...>".
// Writing a parsed certificate reproduces the text byte for byte.
std::string write_certificate(const ProofNode& p);

struct CertificateError : std::runtime_error {
  CertificateError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_number(line) {}
  std::size_t line_number;
};

ProofNode parse_certificate(const std::string& text, const Signature& sig = {});

struct SoundnessReport {
  bool consistent = false;
  std::string detail;  // witness description on contradiction
};

// The sequent (or every sequent in the proof) must hold in plain-mode
// consequence over the class. A contradiction on a class of distributive
// nearlattices indicates an implementation bug.
SoundnessReport soundness_audit(const Sequent& s, const AlgebraClass& cls);
SoundnessReport soundness_audit(const ProofNode& p, const AlgebraClass& cls);

}  // namespace nearlat
