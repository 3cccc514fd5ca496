#include "nearlat/gentzen.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>

#include "nearlat/consequence.hpp"
#include "nearlat/enumerate.hpp"

namespace nearlat {

namespace {

std::vector<TermPtr> sorted_unique(std::vector<TermPtr> v) {
  std::sort(v.begin(), v.end(),
            [](const TermPtr& a, const TermPtr& b) { return compare(a, b) < 0; });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const TermPtr& a, const TermPtr& b) { return equal(a, b); }),
          v.end());
  return v;
}

bool contains_term(const std::vector<TermPtr>& v, const TermPtr& t) {
  for (const TermPtr& x : v)
    if (equal(x, t)) return true;
  return false;
}

std::vector<TermPtr> with_term(const std::vector<TermPtr>& v, const TermPtr& t) {
  std::vector<TermPtr> out = v;
  out.push_back(t);
  return sorted_unique(std::move(out));
}

std::vector<TermPtr> without_index(const std::vector<TermPtr>& v, std::size_t i) {
  std::vector<TermPtr> out;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != i) out.push_back(v[j]);
  return out;
}

bool premises_equal(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

Sequent Sequent::make(std::vector<TermPtr> premises, TermPtr conclusion) {
  Sequent s;
  s.premises = sorted_unique(std::move(premises));
  s.conclusion = std::move(conclusion);
  return s;
}

bool operator==(const Sequent& a, const Sequent& b) {
  return premises_equal(a.premises, b.premises) &&
         equal(a.conclusion, b.conclusion);
}

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.premises.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.premises[i]);
  }
  if (!s.premises.empty()) out += ' ';
  out += "|- ";
  out += to_string(s.conclusion);
  return out;
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

TermPtr parse_or_throw(const std::string& text, const Signature& sig) {
  try {
    return parse_formula(text, sig);
  } catch (const FormulaError& e) {
    throw SequentError("bad formula \"" + text + "\": " + e.what());
  }
}

}  // namespace

Sequent parse_sequent(const std::string& text, const Signature& sig) {
  std::string body = trimmed(text);
  std::vector<TermPtr> premises;
  std::string right;
  if (body.rfind("|- ", 0) == 0) {
    right = body.substr(3);
  } else {
    std::size_t at = body.find(" |- ");
    if (at == std::string::npos)
      throw SequentError("expected \"|-\" in sequent: " + text);
    std::string left = body.substr(0, at);
    right = body.substr(at + 4);
    std::size_t start = 0;
    while (start <= left.size()) {
      std::size_t comma = left.find(", ", start);
      std::string chunk = comma == std::string::npos
                              ? left.substr(start)
                              : left.substr(start, comma - start);
      premises.push_back(parse_or_throw(trimmed(chunk), sig));
      if (comma == std::string::npos) break;
      start = comma + 2;
    }
  }
  return Sequent::make(std::move(premises), parse_or_throw(trimmed(right), sig));
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Axiom: return "Axiom";
    case Rule::Weakening: return "Weakening";
    case Rule::Cut: return "Cut";
    case Rule::OrLeft: return "OrLeft";
    case Rule::OrRightL: return "OrRightL";
    case Rule::OrRightR: return "OrRightR";
    case Rule::MLeft1: return "MLeft1";
    case Rule::MLeft2: return "MLeft2";
    case Rule::MRight: return "MRight";
    case Rule::MnLeft: return "MnLeft";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  static const std::map<std::string, Rule> table = {
      {"Axiom", Rule::Axiom},       {"Weakening", Rule::Weakening},
      {"Cut", Rule::Cut},           {"OrLeft", Rule::OrLeft},
      {"OrRightL", Rule::OrRightL}, {"OrRightR", Rule::OrRightR},
      {"MLeft1", Rule::MLeft1},     {"MLeft2", Rule::MLeft2},
      {"MRight", Rule::MRight},     {"MnLeft", Rule::MnLeft}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

int rule_arity(Rule r) {
  switch (r) {
    case Rule::Axiom:
    case Rule::MLeft1:
    case Rule::MLeft2: return 0;
    case Rule::Weakening:
    case Rule::OrRightL:
    case Rule::OrRightR:
    case Rule::MnLeft: return 1;
    case Rule::Cut:
    case Rule::OrLeft:
    case Rule::MRight: return 2;
  }
  return 0;
}

namespace {

const TermPtr* binding(const ProofNode& n, const std::string& name) {
  for (const auto& [var, term] : n.subst)
    if (var == name) return &term;
  return nullptr;
}

ProofCheck invalid(const std::string& path, const std::string& reason) {
  return {false, path, reason};
}

ProofCheck check_node(const ProofNode& n, const std::string& path) {
  if (static_cast<int>(n.children.size()) != rule_arity(n.rule))
    return invalid(path, "child count mismatch");
  const Sequent& s = n.sequent;

  auto need = [&](const char* name) -> const TermPtr* {
    return binding(n, name);
  };

  switch (n.rule) {
    case Rule::Axiom: {
      const TermPtr* phi = need("phi");
      if (!phi) return invalid(path, "missing schema binding phi");
      if (!equal(s.conclusion, *phi) || s.premises.size() != 1 ||
          !equal(s.premises[0], *phi))
        return invalid(path, "sequent is not an axiom instance");
      break;
    }
    case Rule::Weakening: {
      const TermPtr* psi = need("psi");
      if (!psi) return invalid(path, "missing schema binding psi");
      const Sequent& c = n.children[0].sequent;
      if (!equal(c.conclusion, s.conclusion))
        return invalid(path, "conclusion changed across weakening");
      if (!premises_equal(s.premises, with_term(c.premises, *psi)))
        return invalid(path, "premises are not the child's plus the added formula");
      break;
    }
    case Rule::Cut: {
      const TermPtr* phi = need("phi");
      if (!phi) return invalid(path, "missing schema binding phi");
      const TermPtr* psi = need("psi");
      if (psi && !equal(*psi, s.conclusion))
        return invalid(path, "psi binding disagrees with the conclusion");
      const Sequent& c0 = n.children[0].sequent;
      const Sequent& c1 = n.children[1].sequent;
      if (!premises_equal(c0.premises, s.premises))
        return invalid(path, "left child context mismatch");
      if (!equal(c0.conclusion, *phi))
        return invalid(path, "cut formula mismatch");
      if (!premises_equal(c1.premises, with_term(s.premises, *phi)))
        return invalid(path, "cut formula mismatch");
      if (!equal(c1.conclusion, s.conclusion))
        return invalid(path, "right child conclusion mismatch");
      break;
    }
    case Rule::OrLeft: {
      const TermPtr *phi = need("phi"), *psi = need("psi"), *chi = need("chi");
      if (!phi || !psi || !chi) return invalid(path, "missing schema binding");
      if (!equal(s.conclusion, *chi))
        return invalid(path, "conclusion is not chi");
      if (s.premises.size() != 1 ||
          !equal(s.premises[0], Term::join(*phi, *psi)))
        return invalid(path, "premise is not the disjunction");
      if (!(n.children[0].sequent == Sequent::make({*phi}, *chi)))
        return invalid(path, "left child sequent mismatch");
      if (!(n.children[1].sequent == Sequent::make({*psi}, *chi)))
        return invalid(path, "right child sequent mismatch");
      break;
    }
    case Rule::OrRightL:
    case Rule::OrRightR: {
      const TermPtr *phi = need("phi"), *psi = need("psi");
      if (!phi || !psi) return invalid(path, "missing schema binding");
      if (!equal(s.conclusion, Term::join(*phi, *psi)))
        return invalid(path, "conclusion is not the disjunction");
      const Sequent& c = n.children[0].sequent;
      if (!premises_equal(c.premises, s.premises))
        return invalid(path, "child context mismatch");
      const TermPtr& expect = n.rule == Rule::OrRightL ? *phi : *psi;
      if (!equal(c.conclusion, expect))
        return invalid(path, "child conclusion is not the chosen disjunct");
      break;
    }
    case Rule::MLeft1:
    case Rule::MLeft2: {
      const TermPtr *phi = need("phi"), *psi = need("psi"), *chi = need("chi");
      if (!phi || !psi || !chi) return invalid(path, "missing schema binding");
      if (s.premises.size() != 1 ||
          !equal(s.premises[0], Term::m(*phi, *psi, *chi)))
        return invalid(path, "premise is not the m-compound");
      const TermPtr& first = n.rule == Rule::MLeft1 ? *phi : *psi;
      if (!equal(s.conclusion, Term::join(first, *chi)))
        return invalid(path, "conclusion is not the projected disjunction");
      break;
    }
    case Rule::MRight: {
      const TermPtr *phi = need("phi"), *psi = need("psi"), *chi = need("chi");
      if (!phi || !psi || !chi) return invalid(path, "missing schema binding");
      if (!equal(s.conclusion, Term::m(*phi, *psi, *chi)))
        return invalid(path, "conclusion is not the m-compound");
      const Sequent& c0 = n.children[0].sequent;
      const Sequent& c1 = n.children[1].sequent;
      if (!premises_equal(c0.premises, s.premises) ||
          !premises_equal(c1.premises, s.premises))
        return invalid(path, "child context mismatch");
      if (!equal(c0.conclusion, Term::join(*phi, *chi)))
        return invalid(path, "left child conclusion mismatch");
      if (!equal(c1.conclusion, Term::join(*psi, *chi)))
        return invalid(path, "right child conclusion mismatch");
      break;
    }
    case Rule::MnLeft: {
      std::vector<TermPtr> args;
      for (std::size_t i = 0;; ++i) {
        const TermPtr* a = binding(n, "phi" + std::to_string(i));
        if (!a) break;
        args.push_back(*a);
      }
      const TermPtr* phi = need("phi");
      if (args.empty() || !phi)
        return invalid(path, "missing schema binding");
      if (!equal(s.conclusion, *phi))
        return invalid(path, "conclusion is not phi");
      if (s.premises.size() != 1 ||
          !equal(s.premises[0], build_mn(args, *phi)))
        return invalid(path, "premise is not the iterated compound");
      if (!(n.children[0].sequent == Sequent::make(args, *phi)))
        return invalid(path, "child sequent mismatch");
      break;
    }
  }

  for (std::size_t i = 0; i < n.children.size(); ++i) {
    ProofCheck c = check_node(n.children[i], path + "." + std::to_string(i));
    if (!c.valid) return c;
  }
  return {true, "", ""};
}

}  // namespace

ProofCheck check_proof(const ProofNode& p) { return check_node(p, "root"); }

namespace {

bool uses_extras(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var: return false;
    case Term::Kind::Const: return true;
    case Term::Kind::Box: return true;
    case Term::Kind::M:
      return uses_extras(t->child(0)) || uses_extras(t->child(1)) ||
             uses_extras(t->child(2));
  }
  return false;
}

// Small catalog used to discard semantically false subgoals; the calculus
// is sound over it, so pruning those can never lose a proof.
const AlgebraClass& prune_class() {
  static const AlgebraClass cls(enumerate_dn_upto(3, Exec::Serial));
  return cls;
}

int proof_height(const ProofNode& n) {
  int h = 0;
  for (const ProofNode& c : n.children) h = std::max(h, proof_height(c));
  return h + 1;
}

void collect_subterms(const TermPtr& t, std::vector<TermPtr>* out) {
  out->push_back(t);
  if (t->kind() == Term::Kind::M) {
    collect_subterms(t->child(0), out);
    collect_subterms(t->child(1), out);
    collect_subterms(t->child(2), out);
  } else if (t->kind() == Term::Kind::Box) {
    collect_subterms(t->child(0), out);
  }
}

struct Searcher {
  // Cut formulas rarely need long derivations of their own; capping the left
  // branch keeps the candidate loop from exploding while still reaching every
  // cut the MLeft/OrRight rules can justify in a few steps.
  static constexpr int kCutLeftBudget = 3;

  int mn_bound;
  std::unordered_map<std::string, std::pair<ProofNode, int>> proved;
  std::unordered_map<std::string, int> failed;
  std::unordered_map<std::string, bool> plausible;
  std::unordered_map<std::string, std::vector<TermPtr>> cuts_cache;
  // Cut formulas for the whole derivation are drawn from the root sequent's
  // subformula closure and joins of two such subformulas. Fixing the universe
  // up front keeps the candidate pool from feeding on its own output.
  std::vector<TermPtr> base_candidates;

  explicit Searcher(int mn) : mn_bound(mn) {}

  // Failure and candidate caches depend on the root's formula universe, so
  // they reset per query; proofs and plausibility verdicts carry over.
  void set_root(const Sequent& s) {
    std::vector<TermPtr> sub;
    for (const TermPtr& p : s.premises) collect_subterms(p, &sub);
    collect_subterms(s.conclusion, &sub);
    sub = sorted_unique(std::move(sub));
    std::vector<TermPtr> cand = sub;
    for (const TermPtr& a : sub)
      for (const TermPtr& b : sub) cand.push_back(Term::join(a, b));
    base_candidates = sorted_unique(std::move(cand));
    failed.clear();
    cuts_cache.clear();
  }

  bool semantically_plausible(const Sequent& s, const std::string& key) {
    for (const TermPtr& p : s.premises)
      if (uses_extras(p)) return true;
    if (uses_extras(s.conclusion)) return true;
    auto it = plausible.find(key);
    if (it != plausible.end()) return it->second;
    ConsequenceQuery q{s.premises, s.conclusion, Mode::Plain};
    bool ok = consequence(q, prune_class(), Exec::Serial).holds;
    plausible.emplace(key, ok);
    return ok;
  }

  std::optional<ProofNode> remember(const std::string& key, ProofNode node) {
    proved.insert_or_assign(key, std::make_pair(node, proof_height(node)));
    return node;
  }

  // Enumerates readings of p as m^n(a0..an, phi), n <= mn_bound.
  void decompositions(const TermPtr& p, const TermPtr& phi,
                      std::vector<TermPtr>& peeled,
                      std::vector<std::vector<TermPtr>>* out) {
    if (p->kind() != Term::Kind::M) return;
    if (!equal(p->child(2), phi)) return;
    if (equal(p->child(0), p->child(1)) &&
        static_cast<int>(peeled.size()) <= mn_bound) {
      std::vector<TermPtr> args;
      args.push_back(p->child(0));
      args.insert(args.end(), peeled.rbegin(), peeled.rend());
      out->push_back(std::move(args));
    }
    if (static_cast<int>(peeled.size()) + 1 <= mn_bound) {
      peeled.push_back(p->child(1));
      decompositions(p->child(0), phi, peeled, out);
      peeled.pop_back();
    }
  }

  const std::vector<TermPtr>& cut_candidates(const Sequent& s,
                                             const std::string& key) {
    if (auto it = cuts_cache.find(key); it != cuts_cache.end())
      return it->second;
    std::vector<TermPtr> cand = base_candidates;
    if (!s.premises.empty())
      cand.push_back(build_mn(s.premises, s.conclusion));
    cand = sorted_unique(std::move(cand));
    std::vector<TermPtr> out;
    for (const TermPtr& c : cand)
      if (!contains_term(s.premises, c) && !equal(c, s.conclusion))
        out.push_back(c);
    return cuts_cache.emplace(key, std::move(out)).first->second;
  }

  std::optional<ProofNode> search(const Sequent& s, int budget) {
    if (budget <= 0) return std::nullopt;
    const std::string key = to_string(s);
    if (auto it = proved.find(key);
        it != proved.end() && it->second.second <= budget)
      return it->second.first;
    if (auto it = failed.find(key); it != failed.end() && it->second >= budget)
      return std::nullopt;
    if (!semantically_plausible(s, key)) {
      failed[key] = INT_MAX;
      return std::nullopt;
    }

    // Axiom, with weakenings for any surrounding context.
    if (contains_term(s.premises, s.conclusion) &&
        static_cast<int>(s.premises.size()) <= budget) {
      ProofNode node{Rule::Axiom, Sequent::make({s.conclusion}, s.conclusion),
                     {},
                     {{"phi", s.conclusion}}};
      for (const TermPtr& p : s.premises) {
        if (equal(p, s.conclusion)) continue;
        Sequent grown =
            Sequent::make(with_term(node.sequent.premises, p), s.conclusion);
        node = ProofNode{Rule::Weakening, std::move(grown),
                         {std::move(node)}, {{"psi", p}}};
      }
      return remember(key, std::move(node));
    }

    const TermPtr& goal = s.conclusion;
    if (s.premises.size() == 1 &&
        s.premises[0]->kind() == Term::Kind::M) {
      const TermPtr& p = s.premises[0];
      const TermPtr &a = p->child(0), &b = p->child(1), &c = p->child(2);
      if (equal(goal, Term::join(a, c)))
        return remember(key, ProofNode{Rule::MLeft1, s, {},
                                       {{"phi", a}, {"psi", b}, {"chi", c}}});
      if (equal(goal, Term::join(b, c)))
        return remember(key, ProofNode{Rule::MLeft2, s, {},
                                       {{"phi", a}, {"psi", b}, {"chi", c}}});
      if (p->is_join()) {
        const TermPtr &l = p->child(0), &r = p->child(2);
        auto c0 = search(Sequent::make({l}, goal), budget - 1);
        if (c0) {
          auto c1 = search(Sequent::make({r}, goal), budget - 1);
          if (c1)
            return remember(
                key, ProofNode{Rule::OrLeft, s, {std::move(*c0), std::move(*c1)},
                               {{"phi", l}, {"psi", r}, {"chi", goal}}});
        }
      }
    }

    if (goal->is_join()) {
      const TermPtr &f = goal->child(0), &g = goal->child(2);
      if (auto c0 = search(Sequent::make(s.premises, f), budget - 1))
        return remember(key, ProofNode{Rule::OrRightL, s, {std::move(*c0)},
                                       {{"phi", f}, {"psi", g}}});
      if (auto c0 = search(Sequent::make(s.premises, g), budget - 1))
        return remember(key, ProofNode{Rule::OrRightR, s, {std::move(*c0)},
                                       {{"phi", f}, {"psi", g}}});
    }

    if (goal->kind() == Term::Kind::M && !goal->is_join()) {
      const TermPtr &f = goal->child(0), &g = goal->child(1), &h = goal->child(2);
      auto c0 = search(Sequent::make(s.premises, Term::join(f, h)), budget - 1);
      if (c0) {
        auto c1 = search(Sequent::make(s.premises, Term::join(g, h)), budget - 1);
        if (c1)
          return remember(
              key, ProofNode{Rule::MRight, s, {std::move(*c0), std::move(*c1)},
                             {{"phi", f}, {"psi", g}, {"chi", h}}});
      }
    }

    if (s.premises.size() == 1) {
      std::vector<std::vector<TermPtr>> readings;
      std::vector<TermPtr> peeled;
      decompositions(s.premises[0], goal, peeled, &readings);
      for (const std::vector<TermPtr>& args : readings) {
        if (auto c0 = search(Sequent::make(args, goal), budget - 1)) {
          std::vector<std::pair<std::string, TermPtr>> subst;
          for (std::size_t i = 0; i < args.size(); ++i)
            subst.emplace_back("phi" + std::to_string(i), args[i]);
          subst.emplace_back("phi", goal);
          return remember(key, ProofNode{Rule::MnLeft, s, {std::move(*c0)},
                                         std::move(subst)});
        }
      }
    }

    for (std::size_t i = 0; i < s.premises.size(); ++i) {
      Sequent slim = Sequent::make(without_index(s.premises, i), goal);
      if (auto c0 = search(slim, budget - 1))
        return remember(key, ProofNode{Rule::Weakening, s, {std::move(*c0)},
                                       {{"psi", s.premises[i]}}});
    }

    const int left_budget = std::min(budget - 1, kCutLeftBudget);
    for (const TermPtr& chi : cut_candidates(s, key)) {
      auto c0 = search(Sequent::make(s.premises, chi), left_budget);
      if (!c0) continue;
      auto c1 = search(Sequent::make(with_term(s.premises, chi), goal),
                       budget - 1);
      if (c1)
        return remember(key,
                        ProofNode{Rule::Cut, s, {std::move(*c0), std::move(*c1)},
                                  {{"phi", chi}, {"psi", goal}}});
    }

    auto it = failed.find(key);
    if (it == failed.end() || it->second < budget) failed[key] = budget;
    return std::nullopt;
  }
};

ProveOutcome searched(Searcher& searcher, const Sequent& s, int depth) {
  if (depth < 1) throw std::invalid_argument("prove: depth must be >= 1");
  searcher.set_root(s);
  std::optional<ProofNode> proof = searcher.search(s, depth);
  if (proof) return {std::move(proof), ""};
  return {std::nullopt,
          "no proof within depth " + std::to_string(depth) + ", iterated-m bound " +
              std::to_string(searcher.mn_bound) +
              "; Cut restricted to goal subformulas, joins of two subformulas, "
              "and the premise compound"};
}

}  // namespace

ProveOutcome prove(const Sequent& s, int depth, int mn_bound) {
  if (mn_bound < 0) throw std::invalid_argument("prove: mn_bound must be >= 0");
  Searcher searcher(mn_bound);
  return searched(searcher, s, depth);
}

struct Prover::Impl {
  Searcher searcher;
  explicit Impl(int mn) : searcher(mn) {}
};

Prover::Prover(int mn_bound) {
  if (mn_bound < 0)
    throw std::invalid_argument("Prover: mn_bound must be >= 0");
  impl_ = std::make_unique<Impl>(mn_bound);
}

Prover::~Prover() = default;
Prover::Prover(Prover&&) noexcept = default;
Prover& Prover::operator=(Prover&&) noexcept = default;

ProveOutcome Prover::prove(const Sequent& s, int depth) {
  return searched(impl_->searcher, s, depth);
}

namespace {

int emit_node(const ProofNode& n, std::vector<std::string>* lines) {
  std::vector<int> kids;
  for (const ProofNode& c : n.children) kids.push_back(emit_node(c, lines));
  int id = static_cast<int>(lines->size()) + 1;
  std::string line = std::to_string(id) + ". " + to_string(n.sequent) + " ; " +
                     rule_name(n.rule) + " ; from ";
  if (kids.empty()) {
    line += "-";
  } else {
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) line += ",";
      line += std::to_string(kids[i]);
    }
  }
  line += " ; subst ";
  for (std::size_t i = 0; i < n.subst.size(); ++i) {
    if (i) line += ",";
    line += n.subst[i].first + "=" + to_string(n.subst[i].second);
  }
  lines->push_back(std::move(line));
  return id;
}

// Splits on commas at parenthesis depth zero.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t at = line.find(" ; ", start);
    if (at == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, at - start));
    start = at + 3;
  }
}

}  // namespace

std::string write_certificate(const ProofNode& p) {
  std::vector<std::string> lines;
  emit_node(p, &lines);
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

ProofNode parse_certificate(const std::string& text, const Signature& sig) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);

  std::map<int, ProofNode> nodes;
  std::set<int> unconsumed;
  std::size_t line_no = 0;
  int last_id = 0;
  for (const std::string& line : lines) {
    ++line_no;
    if (trimmed(line).empty())
      throw CertificateError("blank line", line_no);
    std::size_t dot = line.find(". ");
    if (dot == std::string::npos)
      throw CertificateError("missing node id", line_no);
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(line.substr(0, dot), &used);
      if (used != dot) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw CertificateError("bad node id", line_no);
    }
    if (id != static_cast<int>(line_no))
      throw CertificateError("node ids must be sequential", line_no);

    std::vector<std::string> fields = split_fields(line.substr(dot + 2));
    if (fields.size() != 4)
      throw CertificateError("expected four ; separated fields", line_no);

    ProofNode node;
    try {
      node.sequent = parse_sequent(fields[0], sig);
    } catch (const SequentError& e) {
      throw CertificateError(e.what(), line_no);
    }
    std::optional<Rule> rule = rule_from_name(fields[1]);
    if (!rule) throw CertificateError("unknown rule " + fields[1], line_no);
    node.rule = *rule;

    if (fields[2].rfind("from ", 0) != 0)
      throw CertificateError("expected \"from\" field", line_no);
    std::string from = fields[2].substr(5);
    if (from != "-") {
      for (const std::string& tok : split_top_level(from)) {
        int kid = 0;
        try {
          std::size_t used = 0;
          kid = std::stoi(tok, &used);
          if (used != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw CertificateError("bad child id \"" + tok + "\"", line_no);
        }
        auto it = nodes.find(kid);
        if (it == nodes.end() || !unconsumed.count(kid))
          throw CertificateError("child " + std::to_string(kid) +
                                     " is not an available earlier node",
                                 line_no);
        node.children.push_back(std::move(it->second));
        nodes.erase(it);
        unconsumed.erase(kid);
      }
    }
    if (static_cast<int>(node.children.size()) != rule_arity(node.rule))
      throw CertificateError("child count does not match rule", line_no);

    if (fields[3].rfind("subst ", 0) != 0)
      throw CertificateError("expected \"subst\" field", line_no);
    std::string subst = fields[3].substr(6);
    if (!subst.empty()) {
      for (const std::string& tok : split_top_level(subst)) {
        std::size_t eq = tok.find('=');
        if (eq == std::string::npos)
          throw CertificateError("bad substitution pair \"" + tok + "\"",
                                 line_no);
        try {
          node.subst.emplace_back(tok.substr(0, eq),
                                  parse_formula(tok.substr(eq + 1), sig));
        } catch (const FormulaError& e) {
          throw CertificateError(std::string("bad substitution term: ") +
                                     e.what(),
                                 line_no);
        }
      }
    }

    last_id = id;
    nodes.emplace(id, std::move(node));
    unconsumed.insert(id);
  }

  if (nodes.size() != 1 || !unconsumed.count(last_id))
    throw CertificateError("certificate must end with a single root node",
                           lines.empty() ? 0 : lines.size());
  return std::move(nodes.begin()->second);
}

namespace {

std::string witness_detail(const ConsequenceWitness& w, const AlgebraClass& cls) {
  const FiniteAlgebra& a = cls.member(w.member);
  std::string out = "fails in " + w.label + " at ";
  if (w.valuation.empty()) out += "the empty valuation";
  for (std::size_t i = 0; i < w.valuation.size(); ++i) {
    if (i) out += ",";
    out += "x" + std::to_string(w.valuation[i].first) + "=" +
           a.name_of(w.valuation[i].second);
  }
  if (w.separating)
    out += " with separating element " + a.name_of(*w.separating);
  return out;
}

}  // namespace

SoundnessReport soundness_audit(const Sequent& s, const AlgebraClass& cls) {
  ConsequenceQuery q{s.premises, s.conclusion, Mode::Plain};
  ConsequenceResult r = consequence(q, cls, Exec::Serial);
  if (r.holds) return {true, ""};
  return {false, to_string(s) + " " + witness_detail(*r.witness, cls)};
}

SoundnessReport soundness_audit(const ProofNode& p, const AlgebraClass& cls) {
  ProofCheck c = check_proof(p);
  if (!c.valid)
    return {false, "invalid proof at " + c.node + ": " + c.reason};
  std::vector<std::pair<const ProofNode*, std::string>> stack{{&p, "root"}};
  while (!stack.empty()) {
    auto [node, path] = stack.back();
    stack.pop_back();
    SoundnessReport r = soundness_audit(node->sequent, cls);
    if (!r.consistent) return {false, path + ": " + r.detail};
    for (std::size_t i = 0; i < node->children.size(); ++i)
      stack.emplace_back(&node->children[i],
                         path + "." + std::to_string(i));
  }
  return {true, ""};
}

}  // namespace nearlat
