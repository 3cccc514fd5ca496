#include "nearlat/consequence.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <map>
#include <set>
#include <stdexcept>

#include "nearlat/congruences.hpp"
#include "nearlat/filters.hpp"

namespace nearlat {

namespace {

std::vector<int> query_variables(const std::vector<TermPtr>& premises,
                                 const TermPtr& conclusion) {
  std::vector<int> vars;
  auto add = [&](const TermPtr& t) {
    for (int v : variables_of(t))
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  };
  for (const auto& p : premises) add(p);
  add(conclusion);
  return vars;
}

void decode_valuation(long long idx, const std::vector<int>& vars, int n,
                      std::vector<int>& asg) {
  for (std::size_t i = vars.size(); i-- > 0;) {
    asg[static_cast<std::size_t>(vars[i])] = static_cast<int>(idx % n);
    idx /= n;
  }
}

struct ModeCheck {
  const FiniteAlgebra& a;
  const ConsequenceQuery& q;
  int top = -1;  // truth mode only

  bool ok(const std::vector<int>& asg) const {
    int hc = eval_term(a, q.conclusion, asg);
    if (q.premises.empty()) {
      // all three modes: the conclusion value must be the greatest element
      return a.downset(hc) == a.universe_mask();
    }
    switch (q.mode) {
      case Mode::Plain: {
        int acc = a.m(eval_term(a, q.premises[0], asg),
                      eval_term(a, q.premises[0], asg), hc);
        for (std::size_t i = 1; i < q.premises.size(); ++i)
          acc = a.m(acc, eval_term(a, q.premises[i], asg), hc);
        bool le = a.leq(acc, hc);
        bool eq = acc == hc;
        if (le != eq)
          throw std::logic_error(
              "plain mode: order and equality readings disagree");
        return le;
      }
      case Mode::Degrees:
        return separating_bound(asg) < 0;
      case Mode::Truth: {
        for (const auto& p : q.premises)
          if (eval_term(a, p, asg) != top) return true;
        return hc == top;
      }
    }
    return true;
  }

  // least element below every premise value but not below the conclusion
  // value, or -1
  int separating_bound(const std::vector<int>& asg) const {
    int hc = eval_term(a, q.conclusion, asg);
    std::vector<int> hp;
    hp.reserve(q.premises.size());
    for (const auto& p : q.premises) hp.push_back(eval_term(a, p, asg));
    for (int e = 0; e < a.size(); ++e) {
      bool below_all = true;
      for (int v : hp)
        if (!a.leq(e, v)) {
          below_all = false;
          break;
        }
      if (below_all && !a.leq(e, hc)) return e;
    }
    return -1;
  }
};

long long valuation_count(int n, std::size_t vars) {
  long long total = 1;
  for (std::size_t i = 0; i < vars; ++i) {
    if (total > 100'000'000 / n)
      throw std::invalid_argument("valuation space exceeds the guard");
    total *= n;
  }
  return total;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Plain: return "plain";
    case Mode::Degrees: return "degrees";
    case Mode::Truth: return "truth";
  }
  return "?";
}

std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "plain") return Mode::Plain;
  if (s == "degrees") return Mode::Degrees;
  if (s == "truth") return Mode::Truth;
  return std::nullopt;
}

ConsequenceResult consequence(const ConsequenceQuery& q, const AlgebraClass& cls,
                              Exec exec) {
  if (!q.conclusion) throw std::invalid_argument("consequence: no conclusion");
  if (q.mode == Mode::Truth)
    for (std::size_t i = 0; i < cls.count(); ++i)
      if (!cls.member(i).constants().count("top"))
        throw std::invalid_argument("truth mode requires a declared top in '" +
                                    cls.label(i) + "'");

  std::vector<int> vars = query_variables(q.premises, q.conclusion);
  int max_var = vars.empty() ? -1 : *std::max_element(vars.begin(), vars.end());

  for (std::size_t mi = 0; mi < cls.count(); ++mi) {
    const auto& a = cls.member(mi);
    ModeCheck check{a, q,
                    q.mode == Mode::Truth ? a.constants().at("top") : -1};
    long long total = valuation_count(a.size(), vars.size());

    long long bad = -1;
    if (exec == Exec::Serial || total < 4096) {
      std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
      for (long long idx = 0; idx < total; ++idx) {
        decode_valuation(idx, vars, a.size(), asg);
        if (!check.ok(asg)) {
          bad = idx;
          break;
        }
      }
    } else {
      long long best = LLONG_MAX;
#pragma omp parallel
      {
        std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
#pragma omp for reduction(min : best) schedule(static)
        for (long long idx = 0; idx < total; ++idx) {
          if (idx >= best) continue;
          decode_valuation(idx, vars, a.size(), asg);
          if (!check.ok(asg)) best = idx;
        }
      }
      if (best != LLONG_MAX) bad = best;
    }

    if (bad >= 0) {
      std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
      decode_valuation(bad, vars, a.size(), asg);
      ConsequenceWitness w;
      w.member = mi;
      w.label = cls.label(mi);
      for (int v : vars)
        w.valuation.emplace_back(v, asg[static_cast<std::size_t>(v)]);
      if (q.mode == Mode::Degrees && !q.premises.empty())
        w.separating = check.separating_bound(asg);
      return {false, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

EquivalenceResult equivalent_in_class(const TermPtr& s, const TermPtr& t,
                                      const AlgebraClass& cls, Exec exec) {
  std::vector<int> vars = query_variables({s}, t);
  int max_var = vars.empty() ? -1 : *std::max_element(vars.begin(), vars.end());

  for (std::size_t mi = 0; mi < cls.count(); ++mi) {
    const auto& a = cls.member(mi);
    long long total = valuation_count(a.size(), vars.size());
    auto differs = [&](const std::vector<int>& asg) {
      int hs = eval_term(a, s, asg), ht = eval_term(a, t, asg);
      bool both_ways = a.join(hs, ht) == ht && a.join(ht, hs) == hs;
      if (both_ways != (hs == ht))
        throw std::logic_error(
            "equivalence: mutual-order reading disagrees with equality");
      return hs != ht;
    };

    long long bad = -1;
    if (exec == Exec::Serial || total < 4096) {
      std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
      for (long long idx = 0; idx < total; ++idx) {
        decode_valuation(idx, vars, a.size(), asg);
        if (differs(asg)) {
          bad = idx;
          break;
        }
      }
    } else {
      long long best = LLONG_MAX;
#pragma omp parallel
      {
        std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
#pragma omp for reduction(min : best) schedule(static)
        for (long long idx = 0; idx < total; ++idx) {
          if (idx >= best) continue;
          decode_valuation(idx, vars, a.size(), asg);
          if (differs(asg)) best = idx;
        }
      }
      if (best != LLONG_MAX) bad = best;
    }

    if (bad >= 0) {
      std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
      decode_valuation(bad, vars, a.size(), asg);
      EquivalenceWitness w;
      w.member = mi;
      w.label = cls.label(mi);
      for (int v : vars)
        w.valuation.emplace_back(v, asg[static_cast<std::size_t>(v)]);
      w.lhs = eval_term(a, s, asg);
      w.rhs = eval_term(a, t, asg);
      return {false, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

std::vector<TermPtr> generate_formulas(int var_bound, int depth_bound,
                                       const Signature& sig) {
  if (var_bound < 1) throw std::invalid_argument("need at least one variable");
  auto cmp = [](const TermPtr& a, const TermPtr& b) { return compare(a, b) < 0; };
  std::vector<TermPtr> level;
  for (int v = 0; v < var_bound; ++v) level.push_back(Term::var(v));
  for (const auto& c : sig.constants) level.push_back(Term::constant(c));
  std::sort(level.begin(), level.end(), cmp);

  std::vector<TermPtr> all = level;
  for (int d = 1; d <= depth_bound; ++d) {
    std::vector<TermPtr> next;
    std::size_t base = all.size();
    if (base * base * base + base > 5000)
      throw std::invalid_argument("formula bound explosion");
    if (sig.has_box)
      for (const auto& f : all) next.push_back(Term::box(f));
    for (const auto& f : all)
      for (const auto& g : all)
        for (const auto& h : all) next.push_back(Term::m(f, g, h));
    std::sort(next.begin(), next.end(), cmp);
    std::vector<TermPtr> merged;
    for (auto& t : next) {
      bool seen = std::binary_search(all.begin(), all.end(), t, cmp) ||
                  (!merged.empty() && equal(merged.back(), t));
      if (!seen) merged.push_back(t);
    }
    all.insert(all.end(), merged.begin(), merged.end());
    std::sort(all.begin(), all.end(), cmp);
  }
  return all;
}

namespace {

// Parallel scan over a schema's instance tuples; violation messages are
// gathered in instance order so reports are deterministic.
template <class F>
void scan_schema(long long total, std::vector<std::string>& out, F&& message_at) {
  std::vector<std::pair<long long, std::string>> found;
#pragma omp parallel
  {
    std::vector<std::pair<long long, std::string>> local;
#pragma omp for schedule(dynamic, 64)
    for (long long idx = 0; idx < total; ++idx) {
      auto msg = message_at(idx);
      if (!msg.empty()) local.emplace_back(idx, std::move(msg));
    }
#pragma omp critical
    found.insert(found.end(), local.begin(), local.end());
  }
  std::sort(found.begin(), found.end());
  for (auto& [idx, msg] : found) out.push_back(std::move(msg));
}

}  // namespace

DnTermAudit audit_dn_term(const AlgebraClass& cls, int depth_bound, int var_bound,
                          int mn_bound) {
  DnTermAudit report;

  for (std::size_t i = 0; i < cls.count(); ++i) {
    const auto& a = cls.member(i);
    auto near = check_nearlattice(a);
    if (!near.ok) {
      report.equational_failures.push_back(
          cls.label(i) + ": " + near.witness->law + " fails");
      continue;
    }
    auto dist = check_distributive(a);
    if (!dist.ok)
      report.equational_failures.push_back(
          cls.label(i) + ": " + dist.witness->law + " fails");
  }

  auto formulas = generate_formulas(var_bound, depth_bound, Signature{});
  const long long f = static_cast<long long>(formulas.size());
  auto holds = [&](std::vector<TermPtr> prem, TermPtr concl) {
    ConsequenceQuery q{std::move(prem), std::move(concl), Mode::Plain};
    return consequence(q, cls, Exec::Serial).holds;
  };
  auto join = [](const TermPtr& x, const TermPtr& y) { return Term::join(x, y); };

  // join case split: a disjunctive premise entails exactly what both
  // disjuncts entail
  scan_schema(f * f * f, report.schema_violations, [&](long long idx) {
    const auto& chi = formulas[static_cast<std::size_t>(idx % f)];
    const auto& psi = formulas[static_cast<std::size_t>(idx / f % f)];
    const auto& phi = formulas[static_cast<std::size_t>(idx / f / f)];
    bool lhs = holds({join(phi, psi)}, chi);
    bool rhs = holds({phi}, chi) && holds({psi}, chi);
    if (lhs == rhs) return std::string();
    return "join-cases fails at phi=" + to_string(phi) + " psi=" + to_string(psi) +
           " chi=" + to_string(chi);
  });
  report.instances += f * f * f;

  // m lies below both of its joins
  scan_schema(f * f * f, report.schema_violations, [&](long long idx) {
    const auto& chi = formulas[static_cast<std::size_t>(idx % f)];
    const auto& psi = formulas[static_cast<std::size_t>(idx / f % f)];
    const auto& phi = formulas[static_cast<std::size_t>(idx / f / f)];
    TermPtr mt = Term::m(phi, psi, chi);
    if (holds({mt}, join(phi, chi)) && holds({mt}, join(psi, chi)))
      return std::string();
    return "m-to-joins fails at phi=" + to_string(phi) + " psi=" + to_string(psi) +
           " chi=" + to_string(chi);
  });
  report.instances += f * f * f;

  // the two joins together recover m
  scan_schema(f * f * f, report.schema_violations, [&](long long idx) {
    const auto& chi = formulas[static_cast<std::size_t>(idx % f)];
    const auto& psi = formulas[static_cast<std::size_t>(idx / f % f)];
    const auto& phi = formulas[static_cast<std::size_t>(idx / f / f)];
    if (holds({join(phi, chi), join(psi, chi)}, Term::m(phi, psi, chi)))
      return std::string();
    return "joins-to-m fails at phi=" + to_string(phi) + " psi=" + to_string(psi) +
           " chi=" + to_string(chi);
  });
  report.instances += f * f * f;

  for (int n = 0; n <= mn_bound; ++n) {
    long long tuples = 1;
    for (int i = 0; i < n + 2; ++i) tuples *= f;
    auto decode = [&](long long idx, std::vector<TermPtr>& args) {
      args.clear();
      long long rest = idx / f;
      for (int i = 0; i < n + 1; ++i) {
        args.push_back(formulas[static_cast<std::size_t>(rest % f)]);
        rest /= f;
      }
      std::reverse(args.begin(), args.end());
      return formulas[static_cast<std::size_t>(idx % f)];  // the target formula
    };

    // entailed conclusions compress into a single m-chain premise
    scan_schema(tuples, report.schema_violations, [&](long long idx) {
      std::vector<TermPtr> args;
      TermPtr phi = decode(idx, args);
      if (!holds(args, phi)) return std::string();
      if (holds({build_mn(args, phi)}, phi)) return std::string();
      std::string s = "premise-compression fails at [";
      for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? "," : "") + to_string(args[i]);
      return s + "] phi=" + to_string(phi);
    });
    report.instances += tuples;

    // ...and decompress back into separate premises
    scan_schema(tuples, report.schema_violations, [&](long long idx) {
      std::vector<TermPtr> args;
      TermPtr phi = decode(idx, args);
      if (!holds({build_mn(args, phi)}, phi)) return std::string();
      if (holds(args, phi)) return std::string();
      std::string s = "premise-expansion fails at [";
      for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? "," : "") + to_string(args[i]);
      return s + "] phi=" + to_string(phi);
    });
    report.instances += tuples;

    // the m-chain sits below each of its joins
    scan_schema(tuples, report.schema_violations, [&](long long idx) {
      std::vector<TermPtr> args;
      TermPtr psi = decode(idx, args);
      TermPtr mn = build_mn(args, psi);
      for (const auto& arg : args)
        if (!holds({mn}, join(arg, psi))) {
          std::string s = "mn-to-join fails at [";
          for (std::size_t i = 0; i < args.size(); ++i)
            s += (i ? "," : "") + to_string(args[i]);
          return s + "] psi=" + to_string(psi);
        }
      return std::string();
    });
    report.instances += tuples;

    // all the joins together recover the m-chain
    scan_schema(tuples, report.schema_violations, [&](long long idx) {
      std::vector<TermPtr> args;
      TermPtr psi = decode(idx, args);
      std::vector<TermPtr> prem;
      for (const auto& arg : args) prem.push_back(join(arg, psi));
      if (holds(prem, build_mn(args, psi))) return std::string();
      std::string s = "joins-to-mn fails at [";
      for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? "," : "") + to_string(args[i]);
      return s + "] psi=" + to_string(psi);
    });
    report.instances += tuples;

    // the conclusion entails any m-chain that ends in it
    scan_schema(tuples, report.schema_violations, [&](long long idx) {
      std::vector<TermPtr> args;
      TermPtr phi = decode(idx, args);
      if (holds({phi}, build_mn(args, phi))) return std::string();
      std::string s = "mn-over-conclusion fails at [";
      for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? "," : "") + to_string(args[i]);
      return s + "] phi=" + to_string(phi);
    });
    report.instances += tuples;
  }

  return report;
}

std::vector<std::uint64_t> sfilters(const FiniteAlgebra& a, const AlgebraClass& cls) {
  bool found = false;
  for (const auto& m : cls.members())
    if (m.size() == a.size() && m.table() == a.table() &&
        m.constants() == a.constants() && m.has_box() == a.has_box() &&
        (!m.has_box() || m.box_table() == a.box_table())) {
      found = true;
      break;
    }
  if (!found)
    throw std::invalid_argument("sfilters: algebra is not a member of the class");

  std::vector<std::uint64_t> out{0};
  for (auto f : all_filters(a)) out.push_back(f);

  // closure audit: every returned set must respect each schema instance that
  // holds over the class
  auto formulas = generate_formulas(2, 1, Signature{});
  std::vector<std::pair<std::vector<TermPtr>, TermPtr>> candidates;
  for (const auto& phi : formulas)
    for (const auto& psi : formulas)
      for (const auto& chi : formulas) {
        TermPtr mt = Term::m(phi, psi, chi);
        candidates.push_back({{mt}, Term::join(phi, chi)});
        candidates.push_back({{mt}, Term::join(psi, chi)});
        candidates.push_back({{Term::join(phi, chi), Term::join(psi, chi)}, mt});
        candidates.push_back({{build_mn({phi, psi}, chi)}, chi});
        candidates.push_back({{phi}, build_mn({psi}, phi)});
      }
  for (const auto& [prem, concl] : candidates) {
    ConsequenceQuery q{prem, concl, Mode::Plain};
    if (!consequence(q, cls, Exec::Serial).holds) continue;
    std::vector<int> vars = query_variables(prem, concl);
    int max_var = vars.empty() ? -1 : *std::max_element(vars.begin(), vars.end());
    long long total = valuation_count(a.size(), vars.size());
    std::vector<int> asg(static_cast<std::size_t>(max_var + 1), -1);
    for (long long idx = 0; idx < total; ++idx) {
      decode_valuation(idx, vars, a.size(), asg);
      for (auto s : out) {
        bool all_in = true;
        for (const auto& p : prem)
          if (!(s >> eval_term(a, p, asg) & 1)) {
            all_in = false;
            break;
          }
        if (all_in && !(s >> eval_term(a, concl, asg) & 1))
          throw std::logic_error("sfilters: set " + subset_to_string(a, s) +
                                 " is not closed under a holding instance");
      }
    }
  }
  return out;
}

HypothesisAudit truth_filter_hypothesis(const FiniteAlgebra& a, int max_generators) {
  auto top_it = a.constants().find("top");
  if (top_it == a.constants().end())
    throw std::invalid_argument("truth_filter_hypothesis: no declared top");
  const int top = top_it->second;

  // one congruence list serves every generated filter
  auto cons = all_congruences(a);
  auto top_block_of_largest_compatible = [&](std::uint64_t f) {
    Partition best = identity_partition(a.size());
    for (const auto& theta : cons) {
      bool compatible = true;
      for (auto block : blocks_of(theta))
        if ((block & f) != 0 && (block & ~f & a.universe_mask()) != 0) {
          compatible = false;
          break;
        }
      if (compatible) best = join_partitions(best, theta);
    }
    std::uint64_t block = 0;
    for (int e = 0; e < a.size(); ++e)
      if (best[static_cast<std::size_t>(e)] == best[static_cast<std::size_t>(top)])
        block |= 1ull << e;
    return block;
  };

  std::map<std::uint64_t, std::uint64_t> cache;  // filter -> top block
  std::uint64_t subsets = 1ull << a.size();
  for (std::uint64_t x = 1; x < subsets; ++x) {
    if (std::popcount(x) > max_generators) continue;
    std::uint64_t f = generated_filter(a, x);
    auto it = cache.find(f);
    if (it == cache.end())
      it = cache.emplace(f, top_block_of_largest_compatible(f)).first;
    if (it->second != f)
      return {false, "generating set " + subset_to_string(a, x) +
                         " gives filter " + subset_to_string(a, f) +
                         " but top block " + subset_to_string(a, it->second)};
  }
  return {true, ""};
}

}  // namespace nearlat
