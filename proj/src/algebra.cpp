#include "nearlat/algebra.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace nearlat {

namespace {

// First index in [0,total) where ok() is false, or -1. The parallel path is
// a min-reduction over the flattened index, so both paths report the same
// (lexicographically first) witness.
template <class F>
long long find_first_violation(long long total, Exec exec, F&& ok) {
  if (exec == Exec::Serial) {
    for (long long i = 0; i < total; ++i)
      if (!ok(i)) return i;
    return -1;
  }
  long long best = LLONG_MAX;
#pragma omp parallel for reduction(min : best) schedule(static)
  for (long long i = 0; i < total; ++i) {
    if (i < best && !ok(i)) best = i;
  }
  return best == LLONG_MAX ? -1 : best;
}

std::vector<int> decode_tuple(long long idx, int n, int arity) {
  std::vector<int> t(static_cast<std::size_t>(arity));
  for (int p = arity - 1; p >= 0; --p) {
    t[static_cast<std::size_t>(p)] = static_cast<int>(idx % n);
    idx /= n;
  }
  return t;
}

}  // namespace

FiniteAlgebra::FiniteAlgebra(int n, std::vector<std::uint8_t> table,
                             std::vector<std::string> names,
                             std::map<std::string, int> constants,
                             std::optional<std::vector<std::uint8_t>> box)
    : n_(n),
      table_(std::move(table)),
      names_(std::move(names)),
      constants_(std::move(constants)),
      box_(std::move(box)) {
  if (n_ < 1 || n_ > 64) throw std::invalid_argument("algebra size out of range");
  if (table_.size() != static_cast<std::size_t>(n_) * n_ * n_)
    throw std::invalid_argument("operation table has wrong shape");
  for (auto v : table_)
    if (v >= n_) throw std::invalid_argument("table entry out of range");
  if (names_.empty()) {
    names_.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) names_.push_back(std::to_string(i));
  }
  if (names_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("element name list has wrong length");
  for (auto& [name, idx] : constants_)
    if (idx < 0 || idx >= n_)
      throw std::invalid_argument("constant '" + name + "' out of range");
  if (box_) {
    if (box_->size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("box table has wrong shape");
    for (auto v : *box_)
      if (v >= n_) throw std::invalid_argument("box entry out of range");
  }

  up_.assign(static_cast<std::size_t>(n_), 0);
  down_.assign(static_cast<std::size_t>(n_), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (m(i, i, j) == j) {
        up_[static_cast<std::size_t>(i)] |= 1ull << j;
        down_[static_cast<std::size_t>(j)] |= 1ull << i;
      }

  meet_.assign(static_cast<std::size_t>(n_) * n_, -1);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      std::uint64_t lower = down_[static_cast<std::size_t>(i)] &
                            down_[static_cast<std::size_t>(j)];
      if (lower == 0) continue;
      int g = -2;  // lower bounds exist, but no greatest one (garbage table)
      for (std::uint64_t t = lower; t; t &= t - 1) {
        int k = std::countr_zero(t);
        if ((lower & ~down_[static_cast<std::size_t>(k)]) == 0) {
          g = k;
          break;
        }
      }
      meet_[static_cast<std::size_t>(i) * n_ + j] = g;
    }

  auto top = constants_.find("top");
  if (top != constants_.end() &&
      down_[static_cast<std::size_t>(top->second)] != universe_mask())
    throw std::invalid_argument("constant 'top' is not the greatest element");
}

std::optional<int> FiniteAlgebra::index_of(const std::string& name) const {
  for (int i = 0; i < n_; ++i)
    if (names_[static_cast<std::size_t>(i)] == name) return i;
  return std::nullopt;
}

std::optional<int> FiniteAlgebra::greatest() const {
  for (int i = 0; i < n_; ++i)
    if (down_[static_cast<std::size_t>(i)] == universe_mask()) return i;
  return std::nullopt;
}

Signature FiniteAlgebra::signature() const {
  Signature sig;
  for (auto& [name, idx] : constants_) sig.add_constant(name);
  sig.has_box = has_box();
  return sig;
}

FiniteAlgebra FiniteAlgebra::with_top() const {
  auto g = greatest();
  if (!g) throw std::invalid_argument("no greatest element to name 'top'");
  auto consts = constants_;
  consts["top"] = *g;
  return FiniteAlgebra(n_, table_, names_, std::move(consts), box_);
}

FiniteAlgebra FiniteAlgebra::without_constants() const {
  return FiniteAlgebra(n_, table_, names_, {}, box_);
}

FiniteAlgebra FiniteAlgebra::with_box(std::vector<std::uint8_t> box) const {
  return FiniteAlgebra(n_, table_, names_, constants_, std::move(box));
}

FiniteAlgebra FiniteAlgebra::renamed(std::vector<std::string> names) const {
  return FiniteAlgebra(n_, table_, std::move(names), constants_, box_);
}

CheckResult check_nearlattice(const FiniteAlgebra& a, Exec exec) {
  const int n = a.size();
  const std::uint8_t* t = a.table().data();
  auto M = [t, n](int i, int j, int k) {
    return t[(static_cast<std::size_t>(i) * n + j) * n + k];
  };

  long long bad = find_first_violation(
      static_cast<long long>(n) * n, exec, [&](long long idx) {
        int x = static_cast<int>(idx / n), y = static_cast<int>(idx % n);
        return M(x, y, x) == x;
      });
  if (bad >= 0) {
    auto tu = decode_tuple(bad, n, 2);
    return {false, IdentityWitness{"absorption", tu, a.m(tu[0], tu[1], tu[0]), tu[0]}};
  }

  long long total = 1;
  for (int i = 0; i < 5; ++i) total *= n;
  bad = find_first_violation(total, exec, [&](long long idx) {
    int w = static_cast<int>(idx % n);
    idx /= n;
    int u = static_cast<int>(idx % n);
    idx /= n;
    int z = static_cast<int>(idx % n);
    idx /= n;
    int y = static_cast<int>(idx % n);
    int x = static_cast<int>(idx / n);
    int lhs = M(M(x, y, z), M(y, M(u, x, z), z), w);
    int rhs = M(w, w, M(y, M(x, u, z), z));
    return lhs == rhs;
  });
  if (bad >= 0) {
    auto tu = decode_tuple(bad, n, 5);
    int x = tu[0], y = tu[1], z = tu[2], u = tu[3], w = tu[4];
    int lhs = a.m(a.m(x, y, z), a.m(y, a.m(u, x, z), z), w);
    int rhs = a.m(w, w, a.m(y, a.m(x, u, z), z));
    return {false, IdentityWitness{"interchange", tu, lhs, rhs}};
  }
  return {true, std::nullopt};
}

bool upsets_distributive(const FiniteAlgebra& a) {
  const int n = a.size();
  for (int base = 0; base < n; ++base) {
    // Skip non-minimal elements: their upsets are sublattices of a minimal
    // element's upset, so distributivity is inherited.
    if (a.downset(base) != (1ull << base)) continue;
    std::uint64_t up = a.upset(base);
    for (std::uint64_t tx = up; tx; tx &= tx - 1) {
      int x = std::countr_zero(tx);
      for (std::uint64_t ty = up; ty; ty &= ty - 1) {
        int y = std::countr_zero(ty);
        for (std::uint64_t tz = up; tz; tz &= tz - 1) {
          int z = std::countr_zero(tz);
          int lhs = a.meet(x, a.join(y, z));
          int rhs = a.join(a.meet(x, y), a.meet(x, z));
          if (lhs < 0 || rhs < 0 || lhs != rhs) return false;
        }
      }
    }
  }
  return true;
}

CheckResult check_distributive(const FiniteAlgebra& a, Exec exec) {
  if (!check_nearlattice(a, exec).ok)
    throw std::invalid_argument("check_distributive requires a nearlattice");

  const int n = a.size();
  const std::uint8_t* t = a.table().data();
  auto M = [t, n](int i, int j, int k) {
    return t[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  long long total = static_cast<long long>(n) * n * n * n;

  long long bad_mid = find_first_violation(total, exec, [&](long long idx) {
    int w = static_cast<int>(idx % n);
    idx /= n;
    int z = static_cast<int>(idx % n);
    idx /= n;
    int y = static_cast<int>(idx % n);
    int x = static_cast<int>(idx / n);
    int l = M(x, M(y, y, z), w);
    int sub = M(x, y, w);
    int r = M(sub, sub, M(x, z, w));
    return l == r;
  });

  long long bad_join = find_first_violation(total, exec, [&](long long idx) {
    int w = static_cast<int>(idx % n);
    idx /= n;
    int z = static_cast<int>(idx % n);
    idx /= n;
    int y = static_cast<int>(idx % n);
    int x = static_cast<int>(idx / n);
    return M(x, x, M(y, z, w)) == M(M(x, x, y), M(x, x, z), w);
  });

  if ((bad_mid >= 0) != (bad_join >= 0))
    throw std::logic_error("distributivity scans disagree on a nearlattice");
  bool ok = bad_mid < 0;
  if (upsets_distributive(a) != ok)
    throw std::logic_error(
        "upset-distributivity criterion disagrees with the identity scans");

  if (ok) return {true, std::nullopt};
  auto tu = decode_tuple(bad_mid, n, 4);
  int x = tu[0], y = tu[1], z = tu[2], w = tu[3];
  int lhs = a.m(x, a.m(y, y, z), w);
  int sub = a.m(x, y, w);
  int rhs = a.m(sub, sub, a.m(x, z, w));
  return {false, IdentityWitness{"mid-join distribution", tu, lhs, rhs}};
}

bool order_route_is_nearlattice(const FiniteAlgebra& a, std::string* reason) {
  const int n = a.size();
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  for (int i = 0; i < n; ++i)
    if (!a.leq(i, i)) return fail("derived relation is not reflexive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && a.leq(i, j) && a.leq(j, i))
        return fail("derived relation is not antisymmetric");
      if (a.leq(i, j) && (a.upset(j) & ~a.upset(i)))
        return fail("derived relation is not transitive");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::uint64_t ub = a.upset(i) & a.upset(j);
      int least = -1;
      for (std::uint64_t t = ub; t; t &= t - 1) {
        int k = std::countr_zero(t);
        if ((ub & ~a.upset(k)) == 0) {
          least = k;
          break;
        }
      }
      if (least < 0) return fail("a pair has no least upper bound");
      if (a.m(i, i, j) != least || a.m(j, j, i) != least)
        return fail("m(i,i,j) is not the least upper bound");
    }
  for (int base = 0; base < n; ++base) {
    std::uint64_t up = a.upset(base);
    for (std::uint64_t tx = up; tx; tx &= tx - 1) {
      int x = std::countr_zero(tx);
      for (std::uint64_t ty = up; ty; ty &= ty - 1) {
        int y = std::countr_zero(ty);
        std::uint64_t lower = a.downset(x) & a.downset(y) & up;
        int g = -1;
        for (std::uint64_t t = lower; t; t &= t - 1) {
          int k = std::countr_zero(t);
          if ((lower & ~a.downset(k)) == 0) {
            g = k;
            break;
          }
        }
        if (g < 0) return fail("an upset has a pair without a meet");
      }
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int base = 0; base < n; ++base) {
        int jx = a.join(x, base), jy = a.join(y, base);
        std::uint64_t lower = a.downset(jx) & a.downset(jy) & a.upset(base);
        int g = -1;
        for (std::uint64_t t = lower; t; t &= t - 1) {
          int k = std::countr_zero(t);
          if ((lower & ~a.downset(k)) == 0) {
            g = k;
            break;
          }
        }
        if (g < 0 || a.m(x, y, base) != g)
          return fail("m(x,y,a) is not the upset meet of the joins");
      }
  if (reason) reason->clear();
  return true;
}

FiniteAlgebra from_hasse(const std::vector<std::string>& names,
                         const std::vector<std::pair<int, int>>& covers,
                         std::map<std::string, int> constants,
                         std::optional<std::vector<std::uint8_t>> box) {
  const int n = static_cast<int>(names.size());
  if (n < 1 || n > 64) throw std::runtime_error("hasse diagram size out of range");
  std::vector<std::uint64_t> up(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) up[static_cast<std::size_t>(i)] = 1ull << i;
  for (auto [lo, hi] : covers) {
    if (lo < 0 || lo >= n || hi < 0 || hi >= n || lo == hi)
      throw std::runtime_error("cover out of range");
    up[static_cast<std::size_t>(lo)] |= 1ull << hi;
  }
  // reflexive-transitive closure
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (std::uint64_t t = up[static_cast<std::size_t>(i)]; t; t &= t - 1) {
        int j = std::countr_zero(t);
        std::uint64_t merged = up[static_cast<std::size_t>(i)] | up[static_cast<std::size_t>(j)];
        if (merged != up[static_cast<std::size_t>(i)]) {
          up[static_cast<std::size_t>(i)] = merged;
          changed = true;
        }
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && (up[static_cast<std::size_t>(i)] >> j & 1) &&
          (up[static_cast<std::size_t>(j)] >> i & 1))
        throw std::runtime_error("cycle detected in cover relation");

  std::vector<std::uint64_t> down(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (std::uint64_t t = up[static_cast<std::size_t>(i)]; t; t &= t - 1)
      down[static_cast<std::size_t>(std::countr_zero(t))] |= 1ull << i;

  std::vector<int> join(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::uint64_t ub = up[static_cast<std::size_t>(i)] & up[static_cast<std::size_t>(j)];
      if (ub == 0)
        throw std::runtime_error("elements '" + names[static_cast<std::size_t>(i)] +
                                 "' and '" + names[static_cast<std::size_t>(j)] +
                                 "' have no join");
      int least = -1;
      for (std::uint64_t t = ub; t; t &= t - 1) {
        int k = std::countr_zero(t);
        if ((ub & ~up[static_cast<std::size_t>(k)]) == 0) {
          least = k;
          break;
        }
      }
      if (least < 0)
        throw std::runtime_error("elements '" + names[static_cast<std::size_t>(i)] +
                                 "' and '" + names[static_cast<std::size_t>(j)] +
                                 "' have incomparable minimal upper bounds");
      join[static_cast<std::size_t>(i) * n + j] = least;
    }

  // meet of two elements of [base) within that upset
  auto upset_meet = [&](int x, int y, int base) {
    std::uint64_t lower = down[static_cast<std::size_t>(x)] &
                          down[static_cast<std::size_t>(y)] &
                          up[static_cast<std::size_t>(base)];
    for (std::uint64_t t = lower; t; t &= t - 1) {
      int k = std::countr_zero(t);
      if ((lower & ~down[static_cast<std::size_t>(k)]) == 0) return k;
    }
    return -1;
  };

  for (int base = 0; base < n; ++base) {
    std::uint64_t u = up[static_cast<std::size_t>(base)];
    for (std::uint64_t tx = u; tx; tx &= tx - 1) {
      int x = std::countr_zero(tx);
      for (std::uint64_t ty = u; ty; ty &= ty - 1) {
        int y = std::countr_zero(ty);
        if (upset_meet(x, y, base) < 0)
          throw std::runtime_error("upset of '" + names[static_cast<std::size_t>(base)] +
                                   "' is not a lattice: '" +
                                   names[static_cast<std::size_t>(x)] + "' and '" +
                                   names[static_cast<std::size_t>(y)] +
                                   "' have no meet in it");
      }
    }
  }

  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int base = 0; base < n; ++base) {
        int jx = join[static_cast<std::size_t>(x) * n + base];
        int jy = join[static_cast<std::size_t>(y) * n + base];
        int v = upset_meet(jx, jy, base);
        if (v < 0) throw std::logic_error("upset meet vanished after validation");
        table[(static_cast<std::size_t>(x) * n + y) * n + base] =
            static_cast<std::uint8_t>(v);
      }
  return FiniteAlgebra(n, std::move(table), names, std::move(constants),
                       std::move(box));
}

int eval_term(const FiniteAlgebra& a, const TermPtr& t, const std::vector<int>& asg) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      int v = t->var_index();
      if (v >= static_cast<int>(asg.size()) || asg[static_cast<std::size_t>(v)] < 0)
        throw EvalError("variable x" + std::to_string(v) + " is unassigned");
      return asg[static_cast<std::size_t>(v)];
    }
    case Term::Kind::Const: {
      auto it = a.constants().find(t->const_name());
      if (it == a.constants().end())
        throw EvalError("constant '" + t->const_name() + "' is not declared");
      return it->second;
    }
    case Term::Kind::M:
      return a.m(eval_term(a, t->child(0), asg), eval_term(a, t->child(1), asg),
                 eval_term(a, t->child(2), asg));
    case Term::Kind::Box:
      if (!a.has_box()) throw EvalError("algebra has no box operation");
      return a.box(eval_term(a, t->child(0), asg));
  }
  throw EvalError("malformed term");
}

int mn_eval(const FiniteAlgebra& a, const std::vector<int>& args, int b) {
  if (args.empty()) throw std::invalid_argument("mn_eval: empty argument list");
  int acc = a.m(args[0], args[0], b);
  for (std::size_t i = 1; i < args.size(); ++i) acc = a.m(acc, args[i], b);

  int meets = a.join(args[0], b);
  for (std::size_t i = 1; i < args.size(); ++i) {
    meets = a.meet(meets, a.join(args[i], b));
    if (meets < 0) throw std::logic_error("mn_eval: join lost its lower bound");
  }
  if (acc != meets)
    throw std::logic_error("mn_eval: recursion disagrees with meet-of-joins form");
  return acc;
}

std::vector<std::vector<int>> find_homomorphisms(const FiniteAlgebra& a,
                                                 const FiniteAlgebra& b) {
  const int na = a.size(), nb = b.size();
  double space = std::pow(static_cast<double>(nb), static_cast<double>(na));
  if (space > 5e7)
    throw std::invalid_argument("homomorphism search space exceeds the guard");
  if (a.has_box() != b.has_box())
    throw std::invalid_argument("box mismatch between source and target");
  std::vector<std::pair<int, int>> forced;  // (source index, target index)
  for (auto& [name, idx] : a.constants()) {
    auto it = b.constants().find(name);
    if (it == b.constants().end())
      throw std::invalid_argument("target lacks constant '" + name + "'");
    forced.emplace_back(idx, it->second);
  }

  std::vector<std::vector<int>> out;
  std::vector<int> h(static_cast<std::size_t>(na), 0);
  for (;;) {
    bool ok = true;
    for (auto [src, dst] : forced)
      if (h[static_cast<std::size_t>(src)] != dst) {
        ok = false;
        break;
      }
    if (ok) {
      for (int i = 0; i < na && ok; ++i)
        for (int j = 0; j < na && ok; ++j)
          for (int k = 0; k < na; ++k)
            if (h[static_cast<std::size_t>(a.m(i, j, k))] !=
                b.m(h[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(j)],
                    h[static_cast<std::size_t>(k)])) {
              ok = false;
              break;
            }
      if (ok && a.has_box())
        for (int i = 0; i < na; ++i)
          if (h[static_cast<std::size_t>(a.box(i))] !=
              b.box(h[static_cast<std::size_t>(i)])) {
            ok = false;
            break;
          }
      if (ok) out.push_back(h);
    }
    int pos = na - 1;
    while (pos >= 0 && h[static_cast<std::size_t>(pos)] == nb - 1) {
      h[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++h[static_cast<std::size_t>(pos)];
  }
  return out;
}

AlgebraClass::AlgebraClass(std::vector<FiniteAlgebra> members,
                           std::vector<std::string> labels, ClassLaws laws)
    : members_(std::move(members)), labels_(std::move(labels)) {
  if (members_.empty()) throw std::invalid_argument("empty algebra class");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < members_.size(); ++i)
      labels_.push_back("A" + std::to_string(i));
  }
  if (labels_.size() != members_.size())
    throw std::invalid_argument("label list has wrong length");
  if (laws == ClassLaws::Unchecked) return;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    auto near = check_nearlattice(members_[i]);
    if (!near.ok)
      throw std::invalid_argument("class member '" + labels_[i] +
                                  "' is not a nearlattice (" + near.witness->law +
                                  " fails)");
    if (laws == ClassLaws::Nearlattice) continue;
    auto dist = check_distributive(members_[i]);
    if (!dist.ok)
      throw std::invalid_argument("class member '" + labels_[i] +
                                  "' is not distributive (" + dist.witness->law +
                                  " fails)");
  }
}

Signature AlgebraClass::signature() const {
  Signature sig;
  for (const auto& m : members_) sig = Signature::merged(sig, m.signature());
  return sig;
}

}  // namespace nearlat
