#include "nearlat/congruences.hpp"

#include "nearlat/filters.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nearlat {

namespace {

void validate_partition(const FiniteAlgebra& a, const Partition& p) {
  if (p.size() != static_cast<std::size_t>(a.size()))
    throw std::invalid_argument("partition does not cover the universe");
  int max_id = -1;
  for (int id : p) {
    if (id < 0 || id > max_id + 1)
      throw std::invalid_argument("partition block ids are malformed");
    max_id = std::max(max_id, id);
  }
}

bool compatible_with_m(const FiniteAlgebra& a, const Partition& p) {
  const int n = a.size();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      if (p[static_cast<std::size_t>(x)] != p[static_cast<std::size_t>(y)]) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (p[static_cast<std::size_t>(a.m(x, c, d))] !=
              p[static_cast<std::size_t>(a.m(y, c, d))])
            return false;
          if (p[static_cast<std::size_t>(a.m(c, x, d))] !=
              p[static_cast<std::size_t>(a.m(c, y, d))])
            return false;
          if (p[static_cast<std::size_t>(a.m(c, d, x))] !=
              p[static_cast<std::size_t>(a.m(c, d, y))])
            return false;
        }
      if (a.has_box() &&
          p[static_cast<std::size_t>(a.box(x))] != p[static_cast<std::size_t>(a.box(y))])
        return false;
    }
  return true;
}

// Join/existing-meet criterion: related pairs have related joins, and
// related meets whenever both meets exist.
bool compatible_by_join_meet(const FiniteAlgebra& a, const Partition& p) {
  const int n = a.size();
  std::vector<std::pair<int, int>> rel;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (p[static_cast<std::size_t>(x)] == p[static_cast<std::size_t>(y)])
        rel.emplace_back(x, y);
  for (auto [x, y] : rel)
    for (auto [c, d] : rel) {
      if (p[static_cast<std::size_t>(a.join(x, c))] !=
          p[static_cast<std::size_t>(a.join(y, d))])
        return false;
      int mx = a.meet(x, c), my = a.meet(y, d);
      if (mx >= 0 && my >= 0 &&
          p[static_cast<std::size_t>(mx)] != p[static_cast<std::size_t>(my)])
        return false;
    }
  if (a.has_box())
    for (auto [x, y] : rel)
      if (p[static_cast<std::size_t>(a.box(x))] != p[static_cast<std::size_t>(a.box(y))])
        return false;
  return true;
}

bool is_congruence_checked(const FiniteAlgebra& a, const Partition& p,
                           bool run_join_meet) {
  bool slotwise = compatible_with_m(a, p);
  if (run_join_meet) {
    bool criterion = compatible_by_join_meet(a, p);
    if (slotwise != criterion)
      throw std::logic_error(
          "congruence slotwise check and join/meet criterion disagree on " +
          partition_to_string(a, p));
  }
  return slotwise;
}

}  // namespace

Partition canonical_partition(const Partition& p) {
  Partition out(p.size());
  std::map<int, int> relabel;
  int next = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [it, fresh] = relabel.emplace(p[i], next);
    if (fresh) ++next;
    out[i] = it->second;
  }
  return out;
}

Partition identity_partition(int n) {
  Partition p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Partition total_partition(int n) {
  return Partition(static_cast<std::size_t>(n), 0);
}

std::vector<std::uint64_t> blocks_of(const Partition& p) {
  int nblocks = p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
  std::vector<std::uint64_t> out(static_cast<std::size_t>(nblocks), 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    out[static_cast<std::size_t>(p[i])] |= 1ull << i;
  return out;
}

std::string partition_to_string(const FiniteAlgebra& a, const Partition& p) {
  std::string out = "{";
  auto blocks = blocks_of(p);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out += ",";
    out += "{";
    bool first = true;
    for (std::uint64_t t = blocks[b]; t; t &= t - 1) {
      if (!first) out += ",";
      first = false;
      out += a.names()[static_cast<std::size_t>(std::countr_zero(t))];
    }
    out += "}";
  }
  out += "}";
  return out;
}

bool refines(const Partition& p, const Partition& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("refines: partition sizes differ");
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] == p[j] && q[i] != q[j]) return false;
  return true;
}

Partition join_partitions(const Partition& p, const Partition& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("join_partitions: partition sizes differ");
  std::vector<int> parent(p.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int x, int y) {
    parent[static_cast<std::size_t>(find(x))] = find(y);
  };
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] == p[j] || q[i] == q[j])
        unite(static_cast<int>(i), static_cast<int>(j));
  Partition out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = find(static_cast<int>(i));
  return canonical_partition(out);
}

bool is_congruence(const FiniteAlgebra& a, const Partition& p) {
  validate_partition(a, p);
  bool run_criterion =
      check_nearlattice(a).ok && check_distributive(a).ok;
  return is_congruence_checked(a, p, run_criterion);
}

std::vector<Partition> all_congruences(const FiniteAlgebra& a) {
  const int n = a.size();
  if (n > 12) throw std::invalid_argument("all_congruences: size guard exceeded");
  bool distributive = check_nearlattice(a).ok && check_distributive(a).ok;
  std::vector<Partition> out;
  Partition p(static_cast<std::size_t>(n), 0);
  // restricted-growth enumeration: p[i] <= 1 + max(p[0..i-1])
  for (;;) {
    if (is_congruence_checked(a, p, distributive)) out.push_back(p);
    int i = n - 1;
    for (; i > 0; --i) {
      int cap = 0;
      for (int j = 0; j < i; ++j) cap = std::max(cap, p[static_cast<std::size_t>(j)]);
      if (p[static_cast<std::size_t>(i)] <= cap) break;
    }
    if (i == 0) break;
    ++p[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) p[static_cast<std::size_t>(j)] = 0;
  }
  return out;
}

GMatrix::GMatrix(FiniteAlgebra algebra, std::vector<std::uint64_t> closed_sets)
    : algebra_(std::move(algebra)), closed_(std::move(closed_sets)) {
  std::sort(closed_.begin(), closed_.end());
  closed_.erase(std::unique(closed_.begin(), closed_.end()), closed_.end());
  for (auto s : closed_)
    if (s & ~algebra_.universe_mask())
      throw std::invalid_argument("closed set leaves the universe");
  if (closed_.empty() || closed_.back() != algebra_.universe_mask())
    throw std::invalid_argument("closure system must contain the universe");
  for (auto s : closed_)
    for (auto t : closed_)
      if (std::find(closed_.begin(), closed_.end(), s & t) == closed_.end())
        throw std::invalid_argument("closure system is not intersection-closed");
}

std::uint64_t GMatrix::closure_of(std::uint64_t x) const {
  std::uint64_t acc = algebra_.universe_mask();
  for (auto s : closed_)
    if ((x & ~s) == 0) acc &= s;
  return acc;
}

Partition frege_relation(const GMatrix& g) {
  const int n = g.algebra().size();
  std::vector<std::uint64_t> closures(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    closures[static_cast<std::size_t>(i)] = g.closure_of(1ull << i);
  Partition p(static_cast<std::size_t>(n));
  std::map<std::uint64_t, int> seen;
  int next = 0;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = seen.emplace(closures[static_cast<std::size_t>(i)], next);
    if (fresh) ++next;
    p[static_cast<std::size_t>(i)] = it->second;
  }
  return p;
}

Partition tarski_congruence(const GMatrix& g) {
  Partition frege = frege_relation(g);
  const auto& a = g.algebra();
  Partition best = identity_partition(a.size());
  for (const auto& theta : all_congruences(a))
    if (refines(theta, frege)) best = join_partitions(best, theta);
  if (!is_congruence(a, best) || !refines(best, frege))
    throw std::logic_error("join of congruences below the Frege relation is "
                           "not itself one");
  return best;
}

Partition leibniz_congruence(const FiniteAlgebra& a, std::uint64_t f) {
  auto compatible = [&](const Partition& p) {
    for (auto block : blocks_of(p))
      if ((block & f) != 0 && (block & ~f & a.universe_mask()) != 0) return false;
    return true;
  };
  Partition best = identity_partition(a.size());
  for (const auto& theta : all_congruences(a))
    if (compatible(theta)) best = join_partitions(best, theta);
  if (!is_congruence(a, best) || !compatible(best))
    throw std::logic_error("join of compatible congruences is not compatible");
  return best;
}

FiniteAlgebra quotient(const FiniteAlgebra& a, const Partition& theta) {
  validate_partition(a, theta);
  if (!is_congruence(a, theta))
    throw std::invalid_argument("quotient: relation is not a congruence");
  auto blocks = blocks_of(theta);
  const int q = static_cast<int>(blocks.size());
  std::vector<int> rep(static_cast<std::size_t>(q));
  std::vector<std::string> names(static_cast<std::size_t>(q));
  for (int b = 0; b < q; ++b) {
    rep[static_cast<std::size_t>(b)] = std::countr_zero(blocks[static_cast<std::size_t>(b)]);
    names[static_cast<std::size_t>(b)] =
        a.names()[static_cast<std::size_t>(rep[static_cast<std::size_t>(b)])];
  }
  std::vector<std::uint8_t> table(static_cast<std::size_t>(q) * q * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k)
        table[(static_cast<std::size_t>(i) * q + j) * q + k] =
            static_cast<std::uint8_t>(theta[static_cast<std::size_t>(
                a.m(rep[static_cast<std::size_t>(i)], rep[static_cast<std::size_t>(j)],
                    rep[static_cast<std::size_t>(k)]))]);
  std::map<std::string, int> constants;
  for (const auto& [name, idx] : a.constants())
    constants[name] = theta[static_cast<std::size_t>(idx)];
  std::optional<std::vector<std::uint8_t>> box;
  if (a.has_box()) {
    box.emplace(static_cast<std::size_t>(q));
    for (int b = 0; b < q; ++b)
      (*box)[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(
          theta[static_cast<std::size_t>(a.box(rep[static_cast<std::size_t>(b)]))]);
  }
  FiniteAlgebra quot(q, std::move(table), std::move(names), std::move(constants),
                     std::move(box));
  // the natural map must be a homomorphism; spot-check every input triple
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      for (int k = 0; k < a.size(); ++k)
        if (theta[static_cast<std::size_t>(a.m(i, j, k))] !=
            quot.m(theta[static_cast<std::size_t>(i)], theta[static_cast<std::size_t>(j)],
                   theta[static_cast<std::size_t>(k)]))
          throw std::logic_error("quotient: natural map fails to preserve m");
  if (a.has_box())
    for (int i = 0; i < a.size(); ++i)
      if (theta[static_cast<std::size_t>(a.box(i))] !=
          quot.box(theta[static_cast<std::size_t>(i)]))
        throw std::logic_error("quotient: natural map fails to preserve box");
  return quot;
}

PointRegularityResult is_point_regular(const AlgebraClass& cls) {
  for (std::size_t i = 0; i < cls.count(); ++i) {
    const auto& a = cls.member(i);
    auto top_it = a.constants().find("top");
    if (top_it == a.constants().end())
      throw std::invalid_argument("is_point_regular: member '" + cls.label(i) +
                                  "' has no declared top");
    int top = top_it->second;
    auto cons = all_congruences(a);
    std::map<std::uint64_t, Partition> by_top_block;
    for (const auto& theta : cons) {
      std::uint64_t block = blocks_of(theta)[static_cast<std::size_t>(
          theta[static_cast<std::size_t>(top)])];
      auto [it, fresh] = by_top_block.emplace(block, theta);
      if (!fresh && it->second != theta)
        return {false, "member '" + cls.label(i) + "': congruences " +
                           partition_to_string(a, it->second) + " and " +
                           partition_to_string(a, theta) +
                           " share the top block " + subset_to_string(a, block)};
    }
  }
  return {true, ""};
}

}  // namespace nearlat
