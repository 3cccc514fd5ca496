#include "nearlat/filters.hpp"

#include <bit>
#include <stdexcept>

namespace nearlat {

namespace {

bool filter_by_definition(const FiniteAlgebra& a, std::uint64_t s) {
  if (s == 0) return false;
  for (std::uint64_t t = s; t; t &= t - 1) {
    int x = std::countr_zero(t);
    if (a.upset(x) & ~s) return false;
  }
  for (std::uint64_t tx = s; tx; tx &= tx - 1) {
    int x = std::countr_zero(tx);
    for (std::uint64_t ty = s; ty; ty &= ty - 1) {
      int y = std::countr_zero(ty);
      int g = a.meet(x, y);
      if (g >= 0 && !(s >> g & 1)) return false;
    }
  }
  return true;
}

bool filter_by_closure_criterion(const FiniteAlgebra& a, std::uint64_t s) {
  if (s == 0) return false;
  const int n = a.size();
  for (std::uint64_t tx = s; tx; tx &= tx - 1) {
    int x = std::countr_zero(tx);
    for (std::uint64_t ty = s; ty; ty &= ty - 1) {
      int y = std::countr_zero(ty);
      for (int c = 0; c < n; ++c)
        if (!(s >> a.m(x, y, c) & 1)) return false;
    }
  }
  return true;
}

// Least filter containing x: alternate up-closure and existing-meet closure
// to a fixpoint.
std::uint64_t filter_fixpoint(const FiniteAlgebra& a, std::uint64_t x) {
  std::uint64_t s = x;
  for (;;) {
    std::uint64_t before = s;
    s = up_closure(a, s);
    for (std::uint64_t tx = s; tx; tx &= tx - 1) {
      int i = std::countr_zero(tx);
      for (std::uint64_t ty = s; ty; ty &= ty - 1) {
        int j = std::countr_zero(ty);
        int g = a.meet(i, j);
        if (g >= 0) s |= 1ull << g;
      }
    }
    if (s == before) return s;
  }
}

// Greatest lower bound of the subset s, or -1 when s has none.
int subset_inf(const FiniteAlgebra& a, std::uint64_t s) {
  std::uint64_t lower = ~0ull;
  for (std::uint64_t t = s; t; t &= t - 1)
    lower &= a.downset(std::countr_zero(t));
  lower &= a.universe_mask();
  for (std::uint64_t t = lower; t; t &= t - 1) {
    int g = std::countr_zero(t);
    if ((lower & ~a.downset(g)) == 0) return g;
  }
  return -1;
}

}  // namespace

std::uint64_t up_closure(const FiniteAlgebra& a, std::uint64_t s) {
  std::uint64_t out = 0;
  for (std::uint64_t t = s; t; t &= t - 1) out |= a.upset(std::countr_zero(t));
  return out;
}

bool is_filter(const FiniteAlgebra& a, std::uint64_t s) {
  bool def = filter_by_definition(a, s);
  bool crit = filter_by_closure_criterion(a, s);
  if (def != crit)
    throw std::logic_error(
        "filter definition and closure criterion disagree on " +
        subset_to_string(a, s));
  return def;
}

std::uint64_t generated_filter(const FiniteAlgebra& a, std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("generated_filter: empty generating set");
  std::uint64_t up = up_closure(a, x);
  std::uint64_t fix = filter_fixpoint(a, x);

  std::uint64_t result;
  if (std::popcount(up) <= 16) {
    // every element expressible as the infimum of a subset of the up-closure
    result = 0;
    std::vector<int> members;
    for (std::uint64_t t = up; t; t &= t - 1) members.push_back(std::countr_zero(t));
    std::uint64_t count = 1ull << members.size();
    for (std::uint64_t pick = 1; pick < count; ++pick) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < members.size(); ++i)
        if (pick >> i & 1) s |= 1ull << members[i];
      int g = subset_inf(a, s);
      if (g >= 0) result |= 1ull << g;
    }
    if (result != fix)
      throw std::logic_error("generated_filter: meet characterization and "
                             "closure fixpoint disagree");
  } else {
    result = fix;
  }

  if (a.size() <= 16) {
    std::uint64_t meet_of_all = a.universe_mask();
    std::uint64_t subsets = 1ull << a.size();
    for (std::uint64_t s = 1; s < subsets; ++s)
      if ((x & ~s) == 0 && filter_by_definition(a, s)) meet_of_all &= s;
    if (meet_of_all != result)
      throw std::logic_error("generated_filter: intersection-of-filters oracle "
                             "disagrees");
  }
  return result;
}

std::vector<std::uint64_t> all_filters(const FiniteAlgebra& a) {
  if (a.size() > 20) throw std::invalid_argument("all_filters: size guard exceeded");
  std::vector<std::uint64_t> out;
  std::uint64_t subsets = 1ull << a.size();
  for (std::uint64_t s = 1; s < subsets; ++s)
    if (filter_by_definition(a, s)) out.push_back(s);
  return out;
}

std::uint64_t lu_closure(const FiniteAlgebra& a, std::uint64_t x) {
  std::uint64_t lower = a.universe_mask();
  for (std::uint64_t t = x; t; t &= t - 1)
    lower &= a.downset(std::countr_zero(t));
  std::uint64_t upper = a.universe_mask();
  for (std::uint64_t t = lower; t; t &= t - 1)
    upper &= a.upset(std::countr_zero(t));
  return upper;
}

bool is_frink_filter(const FiniteAlgebra& a, std::uint64_t s) {
  // Whole-carrier check: lu is monotone, so lu(s) within s settles every
  // subset at once.
  bool whole = (lu_closure(a, s) & ~s) == 0;

  bool small = (lu_closure(a, 0) & ~s) == 0;
  std::vector<int> members;
  for (std::uint64_t t = s; t; t &= t - 1) members.push_back(std::countr_zero(t));
  const std::size_t k = members.size();
  for (std::size_t i = 0; i < k && small; ++i) {
    std::uint64_t xi = 1ull << members[i];
    if (lu_closure(a, xi) & ~s) small = false;
    for (std::size_t j = i + 1; j < k && small; ++j) {
      std::uint64_t xj = xi | 1ull << members[j];
      if (lu_closure(a, xj) & ~s) small = false;
      for (std::size_t l = j + 1; l < k && small; ++l)
        if (lu_closure(a, xj | 1ull << members[l]) & ~s) small = false;
    }
  }

  if (whole != small)
    throw std::logic_error(
        "Frink condition: size-3 subset check and whole-carrier check "
        "disagree on " + subset_to_string(a, s));
  return whole;
}

std::vector<std::uint64_t> all_frink_filters(const FiniteAlgebra& a) {
  if (a.size() > 20)
    throw std::invalid_argument("all_frink_filters: size guard exceeded");
  std::vector<std::uint64_t> out;
  std::uint64_t subsets = 1ull << a.size();
  for (std::uint64_t s = 0; s < subsets; ++s)
    if ((lu_closure(a, s) & ~s) == 0) out.push_back(s);
  for (auto s : out)
    if (!is_frink_filter(a, s))
      throw std::logic_error("all_frink_filters: member fails the subset route");
  if (out.empty() || out.back() != a.universe_mask())
    throw std::logic_error("all_frink_filters: family lacks the universe");
  for (auto f : out)
    for (auto g : out) {
      std::uint64_t both = f & g;
      if ((lu_closure(a, both) & ~both) != 0)
        throw std::logic_error("all_frink_filters: family is not "
                               "intersection-closed");
    }
  return out;
}

bool frink_lattice_is_distributive(const FiniteAlgebra& a) {
  auto family = all_frink_filters(a);
  auto join_of = [&](std::uint64_t f, std::uint64_t g) {
    std::uint64_t acc = a.universe_mask();
    for (auto h : family)
      if ((f & ~h) == 0 && (g & ~h) == 0) acc &= h;
    return acc;
  };
  for (auto f : family)
    for (auto g : family)
      for (auto h : family) {
        std::uint64_t lhs = f & join_of(g, h);
        std::uint64_t rhs = join_of(f & g, f & h);
        if (lhs != rhs) return false;
      }
  return true;
}

std::string subset_to_string(const FiniteAlgebra& a, std::uint64_t s) {
  std::string out = "{";
  bool first = true;
  for (std::uint64_t t = s; t; t &= t - 1) {
    if (!first) out += ",";
    first = false;
    out += a.names()[static_cast<std::size_t>(std::countr_zero(t))];
  }
  out += "}";
  return out;
}

}  // namespace nearlat
