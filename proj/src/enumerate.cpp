#include "nearlat/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nearlat/congruences.hpp"
#include "nearlat/modal.hpp"

namespace nearlat {

namespace {

struct RelabeledTables {
  std::vector<std::uint8_t> table;
  std::vector<std::uint8_t> box;    // empty when the algebra has no box
  std::vector<int> constant_idx;    // constant bindings in name order

  bool operator<(const RelabeledTables& o) const {
    if (table != o.table) return table < o.table;
    if (box != o.box) return box < o.box;
    return constant_idx < o.constant_idx;
  }
};

RelabeledTables apply_relabeling(const FiniteAlgebra& a,
                                 const std::vector<int>& sigma) {
  const int n = a.size();
  RelabeledTables out;
  out.table.assign(static_cast<std::size_t>(n) * n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::size_t at = (static_cast<std::size_t>(sigma[i]) * n + sigma[j]) * n +
                         sigma[k];
        out.table[at] = static_cast<std::uint8_t>(sigma[a.m(i, j, k)]);
      }
  if (a.has_box()) {
    out.box.assign(n, 0);
    for (int i = 0; i < n; ++i)
      out.box[static_cast<std::size_t>(sigma[i])] =
          static_cast<std::uint8_t>(sigma[a.box(i)]);
  }
  for (const auto& [name, idx] : a.constants()) out.constant_idx.push_back(sigma[idx]);
  return out;
}

}  // namespace

std::vector<int> canonical_relabeling(const FiniteAlgebra& a) {
  const int n = a.size();
  // Elements sharing (|downset|, |upset|) can trade places under an
  // isomorphism; elements with different profiles cannot. Searching only
  // the profile-respecting permutations therefore reaches the same minimum.
  std::vector<std::pair<int, int>> profile(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    profile[static_cast<std::size_t>(i)] = {std::popcount(a.downset(i)),
                                            std::popcount(a.upset(i))};
  std::vector<std::pair<int, int>> keys(profile.begin(), profile.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<std::vector<int>> classes;
  std::vector<int> offsets;
  int offset = 0;
  for (const auto& key : keys) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (profile[static_cast<std::size_t>(i)] == key) members.push_back(i);
    offsets.push_back(offset);
    offset += static_cast<int>(members.size());
    classes.push_back(std::move(members));
  }

  std::vector<std::vector<int>> orderings = classes;
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::optional<RelabeledTables> best;
  std::vector<int> best_sigma;
  for (;;) {
    for (std::size_t c = 0; c < orderings.size(); ++c)
      for (std::size_t t = 0; t < orderings[c].size(); ++t)
        sigma[static_cast<std::size_t>(orderings[c][t])] =
            offsets[c] + static_cast<int>(t);
    RelabeledTables cand = apply_relabeling(a, sigma);
    if (!best || cand < *best) {
      best = std::move(cand);
      best_sigma = sigma;
    }
    std::size_t c = orderings.size();
    while (c > 0 && !std::next_permutation(orderings[c - 1].begin(),
                                           orderings[c - 1].end()))
      --c;
    if (c == 0) break;
  }
  return best_sigma;
}

FiniteAlgebra canonical_form(const FiniteAlgebra& a) {
  const int n = a.size();
  std::vector<int> sigma = canonical_relabeling(a);
  RelabeledTables t = apply_relabeling(a, sigma);
  std::map<std::string, int> constants;
  for (const auto& [name, idx] : a.constants()) constants[name] = sigma[idx];
  std::optional<std::vector<std::uint8_t>> box;
  if (a.has_box()) box = t.box;
  return FiniteAlgebra(n, std::move(t.table), {}, std::move(constants),
                       std::move(box));
}

std::string canonical_key(const FiniteAlgebra& a) {
  FiniteAlgebra c = canonical_form(a);
  std::string key = "n" + std::to_string(c.size()) + ";m";
  for (std::uint8_t v : c.table()) {
    key += std::to_string(static_cast<int>(v));
    key += ',';
  }
  if (c.has_box()) {
    key += ";b";
    for (std::uint8_t v : c.box_table()) {
      key += std::to_string(static_cast<int>(v));
      key += ',';
    }
  }
  for (const auto& [name, idx] : c.constants())
    key += ";" + name + "=" + std::to_string(idx);
  return key;
}

namespace {

// Least element of mask under the order given by the up masks, or -1.
int least_of(std::uint64_t mask, const std::vector<std::uint64_t>& up) {
  for (std::uint64_t rest = mask; rest;) {
    int i = std::countr_zero(rest);
    rest &= rest - 1;
    if ((mask & ~up[static_cast<std::size_t>(i)]) == 0) return i;
  }
  return -1;
}

int greatest_of(std::uint64_t mask, const std::vector<std::uint64_t>& down) {
  for (std::uint64_t rest = mask; rest;) {
    int i = std::countr_zero(rest);
    rest &= rest - 1;
    if ((mask & ~down[static_cast<std::size_t>(i)]) == 0) return i;
  }
  return -1;
}

// After adding element k with strict downset D, reject the branch when some
// pair inside D acquired incomparable minimal upper bounds or some upset
// gained a pair without a meet. Elements only ever arrive as new maxima, so
// both defects are permanent.
bool extension_viable(int k, std::uint64_t d,
                      const std::vector<std::uint64_t>& down,
                      const std::vector<std::uint64_t>& up) {
  for (std::uint64_t di = d; di;) {
    int i = std::countr_zero(di);
    di &= di - 1;
    for (std::uint64_t dj = di; dj;) {
      int j = std::countr_zero(dj);
      dj &= dj - 1;
      std::uint64_t ub = up[static_cast<std::size_t>(i)] &
                         up[static_cast<std::size_t>(j)];
      if (ub && least_of(ub, up) < 0) return false;
    }
  }
  for (std::uint64_t da = d; da;) {
    int a = std::countr_zero(da);
    da &= da - 1;
    std::uint64_t ups = up[static_cast<std::size_t>(a)];
    for (std::uint64_t dx = ups & ~(1ull << k); dx;) {
      int x = std::countr_zero(dx);
      dx &= dx - 1;
      std::uint64_t lower = down[static_cast<std::size_t>(x)] &
                            down[static_cast<std::size_t>(k)] & ups;
      if (greatest_of(lower, down) < 0) return false;
    }
  }
  return true;
}

void gather_naturally_labeled(int n, std::vector<std::vector<std::uint64_t>>* out) {
  std::vector<std::uint64_t> down(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> up(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int k) -> void {
    if (k == n) {
      out->push_back(down);
      return;
    }
    const std::uint64_t pool = (1ull << k) - 1;
    const bool top_slot = (k == n - 1 && n > 1);
    for (std::uint64_t d = pool;; d = (d - 1) & pool) {
      bool usable = !top_slot || d == pool;
      if (usable)
        for (std::uint64_t dj = d; dj;) {
          int j = std::countr_zero(dj);
          dj &= dj - 1;
          if (down[static_cast<std::size_t>(j)] & ~d) {
            usable = false;
            break;
          }
        }
      if (usable) {
        down[static_cast<std::size_t>(k)] = d | (1ull << k);
        up[static_cast<std::size_t>(k)] = 1ull << k;
        for (std::uint64_t dj = d; dj;) {
          int j = std::countr_zero(dj);
          dj &= dj - 1;
          up[static_cast<std::size_t>(j)] |= 1ull << k;
        }
        if (extension_viable(k, d, down, up)) self(self, k + 1);
        for (std::uint64_t dj = d; dj;) {
          int j = std::countr_zero(dj);
          dj &= dj - 1;
          up[static_cast<std::size_t>(j)] &= ~(1ull << k);
        }
      }
      if (d == 0) break;
    }
  };
  rec(rec, 0);
}

std::vector<std::pair<int, int>> covers_of(const std::vector<std::uint64_t>& down) {
  const int n = static_cast<int>(down.size());
  std::vector<std::uint64_t> up(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j)
    for (std::uint64_t dj = down[static_cast<std::size_t>(j)]; dj;) {
      int i = std::countr_zero(dj);
      dj &= dj - 1;
      up[static_cast<std::size_t>(i)] |= 1ull << j;
    }
  std::vector<std::pair<int, int>> covers;
  for (int j = 0; j < n; ++j)
    for (std::uint64_t dj = down[static_cast<std::size_t>(j)] & ~(1ull << j); dj;) {
      int i = std::countr_zero(dj);
      dj &= dj - 1;
      std::uint64_t between = up[static_cast<std::size_t>(i)] &
                              down[static_cast<std::size_t>(j)] &
                              ~(1ull << i) & ~(1ull << j);
      if (between == 0) covers.emplace_back(i, j);
    }
  return covers;
}

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

std::optional<FiniteAlgebra> dn_from_order(const std::vector<std::uint64_t>& down) {
  const int n = static_cast<int>(down.size());
  std::optional<FiniteAlgebra> alg;
  try {
    alg = from_hasse(default_names(n), covers_of(down));
  } catch (const std::runtime_error&) {
    return std::nullopt;  // some pair had no join or some upset no meet
  }
  if (!check_nearlattice(*alg, Exec::Serial).ok)
    throw std::logic_error("enumerate_dn: synthesized table fails the laws");
  if (!check_distributive(*alg, Exec::Serial).ok) return std::nullopt;
  return canonical_form(*alg);
}

std::vector<FiniteAlgebra> dedup_sorted(
    const std::vector<std::optional<FiniteAlgebra>>& found) {
  std::vector<FiniteAlgebra> out;
  std::set<std::string> seen;
  for (const auto& alg : found) {
    if (!alg) continue;
    std::string key = canonical_key(*alg);
    if (seen.insert(std::move(key)).second) out.push_back(*alg);
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteAlgebra& x, const FiniteAlgebra& y) {
              if (x.size() != y.size()) return x.size() < y.size();
              if (x.table() != y.table()) return x.table() < y.table();
              if (x.has_box() != y.has_box()) return !x.has_box();
              if (x.has_box() && x.box_table() != y.box_table())
                return x.box_table() < y.box_table();
              return false;
            });
  return out;
}

}  // namespace

std::vector<FiniteAlgebra> enumerate_dn(int size, Exec exec) {
  if (size < 1 || size > 7)
    throw std::invalid_argument("enumerate_dn: size must be in 1..7");
  std::vector<std::vector<std::uint64_t>> posets;
  gather_naturally_labeled(size, &posets);

  std::vector<std::optional<FiniteAlgebra>> found(posets.size());
  if (exec == Exec::Parallel && posets.size() >= 16) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < static_cast<long long>(posets.size()); ++i)
      found[static_cast<std::size_t>(i)] =
          dn_from_order(posets[static_cast<std::size_t>(i)]);
  } else {
    for (std::size_t i = 0; i < posets.size(); ++i)
      found[i] = dn_from_order(posets[i]);
  }
  return dedup_sorted(found);
}

std::vector<FiniteAlgebra> enumerate_dn_upto(int max_size, Exec exec) {
  if (max_size < 1 || max_size > 7)
    throw std::invalid_argument("enumerate_dn_upto: size must be in 1..7");
  std::vector<FiniteAlgebra> out;
  for (int s = 1; s <= max_size; ++s) {
    std::vector<FiniteAlgebra> part = enumerate_dn(s, exec);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

namespace {

// Raw-table search state. Cells hold -1 until assigned; absorption cells
// m(x,y,x) are fixed up front and the rest are filled depth-first in table
// order. Identity instances prune a branch as soon as every cell they read
// is known and the two sides differ.
struct TableSearch {
  int n;
  std::vector<int> cell;
  std::vector<int> free_cells;
  std::vector<FiniteAlgebra> found;

  explicit TableSearch(int size) : n(size) {
    cell.assign(static_cast<std::size_t>(n) * n * n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cell[at(i, j, i)] = i;
    for (std::size_t c = 0; c < cell.size(); ++c)
      if (cell[c] < 0) free_cells.push_back(static_cast<int>(c));
  }

  std::size_t at(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  int look(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0) return -1;
    return cell[at(i, j, k)];
  }

  bool interchange_ok() const {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          int xyz = look(x, y, z);
          for (int u = 0; u < n; ++u) {
            int inner_l = look(y, look(u, x, z), z);
            int inner_r = look(y, look(x, u, z), z);
            // A violation needs both sides fully evaluated.
            if (xyz < 0 || inner_l < 0 || inner_r < 0) continue;
            for (int w = 0; w < n; ++w) {
              int lhs = look(xyz, inner_l, w);
              int rhs = look(w, w, inner_r);
              if (lhs >= 0 && rhs >= 0 && lhs != rhs) return false;
            }
          }
        }
    return true;
  }

  bool distribution_ok() const {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int xxy = look(x, x, y);
        for (int z = 0; z < n; ++z) {
          int yyz = look(y, y, z);
          int xxz = look(x, x, z);
          for (int w = 0; w < n; ++w) {
            if (yyz >= 0) {
              int lhs_mid = look(x, yyz, w);
              int xyw = look(x, y, w);
              if (lhs_mid >= 0 && xyw >= 0) {
                int rhs_mid = look(xyw, xyw, look(x, z, w));
                if (rhs_mid >= 0 && lhs_mid != rhs_mid) return false;
              }
            }
            if (xxy >= 0 && xxz >= 0) {
              int lhs_join = look(x, x, look(y, z, w));
              if (lhs_join >= 0) {
                int rhs_join = look(xxy, xxz, w);
                if (rhs_join >= 0 && lhs_join != rhs_join) return false;
              }
            }
          }
        }
      }
    return true;
  }

  bool consistent() const { return interchange_ok() && distribution_ok(); }

  void leaf() {
    std::vector<std::uint8_t> table(cell.size());
    for (std::size_t c = 0; c < cell.size(); ++c)
      table[c] = static_cast<std::uint8_t>(cell[c]);
    FiniteAlgebra alg(n, std::move(table));
    if (!check_nearlattice(alg, Exec::Serial).ok) return;
    if (!check_distributive(alg, Exec::Serial).ok) return;
    found.push_back(canonical_form(alg));
  }

  void run(std::size_t depth) {
    if (depth == free_cells.size()) {
      leaf();
      return;
    }
    std::size_t c = static_cast<std::size_t>(free_cells[depth]);
    for (int v = 0; v < n; ++v) {
      cell[c] = v;
      if (consistent()) run(depth + 1);
    }
    cell[c] = -1;
  }
};

}  // namespace

std::vector<FiniteAlgebra> enumerate_dn_by_tables(int size, Exec exec) {
  if (size < 1 || size > 4)
    throw std::invalid_argument("enumerate_dn_by_tables: size must be in 1..4");
  TableSearch root(size);
  if (root.free_cells.size() < 2 || exec == Exec::Serial) {
    root.run(0);
    std::vector<std::optional<FiniteAlgebra>> found(root.found.begin(),
                                                    root.found.end());
    return dedup_sorted(found);
  }

  const int n = size;
  std::vector<std::vector<FiniteAlgebra>> buckets(
      static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < n * n; ++t) {
    TableSearch local(size);
    local.cell[static_cast<std::size_t>(local.free_cells[0])] = t / n;
    local.cell[static_cast<std::size_t>(local.free_cells[1])] = t % n;
    if (local.consistent()) local.run(2);
    buckets[static_cast<std::size_t>(t)] = std::move(local.found);
  }
  std::vector<std::optional<FiniteAlgebra>> found;
  for (const auto& bucket : buckets)
    for (const auto& alg : bucket) found.emplace_back(alg);
  return dedup_sorted(found);
}

std::vector<FiniteAlgebra> enumerate_modal(const std::vector<FiniteAlgebra>& base) {
  std::vector<std::optional<FiniteAlgebra>> found;
  for (const FiniteAlgebra& b : base) {
    if (!b.constants().count("top"))
      throw std::invalid_argument("enumerate_modal: member lacks a declared top");
    const int n = b.size();
    double space = 1;
    for (int i = 0; i < n; ++i) space *= n;
    if (space > 2e6)
      throw std::invalid_argument("enumerate_modal: box table space too large");

    std::vector<std::uint8_t> box(static_cast<std::size_t>(n), 0);
    for (;;) {
      FiniteAlgebra expanded = b.with_box(box);
      if (check_modal(expanded).ok)
        found.emplace_back(canonical_form(expanded));
      int d = n - 1;
      while (d >= 0 && box[static_cast<std::size_t>(d)] ==
                           static_cast<std::uint8_t>(n - 1)) {
        box[static_cast<std::size_t>(d)] = 0;
        --d;
      }
      if (d < 0) break;
      ++box[static_cast<std::size_t>(d)];
    }
  }
  return dedup_sorted(found);
}

bool class_closed_under_quotients(const AlgebraClass& cls) {
  std::set<std::string> member_keys;
  for (const FiniteAlgebra& m : cls.members()) member_keys.insert(canonical_key(m));
  for (const FiniteAlgebra& m : cls.members()) {
    for (const Partition& theta : all_congruences(m)) {
      FiniteAlgebra q = quotient(m, theta);
      if (!member_keys.count(canonical_key(q))) return false;
    }
  }
  return true;
}

}  // namespace nearlat
