#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nearlat/algebra.hpp"
#include "nearlat/consequence.hpp"
#include "nearlat/term.hpp"

using namespace nearlat;

namespace {

// Nonempty subsets of a k-set under union; every pair of upper bounds has
// intersections available, so m(x,y,a) = (x|a)&(y|a) lands in the carrier.
FiniteAlgebra boolean_upper(int k) {
  const int n = (1 << k) - 1;
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) {
        int v = (((i + 1) | (a + 1)) & ((j + 1) | (a + 1))) - 1;
        table[(static_cast<std::size_t>(i) * n + j) * n + a] =
            static_cast<std::uint8_t>(v);
      }
  return FiniteAlgebra(n, std::move(table));
}

double time_ms(const std::function<void()>& f) {
  double best = 1e18;
  for (int rep = 0; rep < 3; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    if (ms < best) best = ms;
  }
  return best;
}

void row(const char* name, const std::function<bool(Exec)>& run) {
  bool serial_ok = false, parallel_ok = false;
  double s = time_ms([&] { serial_ok = run(Exec::Serial); });
  double p = time_ms([&] { parallel_ok = run(Exec::Parallel); });
  std::printf("  %-22s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx   %s\n",
              name, s, p, p > 0 ? s / p : 0.0,
              serial_ok == parallel_ok ? "agree" : "DISAGREE");
}

void bench_algebra(int k) {
  FiniteAlgebra a = boolean_upper(k);
  std::printf("boolean upper semilattice, %d elements\n", a.size());
  row("check_nearlattice",
      [&](Exec e) { return check_nearlattice(a, e).ok; });
  row("check_distributive",
      [&](Exec e) { return check_distributive(a, e).ok; });

  AlgebraClass cls({a}, {"bool" + std::to_string(a.size())});
  TermPtr x0 = Term::var(0), x1 = Term::var(1), x2 = Term::var(2),
          x3 = Term::var(3);
  TermPtr big = Term::join(Term::join(Term::join(x0, x1), x2), x3);
  ConsequenceQuery q{{x0, x1, x2, x3}, big, Mode::Plain};
  row("consequence (4 vars)",
      [&](Exec e) { return consequence(q, cls, e).holds; });
  TermPtr lhs = Term::m(x0, x1, Term::join(x2, x3));
  TermPtr rhs = Term::m(x1, x0, Term::join(x3, x2));
  row("equivalence (4 vars)",
      [&](Exec e) { return equivalent_in_class(lhs, rhs, cls, e).equal; });
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both columns run serially\n");
#endif
  bench_algebra(4);
  bench_algebra(5);
  return 0;
}
