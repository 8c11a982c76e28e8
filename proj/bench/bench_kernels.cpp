// Times the serial kernels against their OpenMP twins on synthetic workloads
// and checks that the outputs agree bit for bit. On one core the two should
// tie; the point of running this anyway is the equality column.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rsm/kernels.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double best_ms(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clock_type::now();
    body();
    auto t1 = clock_type::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

rsm::CompiledField make_field(std::size_t arity, std::size_t ncomp,
                              std::size_t terms, std::mt19937& rng) {
  rsm::CompiledField f;
  f.arity = arity;
  f.ncomp = ncomp;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<unsigned> power(0, 3);
  f.comp_begin.push_back(0);
  for (std::size_t c = 0; c < ncomp; ++c) {
    for (std::size_t t = 0; t < terms; ++t) {
      f.coef.push_back(coef(rng));
      for (std::size_t k = 0; k < arity; ++k) f.expo.push_back(power(rng));
    }
    f.comp_begin.push_back(f.coef.size());
  }
  return f;
}

void row(const char* name, std::size_t n, double serial, double parallel,
         bool equal) {
  std::printf("%-12s %10zu %11.2f ms %11.2f ms %8.2fx   %s\n", name, n, serial,
              parallel, serial / parallel, equal ? "yes" : "NO");
}

}  // namespace

int main() {
  std::mt19937 rng(271828);
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("threads: %d\n", threads);
  std::printf("%-12s %10s %14s %14s %9s   %s\n", "kernel", "n", "serial",
              "parallel", "speedup", "equal");

  {
    const std::size_t arity = 12, ncomp = 6, terms = 40, npoints = 1 << 15;
    rsm::CompiledField f = make_field(arity, ncomp, terms, rng);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<double> points(npoints * arity);
    for (double& x : points) x = coord(rng);
    std::vector<double> a(npoints * ncomp), b(npoints * ncomp);
    double ts = best_ms(5, [&] { rsm::eval_batch_serial(f, points, a); });
    double tp = best_ms(5, [&] { rsm::eval_batch_parallel(f, points, b); });
    row("eval_batch", npoints, ts, tp, a == b);
  }

  {
    const std::size_t nstates = 200000;
    std::uniform_int_distribution<std::size_t> deg(0, 4);
    std::uniform_int_distribution<std::size_t> dst(0, nstates - 1);
    std::vector<std::vector<std::size_t>> rows(nstates);
    for (auto& r : rows) {
      r.resize(deg(rng));
      for (auto& d : r) d = dst(rng);
    }
    std::vector<std::pair<std::size_t, std::size_t>> a, b;
    double ts = best_ms(5, [&] { a = rsm::edge_list_serial(rows); });
    double tp = best_ms(5, [&] { b = rsm::edge_list_parallel(rows); });
    row("edge_list", nstates, ts, tp, a == b);
  }

  return 0;
}
