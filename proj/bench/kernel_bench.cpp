// Times the OpenMP kernels against their serial references on square dense
// matrices. Build and run manually; not part of the test suite.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "graphstab/kernels.hpp"
#include "graphstab/random.hpp"

namespace {

using graphstab::Matrix;
namespace kern = graphstab::kern;

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  auto rng = graphstab::make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(n, n);
  for (double& v : m.values()) v = gauss(rng);
  return m;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s < best) best = s;
  }
  return best;
}

volatile double sink = 0.0;

void report(const char* name, std::size_t n, double serial_s, double parallel_s) {
  std::printf("%-16s n=%-5zu serial %10.6f s   parallel %10.6f s   speedup %5.2fx\n", name,
              n, serial_s, parallel_s, serial_s / parallel_s);
}

void bench_size(std::size_t n, int reps) {
  const Matrix a = random_matrix(n, 11);
  const Matrix b = random_matrix(n, 12);
  std::vector<double> x(n, 1.0), y(n);

  report("matvec", n,
         time_best_of(reps * 8, [&] { kern::serial::matvec(a, x, y); sink = sink + y[0]; }),
         time_best_of(reps * 8, [&] { kern::matvec(a, x, y); sink = sink + y[0]; }));
  report("matmul", n,
         time_best_of(reps, [&] { sink = sink + kern::serial::matmul(a, b)(0, 0); }),
         time_best_of(reps, [&] { sink = sink + kern::matmul(a, b)(0, 0); }));
  report("frobenius", n,
         time_best_of(reps * 8, [&] { sink = sink + kern::serial::frobenius(a); }),
         time_best_of(reps * 8, [&] { sink = sink + kern::frobenius(a); }));
  report("max_row_abs_sum", n,
         time_best_of(reps * 8, [&] { sink = sink + kern::serial::max_row_abs_sum(a); }),
         time_best_of(reps * 8, [&] { sink = sink + kern::max_row_abs_sum(a); }));
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serial code\n");
#endif
  bench_size(256, 20);
  bench_size(512, 8);
  bench_size(1024, 3);
  return sink == 12345.0 ? 1 : 0;  // keep the work observable
}
