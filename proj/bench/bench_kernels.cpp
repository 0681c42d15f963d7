// Timing harness: OpenMP kernels against their serial reference
// implementations. The two must agree bit for bit; the table reports the
// speedup actually achieved on this machine.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "jcir/chf.hpp"
#include "jcir/levy.hpp"
#include "jcir/lyapunov.hpp"
#include "jcir/mc.hpp"
#include "jcir/sim.hpp"

using namespace jcir;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

const chf::ModelParams kModel{
    1.0, 1.0, 1.0, levy::CompoundPoisson{0.5, levy::ExponentialLaw{2.0}}};

void report(const char* name, double serial_ms, double par_ms, bool equal) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   x%.2f   %s\n",
              name, serial_ms, par_ms, serial_ms / par_ms,
              equal ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n\n", threads);

  {
    const std::size_t n = 200000;
    const auto draw = [](std::size_t, RandomStream& rs) {
      return sim::jcir_exact_oneshot(kModel, 1.0, 1.0, rs);
    };
    double t0 = now_ms();
    const auto a = mc::fill_indexed_serial(n, 7, 0, draw);
    double t1 = now_ms();
    const auto b = mc::fill_indexed(n, 7, 0, draw, threads);
    double t2 = now_ms();
    report("one-shot sampling", t1 - t0, t2 - t1,
           std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
  }

  {
    // Transform table: the coefficient pass of the density inversion.
    const std::size_t n = 60000;
    const double dw = 3.14159 / 40.0;
    const auto fn = [&](std::size_t k) {
      return chf::jcir_chf(1.0, {0.0, dw * static_cast<double>(k)}, 1.0,
                           kModel)
          .real();
    };
    std::vector<double> a(n), b(n);
    double t0 = now_ms();
    mc::transform_indexed_serial(n, a.data(), fn);
    double t1 = now_ms();
    mc::transform_indexed(n, b.data(), fn, threads);
    double t2 = now_ms();
    report("transform coefficients", t1 - t0, t2 - t1,
           std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
  }

  {
    // Generator scan across a grid.
    const std::vector<double> grid = lyapunov::make_grid(1e-2, 1e6, 400);
    const lyapunov::LyapunovFn fn = lyapunov::LyapunovFn::log1p_fn();
    const auto eval = [&](std::size_t i) {
      return lyapunov::apply_generator(kModel, fn, grid[i]);
    };
    std::vector<double> a(grid.size()), b(grid.size());
    double t0 = now_ms();
    mc::transform_indexed_serial(grid.size(), a.data(), eval);
    double t1 = now_ms();
    mc::transform_indexed(grid.size(), b.data(), eval, threads);
    double t2 = now_ms();
    report("drift grid scan", t1 - t0, t2 - t1,
           std::memcmp(a.data(), b.data(), grid.size() * sizeof(double)) ==
               0);
  }

  return 0;
}
