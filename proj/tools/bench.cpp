// Timing comparison between the serial reference kernels and the OpenMP
// ones: point-cloud sampling and geodesic-fan integration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sublorentz/fields.hpp"
#include "sublorentz/geodesic_engine.hpp"
#include "sublorentz/magnetic_analytic.hpp"

using namespace sublorentz;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_ms();
    fn();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

double fan_integrate(ExecutionPolicy policy, int n_alpha, int n_rate) {
  const double pi = std::numbers::pi;
  FramedDistribution dist{constant_magnetic_potential(1.0), minkowski_metric()};
  std::vector<double> endpoint(static_cast<std::size_t>(n_alpha) * n_rate);
  const long total = static_cast<long>(n_alpha) * n_rate;

  const auto cell = [&](long idx) {
    const int ia = static_cast<int>(idx / n_rate);
    const int ir = static_cast<int>(idx % n_rate);
    const double alpha = -pi + 2.0 * pi * (ia + 0.5) / n_alpha;
    const double rate = -2.0 * pi + 4.0 * pi * ir / (n_rate - 1);
    ParticleParams particle{1.0, rate};
    GeodesicState start;
    start.velocity = {0.0, 0.0, std::sin(alpha), std::cos(alpha)};
    IntegratorConfig cfg{1e-3, 1.0, 1000};
    const Trajectory traj = integrate(dist, particle, start, cfg);
    endpoint[static_cast<std::size_t>(idx)] = traj.back().state.position.fiber;
  };

  if (policy == ExecutionPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) cell(i);
  } else {
    for (long i = 0; i < total; ++i) cell(i);
  }
  double sum = 0.0;
  for (double v : endpoint) sum += v;
  return sum;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms",
              "speedup");

  {
    SphereSpec spec{1.0, 512, 512, 0.0, 2.0 * std::numbers::pi, 1.0};
    const double ts = time_best_of(
        3, [&] { (void)sphere_sample(spec, ExecutionPolicy::serial); });
    const double tp = time_best_of(
        3, [&] { (void)sphere_sample(spec, ExecutionPolicy::parallel); });
    std::printf("%-28s %12.2f %12.2f %8.2fx\n", "sphere-sample 512x512", ts, tp,
                ts / tp);
    // The two policies must agree bitwise.
    const PointCloud a = sphere_sample(spec, ExecutionPolicy::serial);
    const PointCloud b = sphere_sample(spec, ExecutionPolicy::parallel);
    for (std::size_t i = 0; i < a.points.size(); ++i)
      if (a.points[i].x4 != b.points[i].x4) {
        std::printf("MISMATCH at %zu\n", i);
        return 1;
      }
  }
  {
    SphereSpec spec{1.0, 512, 512, std::numbers::pi, 8.0 * std::numbers::pi,
                    1.0};
    const double ts = time_best_of(
        3, [&] { (void)wavefront_sample(spec, ExecutionPolicy::serial); });
    const double tp = time_best_of(
        3, [&] { (void)wavefront_sample(spec, ExecutionPolicy::parallel); });
    std::printf("%-28s %12.2f %12.2f %8.2fx\n", "wavefront-sample 512x512", ts,
                tp, ts / tp);
  }
  {
    volatile double sink = 0.0;
    const double ts = time_best_of(
        1, [&] { sink = fan_integrate(ExecutionPolicy::serial, 8, 8); });
    const double tp = time_best_of(
        1, [&] { sink = fan_integrate(ExecutionPolicy::parallel, 8, 8); });
    (void)sink;
    std::printf("%-28s %12.2f %12.2f %8.2fx\n", "fan-integrate 8x8 (t=1)", ts,
                tp, ts / tp);
  }
  return 0;
}
