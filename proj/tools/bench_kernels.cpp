// Timing comparison between the OpenMP grid kernels and their serial
// reference implementations, with an equality check on every run. Sizes are
// far beyond anything the CLI produces; the point is to show the parallel
// path scales and stays bit-identical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "exosuit/design_explorer.hpp"
#include "exosuit/torque_model.hpp"
#include "exosuit/units.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        fn();
        const auto t1 = clock_type::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int scale = argc > 1 ? std::atoi(argv[1]) : 1000;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
    if (scale <= 0 || reps <= 0) {
        std::fprintf(stderr, "usage: bench-kernels [grid-size] [reps]\n");
        return 2;
    }
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    using namespace exosuit;
    const ActuatorGeometry geom;

    std::vector<double> p_grid(static_cast<std::size_t>(scale));
    std::vector<double> theta_grid(static_cast<std::size_t>(scale));
    for (int i = 0; i < scale; ++i) {
        p_grid[static_cast<std::size_t>(i)] = 1e3 + 200e3 * i / scale;
        theta_grid[static_cast<std::size_t>(i)] = 3.0 * i / scale;
    }

    TorqueSurface serial_surface, parallel_surface;
    const double t_surface_serial =
        best_of(reps, [&] { serial_surface = torque_surface_serial(geom, p_grid, theta_grid); });
    const double t_surface_parallel =
        best_of(reps, [&] { parallel_surface = torque_surface(geom, p_grid, theta_grid); });
    if (serial_surface.torque != parallel_surface.torque) {
        std::fprintf(stderr, "FAIL: torque_surface parallel output differs from serial\n");
        return 1;
    }
    std::printf("torque_surface   %dx%d: serial %8.2f ms   openmp %8.2f ms   speedup %.2fx\n",
                scale, scale, t_surface_serial, t_surface_parallel,
                t_surface_serial / t_surface_parallel);

    DesignConstraints constraints;
    constraints.n_min = 1;
    constraints.n_max = 64;
    constraints.d_min = 0.005;
    constraints.d_max = 0.005 + 1e-5 * (scale - 1);
    constraints.d_step = 1e-5;
    std::vector<DesignCandidate> serial_designs, parallel_designs;
    const double t_designs_serial =
        best_of(reps, [&] { serial_designs = enumerate_designs_serial(constraints); });
    const double t_designs_parallel =
        best_of(reps, [&] { parallel_designs = enumerate_designs(constraints); });
    bool designs_equal = serial_designs.size() == parallel_designs.size();
    for (std::size_t i = 0; designs_equal && i < serial_designs.size(); ++i) {
        const DesignCandidate& a = serial_designs[i];
        const DesignCandidate& b = parallel_designs[i];
        designs_equal = a.n == b.n && a.d == b.d && a.torque == b.torque &&
                        a.stress_area == b.stress_area && a.feasible == b.feasible &&
                        a.l_dz_min == b.l_dz_min;
    }
    if (!designs_equal) {
        std::fprintf(stderr, "FAIL: enumerate_designs parallel output differs from serial\n");
        return 1;
    }
    std::printf("enumerate_designs 64x%d: serial %8.2f ms   openmp %8.2f ms   speedup %.2fx\n",
                scale, t_designs_serial, t_designs_parallel,
                t_designs_serial / t_designs_parallel);
    return 0;
}
