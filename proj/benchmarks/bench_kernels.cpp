// Times the OpenMP kernels against their serial references and checks the
// results agree bit for bit. Build and run:
//   cmake --build build --target qgd_bench && ./build/benchmarks/qgd_bench

#include <chrono>
#include <cstdio>
#include <functional>

#include "qgd/kernels.hpp"
#include "qgd/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qgd;

namespace {

PointSet random_points(int n, int d, uint64_t seed) {
  Rng rng(seed);
  PointSet pts(d);
  pts.data.reserve(static_cast<size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    Vec x(static_cast<size_t>(d));
    for (auto& v : x) v = rng.unit();
    pts.push(x);
  }
  return pts;
}

double time_s(const std::function<void()>& fn, int reps) {
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
             .count() /
         reps;
}

void report(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-28s serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   %s\n",
              name, serial * 1e3, parallel * 1e3, serial / parallel,
              equal ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run the serial path\n");
#endif

  {
    PointSet pts = random_points(12000, 8, 1);
    double rs = 0, rp = 0;
    double ts = time_s([&] { rs = kernels::min_pairwise_distance_serial(pts); }, 3);
    double tp = time_s([&] { rp = kernels::min_pairwise_distance(pts); }, 3);
    report("min_pairwise_distance", ts, tp, rs == rp);
  }

  {
    PointSet net = random_points(4096, 8, 2);
    PointSet samples = random_points(20000, 8, 3);
    double rs = 0, rp = 0;
    double ts =
        time_s([&] { rs = kernels::max_cover_distance_serial(net, samples); }, 3);
    double tp = time_s([&] { rp = kernels::max_cover_distance(net, samples); }, 3);
    report("max_cover_distance", ts, tp, rs == rp);
  }

  {
    PointSet sites = random_points(64, 2, 4);
    PointSet queries = random_points(400000, 2, 5);
    std::vector<int32_t> i1, i2;
    std::vector<double> d1, d2;
    double ts =
        time_s([&] { kernels::nearest_site_map_serial(sites, queries, i1, d1); }, 3);
    double tp = time_s([&] { kernels::nearest_site_map(sites, queries, i2, d2); }, 3);
    report("nearest_site_map", ts, tp, i1 == i2 && d1 == d2);
  }

  return 0;
}
