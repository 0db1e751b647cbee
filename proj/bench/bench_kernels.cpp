// Compares the serial reference propagation kernel against the OpenMP
// gather kernel on a synthetic power-law graph.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rwr/metrics.hpp"
#include "rwr/propagation.hpp"
#include "rwr/stream.hpp"

int main(int argc, char** argv) {
    std::size_t n = 200000;
    std::size_t m = 2000000;
    if (argc > 1)
        n = std::stoul(argv[1]);
    if (argc > 2)
        m = std::stoul(argv[2]);

    std::printf("building synthetic graph n=%zu m=%zu\n", n, m);
    auto stream = rwr::generate_power_law_stream(n, m, 7);
    auto graph = rwr::build_graph(stream, false).graph;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled, both runs are serial\n");
#endif

    rwr::Config config;
    config.epsilon = 1e-9;

    auto run = [&](bool parallel) {
        rwr::Config variant = config;
        variant.parallel = parallel;
        const auto start = std::chrono::steady_clock::now();
        auto [scores, stats] = rwr::cpi_raw(graph, 0, variant);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%-8s  iters=%zu  visited=%llu  time=%.3fs\n", parallel ? "openmp" : "serial",
                    stats.iterations, static_cast<unsigned long long>(stats.visited_edges), secs);
        return scores;
    };

    auto serial = run(false);
    auto parallel = run(true);
    std::printf("L1 difference serial vs openmp: %.3e\n", rwr::l1_error(serial, parallel));
    return 0;
}
