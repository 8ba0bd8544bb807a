#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hqf/batch.hpp"

namespace {

double seconds(std::function<hqf::SweepResult()> f, hqf::SweepResult& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

struct Row {
    const char* name;
    std::function<hqf::SweepResult(bool)> run;
};

} // namespace

int main(int argc, char** argv) {
    std::uint64_t scale = 1;
    if (argc > 1) scale = std::strtoull(argv[1], nullptr, 10);
    if (scale == 0) scale = 1;

#ifdef _OPENMP
    std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled (both columns run serially)\n");
#endif

    const hqf::ring_ptr ring = hqf::RingSpec::preset_q2i();
    const std::uint64_t seed = 0xbe9cull;
    std::vector<Row> rows = {
        {"divided_disc",
         [&](bool par) { return hqf::sweep_divided_disc(ring, 3000 * scale, seed, par); }},
        {"unit_disc_search",
         [&](bool par) { return hqf::sweep_unit_disc_search(ring, 20000 * scale, seed, par); }},
        {"reduce_roundtrip",
         [&](bool par) { return hqf::sweep_reduce_roundtrip(ring, 5, 600 * scale, seed, par); }},
        {"pair_normalize",
         [&](bool par) { return hqf::sweep_pair_normalize(ring, 4000 * scale, seed, par); }},
    };

    std::printf("%-18s %10s %10s %8s  %s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
                "results");
    bool all_match = true;
    for (const auto& row : rows) {
        hqf::SweepResult rs, rp;
        const double ts = seconds([&] { return row.run(false); }, rs);
        const double tp = seconds([&] { return row.run(true); }, rp);
        const bool match = rs == rp;
        all_match = all_match && match && rs.failures == 0;
        std::printf("%-18s %10.3f %10.3f %7.2fx  %s, %llu/%llu failures, checksum %016llx\n",
                    row.name, ts, tp, tp > 0 ? ts / tp : 0.0, match ? "identical" : "MISMATCH",
                    static_cast<unsigned long long>(rs.failures),
                    static_cast<unsigned long long>(rs.samples),
                    static_cast<unsigned long long>(rs.checksum));
    }
    return all_match ? 0 : 1;
}
