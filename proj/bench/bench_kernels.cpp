// Wall-clock comparison of the OpenMP kernels against the serial reference
// path: descriptor extraction over a synthetic window set and one round of
// GBDT-style histogram accumulation. Run with a varying OMP_NUM_THREADS (or
// AEROTS_WORKERS) to see scaling.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "aerots/descriptors.hpp"
#include "aerots/descriptors_reference.hpp"
#include "aerots/ingest.hpp"
#include "aerots/rng.hpp"
#include "aerots/synth.hpp"
#include "aerots/windowing.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

// Serial histogram accumulation, the single-feature-at-a-time loop the
// parallel trainer distributes across features.
void histogram_serial(const std::vector<std::uint8_t>& bins, std::size_t n_rows,
                      std::size_t n_features, const std::vector<double>& grad,
                      std::vector<double>& hist) {
    for (std::size_t f = 0; f < n_features; ++f) {
        double* h = hist.data() + f * 256;
        const std::uint8_t* b = bins.data() + f * n_rows;
        for (std::size_t i = 0; i < n_rows; ++i) h[b[i]] += grad[i];
    }
}

void histogram_parallel(const std::vector<std::uint8_t>& bins, std::size_t n_rows,
                        std::size_t n_features, const std::vector<double>& grad,
                        std::vector<double>& hist) {
    const std::int64_t nf = static_cast<std::int64_t>(n_features);
#pragma omp parallel for schedule(static)
    for (std::int64_t f = 0; f < nf; ++f) {
        double* h = hist.data() + static_cast<std::size_t>(f) * 256;
        const std::uint8_t* b = bins.data() + static_cast<std::size_t>(f) * n_rows;
        for (std::size_t i = 0; i < n_rows; ++i) h[b[i]] += grad[i];
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t log_count = 24;
    if (argc > 1) log_count = static_cast<std::size_t>(std::atoll(argv[1]));
    if (const char* env = std::getenv("AEROTS_WORKERS")) {
        omp_set_num_threads(std::atoi(env));
    }

    aerots::synth::SynthConfig sc;
    sc.seed = 7;
    sc.log_count = log_count;
    sc.samples_per_log = 3000;
    sc.channels = 12;
    sc.anomaly_rate = 0.03;
    const auto synth_logs = aerots::synth::generate(sc);

    std::vector<aerots::AlignedLog> logs;
    for (const auto& entry : synth_logs) {
        logs.push_back(aerots::ingest::impute(aerots::ingest::resample_to_grid(entry.log, 10.0)));
    }
    const aerots::WindowSpec spec;
    const auto windows = aerots::make_windows(std::span<const aerots::AlignedLog>(logs), spec);

    std::printf("windows=%zu channels=%zu omp_max_threads=%d\n", windows.size(), sc.channels,
                omp_get_max_threads());

    const auto groups = aerots::descriptors::GroupSet::all();
    const double t_serial = time_best_of(3, [&] {
        const auto fm = aerots::descriptors::reference::featurize_serial(windows, groups);
        (void)fm;
    });
    const double t_parallel = time_best_of(3, [&] {
        const auto fm = aerots::descriptors::featurize(windows, groups);
        (void)fm;
    });
    std::printf("featurize      serial %8.3f ms   openmp %8.3f ms   speedup %.2fx\n",
                t_serial * 1e3, t_parallel * 1e3, t_serial / t_parallel);

    // Histogram kernel on synthetic bins.
    const std::size_t n_rows = windows.size();
    const std::size_t n_features = 18 * sc.channels;
    aerots::Rng rng(42);
    std::vector<std::uint8_t> bins(n_rows * n_features);
    for (auto& b : bins) b = static_cast<std::uint8_t>(rng.uniform_index(255));
    std::vector<double> grad(n_rows);
    for (auto& g : grad) g = rng.normal();
    std::vector<double> hist(n_features * 256, 0.0);

    const double h_serial = time_best_of(5, [&] {
        std::fill(hist.begin(), hist.end(), 0.0);
        histogram_serial(bins, n_rows, n_features, grad, hist);
    });
    const double h_parallel = time_best_of(5, [&] {
        std::fill(hist.begin(), hist.end(), 0.0);
        histogram_parallel(bins, n_rows, n_features, grad, hist);
    });
    std::printf("histogram      serial %8.3f ms   openmp %8.3f ms   speedup %.2fx\n",
                h_serial * 1e3, h_parallel * 1e3, h_serial / h_parallel);
    return 0;
}
