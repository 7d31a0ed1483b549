#include "aerots/splits.hpp"

#include <algorithm>
#include <cmath>

#include "aerots/errors.hpp"
#include "aerots/rng.hpp"

namespace aerots::eval {

const char* partition_name(Partition p) {
    switch (p) {
        case Partition::train: return "train";
        case Partition::valid: return "valid";
        case Partition::test: return "test";
        case Partition::purged: return "purged";
    }
    return "?";
}

std::size_t SplitAssignment::count(Partition p) const {
    std::size_t n = 0;
    for (const auto q : partition) n += (q == p) ? 1 : 0;
    return n;
}

namespace {

// floor(f*n) with a nudge so exact products are not pushed below the integer
// they represent (0.7*50 evaluates below 35 in binary).
std::size_t floor_fraction(std::size_t n, double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
}

// Ranges of consecutive windows per log inside a WindowSet.
struct LogRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<LogRange> log_ranges(const WindowSet& ws) {
    std::vector<LogRange> ranges(ws.logs.size());
    for (auto& r : ranges) r.begin = ws.windows.size();
    for (std::size_t i = 0; i < ws.windows.size(); ++i) {
        auto& r = ranges[ws.windows[i].log_index];
        r.begin = std::min(r.begin, i);
        r.end = std::max(r.end, i + 1);
    }
    return ranges;
}

void check_fractions(SplitFractions f) {
    if (f.train < 0.0 || f.valid < 0.0 || f.train + f.valid > 1.0 + 1e-12) {
        throw DataError("split fractions must be non-negative and sum to <= 1");
    }
}

}  // namespace

SplitAssignment split_chronological(const WindowSet& ws, SplitFractions fractions) {
    check_fractions(fractions);
    SplitAssignment out;
    out.protocol = "chronological";
    out.fractions = fractions;
    out.partition.assign(ws.size(), Partition::test);

    for (const auto& range : log_ranges(ws)) {
        const std::size_t n = range.end - range.begin;
        const std::size_t n_train = floor_fraction(n, fractions.train);
        const std::size_t n_valid = floor_fraction(n, fractions.valid);
        for (std::size_t i = 0; i < n; ++i) {
            Partition p = Partition::test;
            if (i < n_train) p = Partition::train;
            else if (i < n_train + n_valid) p = Partition::valid;
            out.partition[range.begin + i] = p;
        }
    }
    return out;
}

SplitAssignment split_purged(const WindowSet& ws, SplitFractions fractions, std::size_t embargo) {
    SplitAssignment out = split_chronological(ws, fractions);
    out.protocol = "purged_chronological";
    if (embargo == 0) return out;  // empty embargo zones purge nothing

    const std::size_t span = ws.spec.length + ws.spec.horizon;
    for (const auto& range : log_ranges(ws)) {
        // Boundary = start sample of the later partition's first window.
        std::vector<std::size_t> boundaries;
        for (const Partition later : {Partition::valid, Partition::test}) {
            for (std::size_t i = range.begin; i < range.end; ++i) {
                if (out.partition[i] == later) {
                    boundaries.push_back(ws.windows[i].start);
                    break;
                }
            }
        }
        for (const std::size_t b : boundaries) {
            const std::size_t zone_lo = b > embargo ? b - embargo : 0;
            const std::size_t zone_hi = b + embargo;
            for (std::size_t i = range.begin; i < range.end; ++i) {
                const std::size_t a = ws.windows[i].start;
                if (a < zone_hi && zone_lo < a + span) out.partition[i] = Partition::purged;
            }
        }
    }
    return out;
}

SplitAssignment split_leave_log_out(const WindowSet& ws, SplitFractions fractions,
                                    std::uint64_t seed) {
    check_fractions(fractions);
    if (ws.logs.size() < 3) throw TooFewLogsError("leave-log-out needs at least 3 logs");

    const auto ranges = log_ranges(ws);
    std::vector<std::size_t> order(ws.logs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng = Rng::derive(seed, 0x11b0);
    rng.shuffle(order);

    const double total = static_cast<double>(ws.size());
    const double target_train = fractions.train * total;
    const double target_valid = (fractions.train + fractions.valid) * total;

    SplitAssignment out;
    out.protocol = "leave_log_out";
    out.seed = seed;
    out.fractions = fractions;
    out.partition.assign(ws.size(), Partition::test);

    std::vector<Partition> log_partition(ws.logs.size(), Partition::test);
    double cum = 0.0;
    std::size_t idx = 0;
    for (const Partition p : {Partition::train, Partition::valid}) {
        const double target = p == Partition::train ? target_train : target_valid;
        bool first_of_partition = true;
        while (idx < order.size()) {
            // Leave logs for the remaining partitions.
            const std::size_t remaining_partitions = p == Partition::train ? 2 : 1;
            if (order.size() - idx <= remaining_partitions) break;
            const std::size_t log = order[idx];
            const double n = static_cast<double>(ranges[log].end - ranges[log].begin);
            if (!first_of_partition && std::abs(cum - target) <= std::abs(cum + n - target)) {
                break;  // adding this log would not get closer to the target
            }
            log_partition[log] = p;
            cum += n;
            ++idx;
            first_of_partition = false;
        }
    }
    // Remaining logs (at least one) are test.

    for (std::size_t log = 0; log < ws.logs.size(); ++log) {
        for (std::size_t i = ranges[log].begin; i < ranges[log].end; ++i) {
            out.partition[i] = log_partition[log];
        }
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> sample_mask(const WindowSet& ws,
                                                   const SplitAssignment& split, Partition p) {
    std::vector<std::vector<std::uint8_t>> masks(ws.logs.size());
    for (std::size_t i = 0; i < ws.logs.size(); ++i) {
        masks[i].assign(ws.logs[i]->rows(), 0);
    }
    for (std::size_t i = 0; i < ws.windows.size(); ++i) {
        if (split.partition[i] != p) continue;
        const Window& w = ws.windows[i];
        for (std::size_t t = w.start; t < w.start + ws.spec.length; ++t) {
            masks[w.log_index][t] = 1;
        }
    }
    return masks;
}

}  // namespace aerots::eval
