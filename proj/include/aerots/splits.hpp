#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerots/windowing.hpp"

namespace aerots::eval {

enum class Partition : std::uint8_t { train = 0, valid, test, purged };

const char* partition_name(Partition p);

struct SplitFractions {
    double train = 0.70;
    double valid = 0.15;
    // test takes the remainder
};

// Per-window partition tags, aligned with a WindowSet's window order.
struct SplitAssignment {
    std::string protocol;
    std::uint64_t seed = 0;
    SplitFractions fractions;
    std::vector<Partition> partition;

    std::size_t count(Partition p) const;
};

// Per log: first floor(train*n) windows to train, next floor(valid*n) to
// valid, remainder to test.
SplitAssignment split_chronological(const WindowSet& ws, SplitFractions fractions);

// Chronological split, then any window whose sample span [a, a+L+H)
// intersects [b - embargo, b + embargo) around a partition boundary b (the
// start of the later partition's first window) is marked purged, on both
// sides, and never reassigned.
SplitAssignment split_purged(const WindowSet& ws, SplitFractions fractions, std::size_t embargo);

// Whole logs assigned to partitions by a seeded shuffle, closing each
// partition when its cumulative window count is closest to the target
// fraction. Every partition receives at least one log. Throws
// TooFewLogsError below 3 logs.
SplitAssignment split_leave_log_out(const WindowSet& ws, SplitFractions fractions,
                                    std::uint64_t seed);

// Per-log 0/1 sample masks covering [a, a+L) of every window in `p`; used
// to fit standardization statistics on training samples only.
std::vector<std::vector<std::uint8_t>> sample_mask(const WindowSet& ws,
                                                   const SplitAssignment& split, Partition p);

}  // namespace aerots::eval
