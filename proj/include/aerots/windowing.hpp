#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "aerots/log_types.hpp"

namespace aerots {

// All windows of one or more logs, ordered by (log_id, start index). Holds
// raw pointers into the caller's log storage; the logs must outlive the set.
struct WindowSet {
    WindowSpec spec;
    std::vector<const AlignedLog*> logs;  // sorted by log_id
    std::vector<Window> windows;

    std::size_t size() const { return windows.size(); }
    std::size_t positive_count() const;

    // Position of a window in its log's stride-ordered sequence.
    std::size_t ordinal(std::size_t window_index) const {
        return windows[window_index].start / spec.stride;
    }

    std::span<const double> channel_slice(std::size_t window_index, std::size_t channel) const {
        const Window& w = windows[window_index];
        return logs[w.log_index]->channel(channel).subspan(w.start, spec.length);
    }
};

// Expected number of windows for a log of `rows` samples: floor((T-L)/r)+1.
std::size_t window_count(std::size_t rows, const WindowSpec& spec);

// Slices a log at starts 0, r, 2r, ... while a+L <= T. A window is positive
// iff any label==1 sample falls in [a, min(a+L+H, T)-1]; its family is the
// family of the first anomalous sample in that span. Throws LogTooShortError
// when T < L.
WindowSet make_windows(const AlignedLog& log, const WindowSpec& spec);

// Multi-log variant; logs are processed in log_id order and logs shorter
// than L are skipped.
WindowSet make_windows(std::span<const AlignedLog> logs, const WindowSpec& spec);

// Audit dump: one row per window with header log_id,start,label,family.
void write_window_index_csv(const WindowSet& ws, const std::filesystem::path& path);

}  // namespace aerots
