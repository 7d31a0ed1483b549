#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aerots/windowing.hpp"

namespace aerots::descriptors {

// Per-channel descriptor layout, in output order:
//   0 mean   1 std    2 min    3 max    4 range
//   5 q10    6 q25    7 q50    8 q75    9 q90
//  10 first 11 last  12 drift
//  13 diff_mean 14 diff_std 15 diff_abs_mean 16 diff_abs_max
//  17 autocorr1
// std/diff_std are population estimates; quantiles interpolate linearly
// between order statistics at h = (n-1)p; autocorr1 is the ratio of adjacent
// centered products to the centered sum of squares, both using the window
// mean, with the denominator floored at kAutocorrFloor (constant windows
// yield 0).
inline constexpr std::size_t kDescriptorCount = 18;
inline constexpr double kAutocorrFloor = 1e-12;

extern const std::array<const char*, kDescriptorCount> kDescriptorNames;

enum class Group : std::uint8_t {
    moments = 0,
    extrema_range,
    quantiles,
    endpoints_drift,
    dynamics,
    autocorr,
};
inline constexpr std::size_t kGroupCount = 6;

Group group_of_descriptor(std::size_t descriptor_index);
const char* group_name(Group g);
Group parse_group(const std::string& name);  // throws ConfigError on unknown names

// Which of the six descriptor groups to emit.
class GroupSet {
public:
    static GroupSet all() {
        GroupSet s;
        s.bits_ = (1u << kGroupCount) - 1;
        return s;
    }
    static GroupSet none() { return GroupSet{}; }
    static GroupSet only(Group g) { return none().with(g); }

    GroupSet with(Group g) const {
        GroupSet s = *this;
        s.bits_ |= 1u << static_cast<unsigned>(g);
        return s;
    }
    GroupSet without(Group g) const {
        GroupSet s = *this;
        s.bits_ &= ~(1u << static_cast<unsigned>(g));
        return s;
    }
    bool contains(Group g) const { return bits_ & (1u << static_cast<unsigned>(g)); }
    bool empty() const { return bits_ == 0; }

    // Selected descriptor indices in fixed layout order.
    std::vector<std::size_t> descriptor_indices() const;
    std::vector<std::string> names() const;

    bool operator==(const GroupSet&) const = default;

private:
    std::uint8_t bits_ = 0;
};

// Fills out[0..17] for one channel window. Requires w.size() >= 2 and finite
// input (NonFiniteInputError otherwise).
void describe_channel(std::span<const double> w, std::span<double> out);

struct FeatureColumn {
    std::string name;  // "<channel>__<descriptor>"
    std::uint32_t channel = 0;
    std::uint8_t descriptor = 0;

    Group group() const { return group_of_descriptor(descriptor); }
};

// Row-major N x (k*d) descriptor table, rows aligned to a WindowSet.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<FeatureColumn> columns;
    std::vector<std::string> channel_names;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }

    // Column subset in the given order; used by the ablation grid. Copies
    // values verbatim, so slicing equals re-extracting with fewer groups.
    FeatureMatrix select_columns(const std::vector<std::size_t>& keep) const;
};

// Descriptor extraction over all windows; rows are computed independently
// and written to disjoint ranges, so results are identical at any OpenMP
// worker count. Column order is channel-major with the fixed descriptor
// order inside each channel.
FeatureMatrix featurize(const WindowSet& ws, const GroupSet& groups);

FeatureMatrix moments_only_features(const WindowSet& ws);

}  // namespace aerots::descriptors
