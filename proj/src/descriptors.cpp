#include "aerots/descriptors.hpp"

#include <algorithm>
#include <cmath>

#include "aerots/errors.hpp"

namespace aerots::descriptors {

const std::array<const char*, kDescriptorCount> kDescriptorNames = {
    "mean",      "std",      "min",           "max",          "range",     "q10",
    "q25",       "q50",      "q75",           "q90",          "first",     "last",
    "drift",     "diff_mean", "diff_std",     "diff_abs_mean", "diff_abs_max", "autocorr1",
};

Group group_of_descriptor(std::size_t descriptor_index) {
    if (descriptor_index < 2) return Group::moments;
    if (descriptor_index < 5) return Group::extrema_range;
    if (descriptor_index < 10) return Group::quantiles;
    if (descriptor_index < 13) return Group::endpoints_drift;
    if (descriptor_index < 17) return Group::dynamics;
    return Group::autocorr;
}

const char* group_name(Group g) {
    switch (g) {
        case Group::moments: return "moments";
        case Group::extrema_range: return "extrema_range";
        case Group::quantiles: return "quantiles";
        case Group::endpoints_drift: return "endpoints_drift";
        case Group::dynamics: return "dynamics";
        case Group::autocorr: return "autocorr";
    }
    return "?";
}

Group parse_group(const std::string& name) {
    for (std::size_t g = 0; g < kGroupCount; ++g) {
        if (name == group_name(static_cast<Group>(g))) return static_cast<Group>(g);
    }
    throw ConfigError("unknown descriptor group '" + name + "'");
}

std::vector<std::size_t> GroupSet::descriptor_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kDescriptorCount; ++i) {
        if (contains(group_of_descriptor(i))) out.push_back(i);
    }
    return out;
}

std::vector<std::string> GroupSet::names() const {
    std::vector<std::string> out;
    for (std::size_t g = 0; g < kGroupCount; ++g) {
        if (contains(static_cast<Group>(g))) out.emplace_back(group_name(static_cast<Group>(g)));
    }
    return out;
}

namespace {

// Quantile with linear interpolation between order statistics, h = (n-1)p.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    const double h = static_cast<double>(n - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

struct Workspace {
    std::vector<double> sorted;
};

void describe_channel_impl(std::span<const double> w, std::span<double> out, Workspace& ws) {
    const std::size_t n = w.size();
    if (n < 2) throw DataError("describe_channel needs at least 2 samples");
    for (const double v : w) {
        if (!std::isfinite(v)) throw NonFiniteInputError("non-finite sample in window");
    }

    double sum = 0.0;
    for (const double v : w) sum += v;
    const double mean = sum / static_cast<double>(n);

    double sq = 0.0;
    double cross = 0.0;
    double mn = w[0];
    double mx = w[0];
    for (std::size_t t = 0; t < n; ++t) {
        const double dev = w[t] - mean;
        sq += dev * dev;
        if (t + 1 < n) cross += dev * (w[t + 1] - mean);
        mn = std::min(mn, w[t]);
        mx = std::max(mx, w[t]);
    }

    ws.sorted.assign(w.begin(), w.end());
    std::sort(ws.sorted.begin(), ws.sorted.end());

    double diff_sum = 0.0;
    double abs_sum = 0.0;
    double abs_max = 0.0;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double diff = w[t + 1] - w[t];
        diff_sum += diff;
        abs_sum += std::abs(diff);
        abs_max = std::max(abs_max, std::abs(diff));
    }
    const double m = static_cast<double>(n - 1);
    const double diff_mean = diff_sum / m;
    double diff_sq = 0.0;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double dev = (w[t + 1] - w[t]) - diff_mean;
        diff_sq += dev * dev;
    }

    out[0] = mean;
    out[1] = std::sqrt(sq / static_cast<double>(n));
    out[2] = mn;
    out[3] = mx;
    out[4] = mx - mn;
    out[5] = quantile_sorted(ws.sorted, 0.10);
    out[6] = quantile_sorted(ws.sorted, 0.25);
    out[7] = quantile_sorted(ws.sorted, 0.50);
    out[8] = quantile_sorted(ws.sorted, 0.75);
    out[9] = quantile_sorted(ws.sorted, 0.90);
    out[10] = w[0];
    out[11] = w[n - 1];
    out[12] = w[n - 1] - w[0];
    out[13] = diff_mean;
    out[14] = std::sqrt(diff_sq / m);
    out[15] = abs_sum / m;
    out[16] = abs_max;
    out[17] = cross / std::max(sq, kAutocorrFloor);
}

}  // namespace

void describe_channel(std::span<const double> w, std::span<double> out) {
    Workspace ws;
    describe_channel_impl(w, out, ws);
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::size_t>& keep) const {
    FeatureMatrix out;
    out.rows = rows;
    out.cols = keep.size();
    out.channel_names = channel_names;
    out.columns.reserve(keep.size());
    for (const std::size_t c : keep) out.columns.push_back(columns[c]);
    out.values.resize(rows * keep.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < keep.size(); ++i) {
            out.values[r * keep.size() + i] = values[r * cols + keep[i]];
        }
    }
    return out;
}

FeatureMatrix featurize(const WindowSet& ws, const GroupSet& groups) {
    if (groups.empty()) throw DataError("featurize needs at least one descriptor group");
    const std::vector<std::size_t> selected = groups.descriptor_indices();
    static const std::vector<std::string> kNoChannels;
    const std::vector<std::string>& channels = ws.logs.empty() ? kNoChannels : ws.logs[0]->channels;
    for (const AlignedLog* log : ws.logs) {
        if (log->channels != channels) {
            throw ChannelMismatchError("windows reference logs with differing channel lists");
        }
    }

    const std::size_t d = channels.size();
    const std::size_t k = selected.size();

    FeatureMatrix fm;
    fm.rows = ws.size();
    fm.cols = k * d;
    fm.channel_names = channels;
    fm.columns.reserve(fm.cols);
    for (std::size_t c = 0; c < d; ++c) {
        for (const std::size_t s : selected) {
            FeatureColumn col;
            col.name = channels[c] + "__" + kDescriptorNames[s];
            col.channel = static_cast<std::uint32_t>(c);
            col.descriptor = static_cast<std::uint8_t>(s);
            fm.columns.push_back(std::move(col));
        }
    }
    fm.values.resize(fm.rows * fm.cols);

    const std::int64_t n_rows = static_cast<std::int64_t>(fm.rows);
#pragma omp parallel
    {
        Workspace scratch;
        std::array<double, kDescriptorCount> full{};
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < n_rows; ++r) {
            double* row = fm.values.data() + static_cast<std::size_t>(r) * fm.cols;
            for (std::size_t c = 0; c < d; ++c) {
                describe_channel_impl(ws.channel_slice(static_cast<std::size_t>(r), c), full,
                                      scratch);
                for (std::size_t i = 0; i < k; ++i) row[c * k + i] = full[selected[i]];
            }
        }
    }
    return fm;
}

FeatureMatrix moments_only_features(const WindowSet& ws) {
    return featurize(ws, GroupSet::only(Group::moments));
}

}  // namespace aerots::descriptors
