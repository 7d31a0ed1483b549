#include "aerots/descriptors_reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aerots/errors.hpp"

namespace aerots::descriptors::reference {

double mean(std::span<const double> w) {
    double sum = 0.0;
    for (const double v : w) sum += v;
    return sum / static_cast<double>(w.size());
}

double population_std(std::span<const double> w) {
    const double m = mean(w);
    double sq = 0.0;
    for (const double v : w) sq += (v - m) * (v - m);
    return std::sqrt(sq / static_cast<double>(w.size()));
}

double minimum(std::span<const double> w) {
    double mn = w[0];
    for (const double v : w) mn = std::min(mn, v);
    return mn;
}

double maximum(std::span<const double> w) {
    double mx = w[0];
    for (const double v : w) mx = std::max(mx, v);
    return mx;
}

double range(std::span<const double> w) { return maximum(w) - minimum(w); }

double quantile(std::span<const double> w, double p) {
    std::vector<double> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * (h - static_cast<double>(lo));
}

double first_value(std::span<const double> w) { return w.front(); }

double last_value(std::span<const double> w) { return w.back(); }

double drift(std::span<const double> w) { return w.back() - w.front(); }

double diff_mean(std::span<const double> w) {
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < w.size(); ++t) sum += w[t + 1] - w[t];
    return sum / static_cast<double>(w.size() - 1);
}

double diff_population_std(std::span<const double> w) {
    const double m = diff_mean(w);
    double sq = 0.0;
    for (std::size_t t = 0; t + 1 < w.size(); ++t) {
        const double dev = (w[t + 1] - w[t]) - m;
        sq += dev * dev;
    }
    return std::sqrt(sq / static_cast<double>(w.size() - 1));
}

double diff_abs_mean(std::span<const double> w) {
    double sum = 0.0;
    for (std::size_t t = 0; t + 1 < w.size(); ++t) sum += std::abs(w[t + 1] - w[t]);
    return sum / static_cast<double>(w.size() - 1);
}

double diff_abs_max(std::span<const double> w) {
    double mx = 0.0;
    for (std::size_t t = 0; t + 1 < w.size(); ++t) mx = std::max(mx, std::abs(w[t + 1] - w[t]));
    return mx;
}

double lag1_autocorr(std::span<const double> w) {
    const double m = mean(w);
    double cross = 0.0;
    for (std::size_t t = 0; t + 1 < w.size(); ++t) cross += (w[t] - m) * (w[t + 1] - m);
    double sq = 0.0;
    for (const double v : w) sq += (v - m) * (v - m);
    return cross / std::max(sq, kAutocorrFloor);
}

void describe_channel(std::span<const double> w, std::span<double> out) {
    if (w.size() < 2) throw DataError("describe_channel needs at least 2 samples");
    for (const double v : w) {
        if (!std::isfinite(v)) throw NonFiniteInputError("non-finite sample in window");
    }
    out[0] = mean(w);
    out[1] = population_std(w);
    out[2] = minimum(w);
    out[3] = maximum(w);
    out[4] = range(w);
    out[5] = quantile(w, 0.10);
    out[6] = quantile(w, 0.25);
    out[7] = quantile(w, 0.50);
    out[8] = quantile(w, 0.75);
    out[9] = quantile(w, 0.90);
    out[10] = first_value(w);
    out[11] = last_value(w);
    out[12] = drift(w);
    out[13] = diff_mean(w);
    out[14] = diff_population_std(w);
    out[15] = diff_abs_mean(w);
    out[16] = diff_abs_max(w);
    out[17] = lag1_autocorr(w);
}

FeatureMatrix featurize_serial(const WindowSet& ws, const GroupSet& groups) {
    if (groups.empty()) throw DataError("featurize needs at least one descriptor group");
    const std::vector<std::size_t> selected = groups.descriptor_indices();
    static const std::vector<std::string> kNoChannels;
    const std::vector<std::string>& channels = ws.logs.empty() ? kNoChannels : ws.logs[0]->channels;
    const std::size_t d = channels.size();
    const std::size_t k = selected.size();

    FeatureMatrix fm;
    fm.rows = ws.size();
    fm.cols = k * d;
    fm.channel_names = channels;
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

    std::array<double, kDescriptorCount> full{};
    for (std::size_t r = 0; r < fm.rows; ++r) {
        double* row = fm.values.data() + r * fm.cols;
        for (std::size_t c = 0; c < d; ++c) {
            describe_channel(ws.channel_slice(r, c), full);
            for (std::size_t i = 0; i < k; ++i) row[c * k + i] = full[selected[i]];
        }
    }
    return fm;
}

}  // namespace aerots::descriptors::reference
