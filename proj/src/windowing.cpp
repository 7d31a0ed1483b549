#include "aerots/windowing.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aerots/errors.hpp"

namespace aerots {

std::size_t WindowSet::positive_count() const {
    std::size_t n = 0;
    for (const auto& w : windows) n += w.label;
    return n;
}

std::size_t window_count(std::size_t rows, const WindowSpec& spec) {
    if (rows < spec.length) return 0;
    return (rows - spec.length) / spec.stride + 1;
}

namespace {

void append_windows(WindowSet& out, const AlignedLog& log, std::size_t log_index) {
    const WindowSpec& spec = out.spec;
    const std::size_t rows = log.rows();
    for (std::size_t a = 0; a + spec.length <= rows; a += spec.stride) {
        Window w;
        w.log_index = log_index;
        w.start = a;
        const std::size_t span_end = std::min(a + spec.length + spec.horizon, rows);
        for (std::size_t t = a; t < span_end; ++t) {
            if (log.labels[t]) {
                w.label = 1;
                w.family = log.anomaly_types[t];
                break;
            }
        }
        out.windows.push_back(std::move(w));
    }
}

}  // namespace

WindowSet make_windows(const AlignedLog& log, const WindowSpec& spec) {
    if (spec.length < 2 || spec.stride < 1) throw DataError("invalid window spec");
    if (log.rows() < spec.length) {
        std::ostringstream os;
        os << "log '" << log.log_id << "' has " << log.rows() << " rows, window length is "
           << spec.length;
        throw LogTooShortError(os.str());
    }
    WindowSet out;
    out.spec = spec;
    out.logs.push_back(&log);
    out.windows.reserve(window_count(log.rows(), spec));
    append_windows(out, log, 0);
    return out;
}

WindowSet make_windows(std::span<const AlignedLog> logs, const WindowSpec& spec) {
    if (spec.length < 2 || spec.stride < 1) throw DataError("invalid window spec");

    std::vector<std::size_t> order(logs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return logs[a].log_id < logs[b].log_id; });

    WindowSet out;
    out.spec = spec;
    std::size_t total = 0;
    for (const auto& log : logs) total += window_count(log.rows(), spec);
    out.windows.reserve(total);

    for (const std::size_t i : order) {
        if (logs[i].rows() < spec.length) continue;
        out.logs.push_back(&logs[i]);
        append_windows(out, logs[i], out.logs.size() - 1);
    }
    return out;
}

void write_window_index_csv(const WindowSet& ws, const std::filesystem::path& path) {
    std::string out = "log_id,start,label,family\n";
    for (const Window& w : ws.windows) {
        out += ws.logs[w.log_index]->log_id;
        out += ',';
        out += std::to_string(w.start);
        out += w.label ? ",1," : ",0,";
        out += w.family;
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace aerots
