#include "aerots/log_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string_view>

#include "aerots/errors.hpp"

namespace aerots {

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(std::string_view field, const char* what, std::size_t line_no) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        std::ostringstream os;
        os << "bad " << what << " '" << field << "' at line " << line_no;
        throw DataError(os.str());
    }
    return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::vector<std::string> read_header(std::istream& in, const std::filesystem::path& path) {
    std::string header;
    if (!std::getline(in, header)) {
        throw DataError("empty log file: " + path.string());
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const auto fields = split_fields(header);
    if (fields.size() < 4 || fields[0] != "time" || fields[1] != "label" ||
        fields[2] != "anomaly_type") {
        throw DataError("bad header in " + path.string() +
                        " (want time,label,anomaly_type,<channel...>)");
    }
    std::vector<std::string> channels;
    channels.reserve(fields.size() - 3);
    for (std::size_t i = 3; i < fields.size(); ++i) channels.emplace_back(fields[i]);
    return channels;
}

}  // namespace

RawLog read_log_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());

    RawLog log;
    log.log_id = path.stem().string();
    log.channels = read_header(in, path);
    const std::size_t d = log.channels.size();

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != d + 3) {
            std::ostringstream os;
            os << path.string() << ": line " << line_no << " has " << fields.size()
               << " fields, expected " << d + 3;
            throw DataError(os.str());
        }
        const double t = parse_double(fields[0], "time", line_no);
        if (!log.times.empty() && t <= log.times.back()) {
            std::ostringstream os;
            os << path.string() << ": timestamps not strictly increasing at line " << line_no;
            throw DataError(os.str());
        }
        const double label = parse_double(fields[1], "label", line_no);
        if (label != 0.0 && label != 1.0) {
            std::ostringstream os;
            os << path.string() << ": label not in {0,1} at line " << line_no;
            throw DataError(os.str());
        }
        log.times.push_back(t);
        log.labels.push_back(label == 1.0 ? 1 : 0);
        log.anomaly_types.emplace_back(fields[2]);
        for (std::size_t c = 0; c < d; ++c) {
            const auto field = fields[c + 3];
            if (field.empty()) {
                log.values.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                log.values.push_back(parse_double(field, "value", line_no));
            }
        }
    }
    return log;
}

namespace {

void write_contract_csv(const std::filesystem::path& path, const std::vector<std::string>& channels,
                        std::size_t rows, const std::function<double(std::size_t)>& time_of,
                        const std::function<double(std::size_t, std::size_t)>& value_of,
                        const std::vector<std::uint8_t>& labels,
                        const std::vector<std::string>& anomaly_types) {
    std::string out;
    out.reserve(rows * (channels.size() + 3) * 12);
    out += "time,label,anomaly_type";
    for (const auto& c : channels) {
        out += ',';
        out += c;
    }
    out += '\n';
    for (std::size_t t = 0; t < rows; ++t) {
        append_double(out, time_of(t));
        out += labels[t] ? ",1," : ",0,";
        out += anomaly_types[t];
        for (std::size_t c = 0; c < channels.size(); ++c) {
            out += ',';
            const double v = value_of(t, c);
            if (std::isfinite(v)) append_double(out, v);
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace

void write_aligned_csv(const AlignedLog& log, const std::filesystem::path& path) {
    write_contract_csv(
        path, log.channels, log.rows(),
        [&](std::size_t t) { return static_cast<double>(t) / log.rate_hz; },
        [&](std::size_t t, std::size_t c) { return log.at(t, c); }, log.labels,
        log.anomaly_types);
}

void write_raw_csv(const RawLog& log, const std::filesystem::path& path) {
    write_contract_csv(
        path, log.channels, log.rows(), [&](std::size_t t) { return log.times[t]; },
        [&](std::size_t t, std::size_t c) { return log.value_at(t, c); }, log.labels,
        log.anomaly_types);
}

AlignedLog read_aligned_csv(const std::filesystem::path& path) {
    const RawLog raw = read_log_csv(path);
    if (raw.rows() < 2) throw DataError("aligned log needs at least 2 rows: " + path.string());

    AlignedLog log;
    log.log_id = raw.log_id;
    log.channels = raw.channels;
    log.labels = raw.labels;
    log.anomaly_types = raw.anomaly_types;

    // Times are written as t/rate; snap the recovered rate to a 1e-6 Hz grid
    // so integer rates like 10 Hz round-trip exactly.
    const double step = raw.times[1] - raw.times[0];
    if (step <= 0.0) throw DataError("non-positive time step in " + path.string());
    log.rate_hz = std::round(1e6 / step) / 1e6;

    const std::size_t rows = raw.rows();
    const std::size_t cols = raw.channel_count();
    log.data.resize(rows * cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t t = 0; t < rows; ++t) {
            log.data[c * rows + t] = raw.value_at(t, c);
        }
    }
    log.intervals = intervals_from_labels(log.labels, log.anomaly_types);
    return log;
}

}  // namespace aerots
