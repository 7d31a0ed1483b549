#include "aerots/feature_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "aerots/errors.hpp"

namespace aerots::feature_io {

using nlohmann::json;

namespace {
constexpr char kMagic[8] = {'A', 'E', 'R', 'O', 'T', 'S', 'F', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_features(const descriptors::FeatureMatrix& fm, const std::filesystem::path& bin_path,
                    const std::filesystem::path& sidecar_path, const json& extra) {
    std::ofstream f(bin_path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + bin_path.string());
    f.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = kVersion;
    const std::uint64_t rows = fm.rows;
    const std::uint64_t cols = fm.cols;
    f.write(reinterpret_cast<const char*>(&version), sizeof(version));
    f.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    f.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    std::vector<double> column(fm.rows);
    for (std::size_t c = 0; c < fm.cols; ++c) {
        for (std::size_t r = 0; r < fm.rows; ++r) column[r] = fm.at(r, c);
        f.write(reinterpret_cast<const char*>(column.data()),
                static_cast<std::streamsize>(column.size() * sizeof(double)));
    }

    json sidecar;
    sidecar["schema_version"] = 1;
    sidecar["rows"] = fm.rows;
    sidecar["cols"] = fm.cols;
    sidecar["channel_names"] = fm.channel_names;
    json columns = json::array();
    for (const auto& col : fm.columns) {
        columns.push_back(json{{"name", col.name},
                               {"channel", col.channel},
                               {"descriptor", col.descriptor},
                               {"group", descriptors::group_name(col.group())}});
    }
    sidecar["columns"] = std::move(columns);
    for (const auto& [key, value] : extra.items()) sidecar[key] = value;

    std::ofstream sf(sidecar_path, std::ios::binary | std::ios::trunc);
    if (!sf) throw DataError("cannot write " + sidecar_path.string());
    sf << sidecar.dump(1, '\t') << '\n';
}

descriptors::FeatureMatrix read_features(const std::filesystem::path& bin_path,
                                         const std::filesystem::path& sidecar_path,
                                         json* sidecar_out) {
    std::ifstream f(bin_path, std::ios::binary);
    if (!f) throw MissingArtifactError("missing feature file: " + bin_path.string());
    char magic[8];
    std::uint32_t version = 0;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    f.read(magic, sizeof(magic));
    f.read(reinterpret_cast<char*>(&version), sizeof(version));
    f.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    f.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || version != kVersion) {
        throw DataError("bad feature file header: " + bin_path.string());
    }

    descriptors::FeatureMatrix fm;
    fm.rows = rows;
    fm.cols = cols;
    fm.values.resize(rows * cols);
    std::vector<double> column(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        f.read(reinterpret_cast<char*>(column.data()),
               static_cast<std::streamsize>(column.size() * sizeof(double)));
        for (std::size_t r = 0; r < rows; ++r) fm.values[r * cols + c] = column[r];
    }
    if (!f) throw DataError("truncated feature file: " + bin_path.string());

    std::ifstream sf(sidecar_path, std::ios::binary);
    if (!sf) throw MissingArtifactError("missing feature sidecar: " + sidecar_path.string());
    json sidecar;
    try {
        sf >> sidecar;
    } catch (const json::exception& e) {
        throw DataError("bad sidecar JSON: " + sidecar_path.string() + ": " + e.what());
    }
    fm.channel_names = sidecar.at("channel_names").get<std::vector<std::string>>();
    for (const auto& col : sidecar.at("columns")) {
        descriptors::FeatureColumn fc;
        fc.name = col.at("name").get<std::string>();
        fc.channel = col.at("channel").get<std::uint32_t>();
        fc.descriptor = col.at("descriptor").get<std::uint8_t>();
        fm.columns.push_back(std::move(fc));
    }
    if (fm.columns.size() != fm.cols) {
        throw DataError("sidecar column count does not match matrix: " + sidecar_path.string());
    }
    if (sidecar_out) *sidecar_out = std::move(sidecar);
    return fm;
}

void write_features_csv(const descriptors::FeatureMatrix& fm,
                        const std::filesystem::path& path) {
    std::string out;
    for (std::size_t c = 0; c < fm.cols; ++c) {
        if (c) out += ',';
        out += fm.columns[c].name;
    }
    out += '\n';
    char buf[32];
    for (std::size_t r = 0; r < fm.rows; ++r) {
        for (std::size_t c = 0; c < fm.cols; ++c) {
            if (c) out += ',';
            auto res = std::to_chars(buf, buf + sizeof(buf), fm.at(r, c));
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace aerots::feature_io
