#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pressim/errors.hpp"
#include "pressim/pressure.hpp"

namespace pressim {

static_assert(std::endian::native == std::endian::little,
              "pressure frame files are little-endian; big-endian hosts are unsupported");

// Pressure frame file: 32-byte header followed by rows*cols little-endian
// f32 values (Pa), row-major.
//   offset  0: magic "PRSF"
//   offset  4: version u16
//   offset  6: rows u16
//   offset  8: cols u16
//   offset 10: frame tag u8 (0 sensor plane, 1 image plane)
//   offset 11: reserved u8[5]
//   offset 16: pitch_x f32 (m)
//   offset 20: pitch_y f32 (m)
//   offset 24: timestamp f64 (s)
constexpr uint16_t kPressureFrameVersion = 1;

inline void write_pressure_frame(const std::string& path, const PressureImage& p) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("write_pressure_frame: cannot open " + path);
    char header[32] = {};
    std::memcpy(header, "PRSF", 4);
    const uint16_t version = kPressureFrameVersion;
    const uint16_t rows = static_cast<uint16_t>(p.rows);
    const uint16_t cols = static_cast<uint16_t>(p.cols);
    const uint8_t frame = static_cast<uint8_t>(p.frame);
    const float px = static_cast<float>(p.pitch_x);
    const float py = static_cast<float>(p.pitch_y);
    const double ts = p.timestamp;
    std::memcpy(header + 4, &version, 2);
    std::memcpy(header + 6, &rows, 2);
    std::memcpy(header + 8, &cols, 2);
    std::memcpy(header + 10, &frame, 1);
    std::memcpy(header + 16, &px, 4);
    std::memcpy(header + 20, &py, 4);
    std::memcpy(header + 24, &ts, 8);
    f.write(header, sizeof(header));
    std::vector<float> vals(p.data.begin(), p.data.end());
    f.write(reinterpret_cast<const char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(float)));
    if (!f)
        throw Error("write_pressure_frame: write failed for " + path);
}

inline PressureImage read_pressure_frame(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("read_pressure_frame: cannot open " + path);
    char header[32];
    f.read(header, sizeof(header));
    if (!f || std::memcmp(header, "PRSF", 4) != 0)
        throw Error("read_pressure_frame: bad magic in " + path);
    uint16_t version, rows, cols;
    uint8_t frame;
    float px, py;
    double ts;
    std::memcpy(&version, header + 4, 2);
    std::memcpy(&rows, header + 6, 2);
    std::memcpy(&cols, header + 8, 2);
    std::memcpy(&frame, header + 10, 1);
    std::memcpy(&px, header + 16, 4);
    std::memcpy(&py, header + 20, 4);
    std::memcpy(&ts, header + 24, 8);
    if (version != kPressureFrameVersion)
        throw Error("read_pressure_frame: unsupported version in " + path);
    PressureImage p = PressureImage::zeros(rows, cols, px, py, static_cast<Frame>(frame), ts);
    std::vector<float> vals(p.data.size());
    f.read(reinterpret_cast<char*>(vals.data()),
           static_cast<std::streamsize>(vals.size() * sizeof(float)));
    if (!f)
        throw Error("read_pressure_frame: truncated file " + path);
    for (size_t k = 0; k < vals.size(); ++k)
        p.data[k] = vals[k];
    return p;
}

struct ManifestEntry {
    std::string file;
    double timestamp = 0.0;
};

/// Sequence manifest: JSON list of frame files with timestamps, sorted by time.
inline void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    nlohmann::ordered_json j;
    j["frames"] = nlohmann::ordered_json::array();
    for (const auto& e : entries)
        j["frames"].push_back({{"file", e.file}, {"timestamp", e.timestamp}});
    std::ofstream f(path);
    if (!f)
        throw Error("write_manifest: cannot open " + path);
    f << j.dump(2) << "\n";
}

inline std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error("read_manifest: cannot open " + path);
    nlohmann::json j;
    f >> j;
    std::vector<ManifestEntry> out;
    for (const auto& e : j.at("frames"))
        out.push_back({e.at("file").get<std::string>(), e.at("timestamp").get<double>()});
    return out;
}

/// Load every frame named by a manifest, resolving paths relative to the
/// manifest's directory.
inline std::vector<PressureImage> load_sequence(const std::string& manifest_path) {
    const auto entries = read_manifest(manifest_path);
    std::string dir;
    if (const auto slash = manifest_path.find_last_of('/'); slash != std::string::npos)
        dir = manifest_path.substr(0, slash + 1);
    std::vector<PressureImage> seq;
    seq.reserve(entries.size());
    for (const auto& e : entries) {
        const std::string p = (!e.file.empty() && e.file.front() == '/') ? e.file : dir + e.file;
        seq.push_back(read_pressure_frame(p));
        seq.back().timestamp = e.timestamp;
    }
    return seq;
}

} // namespace pressim
