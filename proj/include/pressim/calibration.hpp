#pragma once

#include <fstream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "pressim/errors.hpp"
#include "pressim/geometry.hpp"

namespace pressim {

inline const char* frame_name(Frame f) {
    return f == Frame::SensorPlane ? "sensor_plane" : "image_plane";
}

inline Frame frame_from_name(const std::string& s) {
    if (s == "sensor_plane")
        return Frame::SensorPlane;
    if (s == "image_plane")
        return Frame::ImagePlane;
    throw Error("unknown frame name: " + s);
}

/// Calibration file: JSON with named homographies
/// {name, src_frame, dst_frame, h: 9 numbers row-major}.
inline void write_calibration(const std::string& path,
                              const std::map<std::string, Homography>& homographies) {
    nlohmann::ordered_json j;
    j["homographies"] = nlohmann::ordered_json::array();
    for (const auto& [name, h] : homographies) {
        nlohmann::ordered_json e;
        e["name"] = name;
        e["src_frame"] = frame_name(h.src_frame);
        e["dst_frame"] = frame_name(h.dst_frame);
        e["h"] = nlohmann::ordered_json::array();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                e["h"].push_back(h.h(r, c));
        j["homographies"].push_back(e);
    }
    std::ofstream f(path);
    if (!f)
        throw Error("write_calibration: cannot open " + path);
    f << j.dump(2) << "\n";
}

inline std::map<std::string, Homography> read_calibration(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error("read_calibration: cannot open " + path);
    nlohmann::json j;
    f >> j;
    std::map<std::string, Homography> out;
    for (const auto& e : j.at("homographies")) {
        Homography h;
        h.src_frame = frame_from_name(e.at("src_frame").get<std::string>());
        h.dst_frame = frame_from_name(e.at("dst_frame").get<std::string>());
        const auto& arr = e.at("h");
        if (arr.size() != 9)
            throw Error("read_calibration: homography must have 9 entries");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                h.h(r, c) = arr[3 * r + c].get<double>();
        out[e.at("name").get<std::string>()] = h;
    }
    return out;
}

} // namespace pressim
