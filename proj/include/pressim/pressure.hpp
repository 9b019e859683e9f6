#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pressim/errors.hpp"

namespace pressim {

enum class Frame : uint8_t { SensorPlane = 0, ImagePlane = 1 };

/// Dense grid of pressure values in Pa. The universal currency between the
/// simulator, estimators, metrics, and controllers. Values are non-negative.
///
/// Coordinate convention per frame:
///   SensorPlane: metric coordinates, pixel (i,j) center at
///                ((j+0.5)*pitch_x, (i+0.5)*pitch_y) meters.
///   ImagePlane:  pixel coordinates, pixel (i,j) center at (j, i).
///                pitch_x/pitch_y are 0 (area comes from a homography).
struct PressureImage {
    int rows = 0;
    int cols = 0;
    std::vector<double> data; // row-major, Pa
    double pitch_x = 0.0;     // m/px, 0 when frame == ImagePlane
    double pitch_y = 0.0;
    Frame frame = Frame::SensorPlane;
    double timestamp = 0.0; // s

    static PressureImage zeros(int rows, int cols, double pitch_x, double pitch_y,
                               Frame frame = Frame::SensorPlane, double t = 0.0) {
        PressureImage p;
        p.rows = rows;
        p.cols = cols;
        p.data.assign(static_cast<size_t>(rows) * cols, 0.0);
        p.pitch_x = pitch_x;
        p.pitch_y = pitch_y;
        p.frame = frame;
        p.timestamp = t;
        return p;
    }

    double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    // Pixel center in frame coordinates (meters for SensorPlane, px for ImagePlane).
    std::pair<double, double> pixel_center(int i, int j) const {
        if (frame == Frame::SensorPlane)
            return {(j + 0.5) * pitch_x, (i + 0.5) * pitch_y};
        return {static_cast<double>(j), static_cast<double>(i)};
    }

    bool same_shape(const PressureImage& o) const { return rows == o.rows && cols == o.cols; }
};

/// Log-spaced quantization schema: n_bins total bins, bin 0 reserved for zero
/// pressure, bins 1..n_bins-1 spaced evenly in log space over [p_min, p_max].
struct BinSchema {
    int n_bins = 9;        // 8 log-spaced bins + zero bin
    double p_min = 1000.0; // Pa, lower edge of bin 1
    double p_max = 40000.0;

    int value_bins() const { return n_bins - 1; }

    // value_bins()+1 edges, strictly increasing, edges[0] == p_min.
    std::vector<double> edges() const {
        const int nb = value_bins();
        std::vector<double> e(nb + 1);
        const double ratio = std::log(p_max / p_min);
        for (int k = 0; k <= nb; ++k)
            e[k] = p_min * std::exp(ratio * static_cast<double>(k) / nb);
        e[0] = p_min;
        e[nb] = p_max;
        return e;
    }

    // Representative value for a bin: 0 for the zero bin, geometric mean of the
    // bin edges otherwise.
    double representative(int bin) const {
        if (bin <= 0)
            return 0.0;
        const auto e = edges();
        const int k = std::min(bin, value_bins());
        return std::sqrt(e[k - 1] * e[k]);
    }

    bool valid() const { return n_bins >= 2 && p_min > 0.0 && p_min < p_max; }
};

/// Bin-index grid carrying the same geometry metadata as a PressureImage.
struct BinGrid {
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> bins;
    double pitch_x = 0.0;
    double pitch_y = 0.0;
    Frame frame = Frame::SensorPlane;
    double timestamp = 0.0;
};

using AreaFn = std::function<double(int, int)>; // (row, col) -> m^2

inline AreaFn uniform_area(double pitch_x, double pitch_y) {
    const double a = pitch_x * pitch_y;
    return [a](int, int) { return a; };
}

/// Total normal force: pressure integrated over area, F = sum p[i,j] * area(i,j).
inline double total_force(const PressureImage& p, const AreaFn& area_fn) {
    double f = 0.0;
    for (int i = 0; i < p.rows; ++i)
        for (int j = 0; j < p.cols; ++j)
            f += p.at(i, j) * area_fn(i, j);
    return f;
}

/// Sensor-frame convenience overload using the image's own taxel pitch.
inline double total_force(const PressureImage& p) {
    if (p.frame != Frame::SensorPlane)
        throw FrameMismatch("total_force: image-frame pressure needs a homography-derived area_fn");
    double f = 0.0;
    const double a = p.pitch_x * p.pitch_y;
    for (double v : p.data)
        f += v * a;
    return f;
}

constexpr double kContactThresholdPa = 1000.0; // 1.0 kPa contact threshold

/// Binary contact mask: strictly greater than threshold.
inline std::vector<uint8_t> contact_mask(const PressureImage& p,
                                         double threshold = kContactThresholdPa) {
    std::vector<uint8_t> mask(p.data.size());
    for (size_t k = 0; k < p.data.size(); ++k)
        mask[k] = p.data[k] > threshold ? 1 : 0;
    return mask;
}

inline bool any_contact(const PressureImage& p, double threshold = kContactThresholdPa) {
    for (double v : p.data)
        if (v > threshold)
            return true;
    return false;
}

inline uint8_t quantize_value(double v, const BinSchema& s, const std::vector<double>& edges) {
    if (v < edges[0])
        return 0;
    if (v >= s.p_max)
        return static_cast<uint8_t>(s.value_bins());
    // bin k covers [edges[k-1], edges[k])
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    return static_cast<uint8_t>(it - edges.begin());
}

inline BinGrid quantize(const PressureImage& p, const BinSchema& s) {
    BinGrid g;
    g.rows = p.rows;
    g.cols = p.cols;
    g.pitch_x = p.pitch_x;
    g.pitch_y = p.pitch_y;
    g.frame = p.frame;
    g.timestamp = p.timestamp;
    g.bins.resize(p.data.size());
    const auto edges = s.edges();
    for (size_t k = 0; k < p.data.size(); ++k)
        g.bins[k] = quantize_value(p.data[k], s, edges);
    return g;
}

inline PressureImage dequantize(const BinGrid& g, const BinSchema& s) {
    PressureImage p = PressureImage::zeros(g.rows, g.cols, g.pitch_x, g.pitch_y, g.frame, g.timestamp);
    std::vector<double> reps(static_cast<size_t>(s.n_bins));
    for (int b = 0; b < s.n_bins; ++b)
        reps[static_cast<size_t>(b)] = s.representative(b);
    for (size_t k = 0; k < g.bins.size(); ++k)
        p.data[k] = reps[g.bins[k]];
    return p;
}

struct Peak {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Local maxima above min_value, sorted by value descending, with greedy
/// non-maximum suppression at min_separation pixels (Euclidean). A pixel
/// qualifies if it is >= all of its 8 neighbors; plateau ties are broken by
/// lowest (row, col) lexicographic order.
inline std::vector<Peak> local_maxima(const PressureImage& p, double min_value,
                                      double min_separation) {
    std::vector<Peak> cands;
    for (int i = 0; i < p.rows; ++i) {
        for (int j = 0; j < p.cols; ++j) {
            const double v = p.at(i, j);
            if (!(v > min_value))
                continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0)
                        continue;
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= p.rows || nj >= p.cols)
                        continue;
                    if (p.at(ni, nj) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max)
                cands.push_back({i, j, v});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Peak& a, const Peak& b) {
        if (a.value != b.value)
            return a.value > b.value;
        if (a.row != b.row)
            return a.row < b.row;
        return a.col < b.col;
    });
    std::vector<Peak> out;
    const double sep2 = min_separation * min_separation;
    for (const Peak& c : cands) {
        bool keep = true;
        for (const Peak& o : out) {
            const double dr = c.row - o.row, dc = c.col - o.col;
            if (dr * dr + dc * dc < sep2) {
                keep = false;
                break;
            }
        }
        if (keep)
            out.push_back(c);
    }
    return out;
}

/// Pressure-weighted centroid of pixel centers, in frame coordinates.
inline std::pair<double, double> center_of_pressure(const PressureImage& p) {
    double sum = 0.0, sx = 0.0, sy = 0.0;
    for (int i = 0; i < p.rows; ++i) {
        for (int j = 0; j < p.cols; ++j) {
            const double v = p.at(i, j);
            if (v <= 0.0)
                continue;
            const auto [x, y] = p.pixel_center(i, j);
            sum += v;
            sx += v * x;
            sy += v * y;
        }
    }
    if (sum <= 0.0)
        throw NoContact("center_of_pressure: no pressure in image");
    return {sx / sum, sy / sum};
}

} // namespace pressim
