#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include "pressim/errors.hpp"
#include "pressim/geometry.hpp"
#include "pressim/pressure.hpp"
#include "pressim/sim.hpp"

namespace pressim {

enum class EstimateSource : uint8_t { Oracle = 0, NoisyQuantized = 1, Replay = 2 };

/// Timestamped estimated pressure in image space, plus provenance.
struct EstimateFrame {
    PressureImage pressure; // frame == ImagePlane
    double latency = 0.0;   // s
    EstimateSource source = EstimateSource::Oracle;
};

/// Ground-truth substitute for a learned estimator: the simulated sensor
/// reading warped into image space.
inline EstimateFrame oracle_estimate(const WorldState& world, const GripperModel& model,
                                     const SensorSpec& spec, const Homography& h, int dst_rows,
                                     int dst_cols) {
    if (h.src_frame != Frame::SensorPlane || h.dst_frame != Frame::ImagePlane)
        throw FrameMismatch("oracle_estimate: homography must map sensor plane to image plane");
    EstimateFrame e;
    e.pressure = warp_pressure(render_pressure(world, model, spec), h, dst_rows, dst_cols);
    e.pressure.frame = Frame::ImagePlane;
    e.latency = 0.0;
    e.source = EstimateSource::Oracle;
    return e;
}

/// Degradations emulating a learned estimator: magnitude bias, missed light
/// contact, quantization through the bin schema, and rigid spatial jitter.
struct NoiseConfig {
    BinSchema quantize;               // applied when quantize_enabled
    bool quantize_enabled = true;
    double contact_miss_below = 1500.0; // Pa: blobs peaking below this vanish
    double gain_bias = 0.25;            // fraction, estimate = oracle * (1 + gain_bias)
    int spatial_jitter = 1;             // px, rigid shift drawn per frame
    uint64_t seed = 0;
};

namespace detail {

// Zero every 4-connected support component whose peak is below the threshold.
inline void suppress_light_blobs(PressureImage& p, double threshold) {
    if (threshold <= 0.0)
        return;
    const int rows = p.rows, cols = p.cols;
    std::vector<int> label(p.data.size(), -1);
    std::vector<size_t> stack;
    int next = 0;
    for (size_t s = 0; s < p.data.size(); ++s) {
        if (p.data[s] <= 0.0 || label[s] >= 0)
            continue;
        const int id = next++;
        double peak = 0.0;
        std::vector<size_t> members;
        stack.assign(1, s);
        label[s] = id;
        while (!stack.empty()) {
            const size_t k = stack.back();
            stack.pop_back();
            members.push_back(k);
            peak = std::max(peak, p.data[k]);
            const int i = static_cast<int>(k) / cols;
            const int j = static_cast<int>(k) % cols;
            const int ni[4] = {i - 1, i + 1, i, i};
            const int nj[4] = {j, j, j - 1, j + 1};
            for (int q = 0; q < 4; ++q) {
                if (ni[q] < 0 || nj[q] < 0 || ni[q] >= rows || nj[q] >= cols)
                    continue;
                const size_t nk = static_cast<size_t>(ni[q]) * cols + nj[q];
                if (p.data[nk] > 0.0 && label[nk] < 0) {
                    label[nk] = id;
                    stack.push_back(nk);
                }
            }
        }
        if (peak < threshold)
            for (size_t k : members)
                p.data[k] = 0.0;
    }
}

inline PressureImage shift_image(const PressureImage& p, int di, int dj) {
    if (di == 0 && dj == 0)
        return p;
    PressureImage out = PressureImage::zeros(p.rows, p.cols, p.pitch_x, p.pitch_y, p.frame,
                                             p.timestamp);
    for (int i = 0; i < p.rows; ++i) {
        const int si = i - di;
        if (si < 0 || si >= p.rows)
            continue;
        for (int j = 0; j < p.cols; ++j) {
            const int sj = j - dj;
            if (sj < 0 || sj >= p.cols)
                continue;
            out.at(i, j) = p.at(si, sj);
        }
    }
    return out;
}

} // namespace detail

inline EstimateFrame noisy_estimate(const WorldState& world, const GripperModel& model,
                                    const SensorSpec& spec, const Homography& h, int dst_rows,
                                    int dst_cols, const NoiseConfig& noise) {
    EstimateFrame e = oracle_estimate(world, model, spec, h, dst_rows, dst_cols);
    e.source = EstimateSource::NoisyQuantized;

    if (noise.gain_bias != 0.0)
        for (double& v : e.pressure.data)
            v *= 1.0 + noise.gain_bias;

    detail::suppress_light_blobs(e.pressure, noise.contact_miss_below);

    if (noise.quantize_enabled)
        e.pressure = dequantize(quantize(e.pressure, noise.quantize), noise.quantize);

    if (noise.spatial_jitter > 0) {
        // Seed mixed with the frame time so jitter varies per frame but is
        // reproducible for identical inputs.
        uint64_t bits;
        static_assert(sizeof(bits) == sizeof(world.time));
        std::memcpy(&bits, &world.time, sizeof(bits));
        std::mt19937_64 rng(noise.seed ^ (bits * 0x9e3779b97f4a7c15ULL + 1));
        std::uniform_int_distribution<int> d(-noise.spatial_jitter, noise.spatial_jitter);
        const int di = d(rng), dj = d(rng);
        e.pressure = detail::shift_image(e.pressure, di, dj);
    }
    return e;
}

/// Zero-order hold over a recorded sequence: the frame with the latest
/// timestamp <= t. Throws OutOfRange before the first frame.
inline EstimateFrame replay_estimate(const std::vector<PressureImage>& frames, double t) {
    if (frames.empty())
        throw OutOfRange("replay_estimate: empty manifest");
    const PressureImage* best = nullptr;
    for (const auto& f : frames) {
        if (f.timestamp <= t && (!best || f.timestamp > best->timestamp))
            best = &f;
    }
    if (!best)
        throw OutOfRange("replay_estimate: time precedes first frame");
    EstimateFrame e;
    e.pressure = *best;
    e.pressure.frame = Frame::ImagePlane;
    e.latency = t - best->timestamp;
    e.source = EstimateSource::Replay;
    return e;
}

} // namespace pressim
