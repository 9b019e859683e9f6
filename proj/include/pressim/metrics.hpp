#pragma once

#include <cmath>
#include <vector>

#include "pressim/errors.hpp"
#include "pressim/pressure.hpp"

namespace pressim {

/// Aggregated evaluation of an estimated pressure sequence against ground
/// truth. Per-frame IoUs and MAE are macro-averaged over frames; temporal
/// accuracy is computed over the whole sequence.
struct MetricsReport {
    double temporal_accuracy = 0.0; // [0,1]
    double contact_iou = 0.0;       // [0,1]
    double volumetric_iou = 0.0;    // [0,1]
    double mae = 0.0;               // Pa
    int n_frames = 0;
    double threshold = kContactThresholdPa; // Pa
    // Conventions recorded for reproducibility.
    const char* averaging = "macro";
    const char* empty_iou_convention = "both-empty := 1.0";
};

/// Fraction of frames where estimated and ground-truth contact presence agree.
inline double temporal_accuracy(const std::vector<PressureImage>& gt_seq,
                                const std::vector<PressureImage>& est_seq,
                                double threshold = kContactThresholdPa) {
    if (gt_seq.size() != est_seq.size() || gt_seq.empty())
        throw LengthMismatch("temporal_accuracy: sequences must be aligned and non-empty");
    int agree = 0;
    for (size_t k = 0; k < gt_seq.size(); ++k)
        if (any_contact(gt_seq[k], threshold) == any_contact(est_seq[k], threshold))
            ++agree;
    return static_cast<double>(agree) / static_cast<double>(gt_seq.size());
}

/// IoU of binary contact masks thresholded at 1.0 kPa. Both masks empty -> 1.0.
inline double contact_iou(const PressureImage& gt, const PressureImage& est,
                          double threshold = kContactThresholdPa) {
    if (!gt.same_shape(est))
        throw ShapeMismatch("contact_iou: shape mismatch");
    long long inter = 0, uni = 0;
    for (size_t k = 0; k < gt.data.size(); ++k) {
        const bool a = gt.data[k] > threshold;
        const bool b = est.data[k] > threshold;
        inter += (a && b) ? 1 : 0;
        uni += (a || b) ? 1 : 0;
    }
    if (uni == 0)
        return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Volumetric IoU: pressure images viewed as 3D volumes,
/// sum min(P, P_hat) / sum max(P, P_hat). Both all-zero -> 1.0.
inline double volumetric_iou(const PressureImage& gt, const PressureImage& est) {
    if (!gt.same_shape(est))
        throw ShapeMismatch("volumetric_iou: shape mismatch");
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < gt.data.size(); ++k) {
        num += std::min(gt.data[k], est.data[k]);
        den += std::max(gt.data[k], est.data[k]);
    }
    if (den == 0.0)
        return 1.0;
    return num / den;
}

/// Mean absolute error across all pixels, in Pa.
inline double mae(const PressureImage& gt, const PressureImage& est) {
    if (!gt.same_shape(est))
        throw ShapeMismatch("mae: shape mismatch");
    if (gt.data.empty())
        return 0.0;
    double s = 0.0;
    for (size_t k = 0; k < gt.data.size(); ++k)
        s += std::abs(gt.data[k] - est.data[k]);
    return s / static_cast<double>(gt.data.size());
}

inline MetricsReport evaluate_sequence(const std::vector<PressureImage>& gt_seq,
                                       const std::vector<PressureImage>& est_seq,
                                       double threshold = kContactThresholdPa) {
    if (gt_seq.size() != est_seq.size() || gt_seq.empty())
        throw LengthMismatch("evaluate_sequence: sequences must be aligned and non-empty");
    MetricsReport r;
    r.n_frames = static_cast<int>(gt_seq.size());
    r.threshold = threshold;
    r.temporal_accuracy = temporal_accuracy(gt_seq, est_seq, threshold);
    double ciou = 0.0, viou = 0.0, err = 0.0;
    for (size_t k = 0; k < gt_seq.size(); ++k) {
        ciou += contact_iou(gt_seq[k], est_seq[k], threshold);
        viou += volumetric_iou(gt_seq[k], est_seq[k]);
        err += mae(gt_seq[k], est_seq[k]);
    }
    r.contact_iou = ciou / r.n_frames;
    r.volumetric_iou = viou / r.n_frames;
    r.mae = err / r.n_frames;
    return r;
}

} // namespace pressim
