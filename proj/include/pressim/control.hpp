#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "pressim/errors.hpp"
#include "pressim/estimator.hpp"
#include "pressim/pressure.hpp"
#include "pressim/sim.hpp"

namespace pressim {

/// Bang-bang force regulation setpoint: three-valued output (lower/hold/raise)
/// switching on a deadband around the target.
struct ForceTarget {
    double target = 0.0;      // N
    double deadband = 0.25;   // N
    double step_size = 0.0005; // m of lift motion per control tick
};

/// Height adjustment for one control tick: -step lowers toward the surface
/// (raising force), +step raises, 0 holds.
inline double force_command(const EstimateFrame& estimate, const AreaFn& area_fn,
                            const ForceTarget& target) {
    const double f = total_force(estimate.pressure, area_fn);
    if (f < target.target - target.deadband)
        return -target.step_size;
    if (f > target.target + target.deadband)
        return +target.step_size;
    return 0.0;
}

struct IbvsConfig {
    double gain = 1.0;                         // lambda, 1/s
    Eigen::Matrix2d jacobian = Eigen::Matrix2d::Identity(); // image px per actuator m
    Eigen::Vector2d target{0.0, 0.0};          // T, image px (x, y)
    double stop_radius = 3.0;                  // px
    double min_peak_value = kContactThresholdPa; // Pa, maxima below this don't count
    double min_peak_separation = 15.0;         // px, FingertipMean blob separation
};

enum class MaximaMode { Single, FingertipMean };

namespace detail {

// Subpixel peak position: pressure-weighted centroid of the 3x3 patch around
// an integer maximum. Returns (x, y) = (col, row).
inline Eigen::Vector2d refine_peak(const PressureImage& p, const Peak& peak) {
    double sum = 0.0, sx = 0.0, sy = 0.0;
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            const int i = peak.row + di, j = peak.col + dj;
            if (i < 0 || j < 0 || i >= p.rows || j >= p.cols)
                continue;
            const double v = p.at(i, j);
            sum += v;
            sx += v * j;
            sy += v * i;
        }
    }
    if (sum <= 0.0)
        return {static_cast<double>(peak.col), static_cast<double>(peak.row)};
    return {sx / sum, sy / sum};
}

} // namespace detail

/// Measured feature point M: the highest pressure maximum (Single) or the
/// mean position of the two highest maxima (FingertipMean).
inline Eigen::Vector2d ibvs_feature(const EstimateFrame& estimate, const IbvsConfig& cfg,
                                    MaximaMode mode) {
    const auto peaks =
        local_maxima(estimate.pressure, cfg.min_peak_value, cfg.min_peak_separation);
    if (mode == MaximaMode::Single) {
        if (peaks.empty())
            throw ContactLost("ibvs_feature: no pressure maximum above threshold");
        return detail::refine_peak(estimate.pressure, peaks[0]);
    }
    if (peaks.size() < 2)
        throw ContactLost("ibvs_feature: fewer than two fingertip maxima");
    const Eigen::Vector2d a = detail::refine_peak(estimate.pressure, peaks[0]);
    const Eigen::Vector2d b = detail::refine_peak(estimate.pressure, peaks[1]);
    return 0.5 * (a + b);
}

/// Image-space error E = T - M, in pixels.
inline Eigen::Vector2d ibvs_error(const EstimateFrame& estimate, const IbvsConfig& cfg,
                                  MaximaMode mode) {
    return cfg.target - ibvs_feature(estimate, cfg, mode);
}

/// Pseudo-inverse with singular values below 1e-8 * sigma_max zeroed.
inline Eigen::Matrix2d pinv(const Eigen::Matrix2d& m) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Vector2d s = svd.singularValues();
    const double cutoff = 1e-8 * s(0);
    Eigen::Matrix2d sinv = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 2; ++k)
        if (s(k) > cutoff && s(k) > 0.0)
            sinv(k, k) = 1.0 / s(k);
    return svd.matrixV() * sinv * svd.matrixU().transpose();
}

/// Actuator rates q_dot = lambda * J^+ * E.
inline Eigen::Vector2d ibvs_command(const Eigen::Vector2d& error, const IbvsConfig& cfg) {
    return cfg.gain * pinv(cfg.jacobian) * error;
}

enum class GraspPhase : uint8_t {
    Approach,
    ContactForce,
    ServoToCentroid,
    Close,
    Lift,
    Hold,
    Success,
    Failure
};

enum class FailureReason : uint8_t { None, TorqueLimit, Dropped, Timeout, ContactLost };

inline const char* grasp_phase_name(GraspPhase p) {
    switch (p) {
    case GraspPhase::Approach: return "Approach";
    case GraspPhase::ContactForce: return "ContactForce";
    case GraspPhase::ServoToCentroid: return "ServoToCentroid";
    case GraspPhase::Close: return "Close";
    case GraspPhase::Lift: return "Lift";
    case GraspPhase::Hold: return "Hold";
    case GraspPhase::Success: return "Success";
    case GraspPhase::Failure: return "Failure";
    }
    return "?";
}

inline const char* failure_reason_name(FailureReason r) {
    switch (r) {
    case FailureReason::None: return "None";
    case FailureReason::TorqueLimit: return "TorqueLimit";
    case FailureReason::Dropped: return "Dropped";
    case FailureReason::Timeout: return "Timeout";
    case FailureReason::ContactLost: return "ContactLost";
    }
    return "?";
}

struct GraspConfig {
    ForceTarget force{2.0, 0.25, 0.0005}; // set force held during servoing
    IbvsConfig ibvs;                      // target overridden by the object centroid
    AreaFn area_fn;                       // px -> m^2 for force integration
    double approach_step = 0.001;         // m lowered per tick before contact
    double contact_threshold = kContactThresholdPa;
    double lift_height = 0.05; // m
    double lift_rate = 0.02;   // m/s
    double hold_time = 5.0;    // s
    double timeout = 60.0;     // s
    int contact_lost_grace = 3; // ticks of missing maxima tolerated while servoing
};

struct GraspInputs {
    EstimateFrame estimate;
    Eigen::Vector2d object_centroid_px{0.0, 0.0};
    bool held = false;
    bool torque_ok = true;
    double aperture = 1.0;
    double dt = 1.0 / 12.0;
};

struct GraspOutput {
    GraspPhase phase = GraspPhase::Approach;
    MoveCommand command;
    bool request_close = false; // set on the tick that enters Close
};

/// The grasp state machine: lower to contact, regulate force, servo the
/// fingertip pressure pair to the object centroid, close, lift, and hold.
/// Terminal phases emit no commands; stepping a terminal machine is a logic
/// error.
class GraspController {
public:
    explicit GraspController(GraspConfig cfg) : cfg_(std::move(cfg)) {}

    GraspPhase phase() const { return phase_; }
    FailureReason failure_reason() const { return reason_; }
    bool terminal() const {
        return phase_ == GraspPhase::Success || phase_ == GraspPhase::Failure;
    }
    double last_error_norm() const { return last_error_norm_; }

    GraspOutput step(const GraspInputs& in) {
        if (terminal())
            throw std::logic_error("GraspController::step called after terminal phase");
        GraspOutput out;
        elapsed_ += in.dt;

        if (!in.torque_ok) {
            fail(FailureReason::TorqueLimit);
            out.phase = phase_;
            return out;
        }
        if (elapsed_ > cfg_.timeout) {
            fail(FailureReason::Timeout);
            out.phase = phase_;
            return out;
        }

        switch (phase_) {
        case GraspPhase::Approach:
            if (any_contact(in.estimate.pressure, cfg_.contact_threshold)) {
                phase_ = GraspPhase::ContactForce;
            } else {
                out.command.d_lift_z = -cfg_.approach_step;
            }
            break;
        case GraspPhase::ContactForce: {
            const double dz = force_command(in.estimate, cfg_.area_fn, cfg_.force);
            out.command.d_lift_z = dz;
            if (dz == 0.0)
                phase_ = GraspPhase::ServoToCentroid;
            break;
        }
        case GraspPhase::ServoToCentroid: {
            out.command.d_lift_z = force_command(in.estimate, cfg_.area_fn, cfg_.force);
            IbvsConfig ibvs = cfg_.ibvs;
            ibvs.target = in.object_centroid_px;
            try {
                const Eigen::Vector2d e = ibvs_error(in.estimate, ibvs, MaximaMode::FingertipMean);
                lost_ticks_ = 0;
                last_error_norm_ = e.norm();
                if (last_error_norm_ <= ibvs.stop_radius) {
                    phase_ = GraspPhase::Close;
                    out.request_close = true;
                } else {
                    const Eigen::Vector2d qdot = ibvs_command(e, ibvs);
                    out.command.d_base_xy = qdot * in.dt;
                }
            } catch (const ContactLost&) {
                if (++lost_ticks_ > cfg_.contact_lost_grace)
                    fail(FailureReason::ContactLost);
            }
            break;
        }
        case GraspPhase::Close:
            if (in.aperture <= 1e-9)
                phase_ = GraspPhase::Lift;
            break;
        case GraspPhase::Lift:
            out.command.d_lift_z = cfg_.lift_rate * in.dt;
            lifted_ += cfg_.lift_rate * in.dt;
            if (lifted_ >= cfg_.lift_height)
                phase_ = GraspPhase::Hold;
            break;
        case GraspPhase::Hold:
            if (!in.held) {
                fail(FailureReason::Dropped);
                break;
            }
            held_for_ += in.dt;
            if (held_for_ >= cfg_.hold_time)
                phase_ = GraspPhase::Success;
            break;
        case GraspPhase::Success:
        case GraspPhase::Failure:
            break;
        }

        if (terminal())
            out.command = MoveCommand{};
        out.phase = phase_;
        return out;
    }

private:
    void fail(FailureReason r) {
        phase_ = GraspPhase::Failure;
        reason_ = r;
    }

    GraspConfig cfg_;
    GraspPhase phase_ = GraspPhase::Approach;
    FailureReason reason_ = FailureReason::None;
    double elapsed_ = 0.0;
    double lifted_ = 0.0;
    double held_for_ = 0.0;
    double last_error_norm_ = 0.0;
    int lost_ticks_ = 0;
};

} // namespace pressim
