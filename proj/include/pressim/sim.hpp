#pragma once

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pressim/errors.hpp"
#include "pressim/geometry.hpp"
#include "pressim/pressure.hpp"

namespace pressim {

/// Compliant two-fingertip gripper. The lateral compliance default encodes
/// the 4 cm deflection under 5 N lateral load.
struct GripperModel {
    double fingertip_radius = 0.012;        // m, also the contact patch radius
    double finger_separation_open = 0.06;   // m between tip centers, aperture = 1
    double finger_separation_closed = 0.0;  // m, aperture = 0
    double normal_stiffness = 2e6;          // Pa per m of penetration
    double lateral_compliance = 0.008;      // m/N (4 cm at 5 N)
    double friction_mu = 0.6;
    double max_deflection = 0.05;           // m
    double normal_force_limit = 15.0;       // N total, beyond this the actuator trips
    double close_duration = 1.0;            // s for the aperture ramp in attempt_close
    double capture_radius = 0.005;          // m, slack around the closing line
    bool single_tip = false;                // rotated pose: only tip 0 touches the plane

    double separation(double aperture) const {
        return finger_separation_closed +
               aperture * (finger_separation_open - finger_separation_closed);
    }

    // Closed-form total force of one tip's paraboloid footprint:
    // integral of k*delta*(1 - (r/r_c)^2) over the disk = k*delta*pi*r_c^2/2.
    double tip_force(double penetration) const {
        if (penetration <= 0.0)
            return 0.0;
        return normal_stiffness * penetration * M_PI * fingertip_radius * fingertip_radius / 2.0;
    }

    // Elastic lateral deflection under a lateral load, capped at max_deflection.
    double lateral_deflection(double lateral_force) const {
        return std::min(lateral_compliance * std::abs(lateral_force), max_deflection);
    }

    // Stick limit: deflection saturates where the spring force reaches mu * F_n.
    double deflection_limit(double normal_force) const {
        return std::min(lateral_compliance * friction_mu * normal_force, max_deflection);
    }
};

struct GripperState {
    Eigen::Vector2d base_xy{0.0, 0.0}; // commanded planar position, m
    double lift_z = 0.05;              // height of undeformed tips above plane, m
    double aperture = 1.0;             // 1 = open, 0 = closed
    std::array<Eigen::Vector2d, 2> tip_deflection{Eigen::Vector2d::Zero(),
                                                  Eigen::Vector2d::Zero()};
    std::array<bool, 2> tip_contact{false, false};

    double penetration() const { return std::max(0.0, -lift_z); }
};

struct SimObject {
    std::string name;
    double length = 0.01, width = 0.01, height = 0.001; // m (footprint L x W x H)
    double x = 0.0, y = 0.0, theta = 0.0;               // pose on the plane
    bool held = false;
};

/// Base-motion corruption: multiplicative bias plus per-step noise, modeling
/// wheel slip. Noise is applied only while the base is commanded to move.
struct DriftModel {
    double bias = 0.05;      // fraction of commanded motion
    double noise_std = 1e-4; // m per step
    uint64_t seed = 0;
};

struct WorldState {
    GripperState gripper;
    std::vector<SimObject> objects;
    DriftModel drift;
    std::mt19937_64 rng;
    double time = 0.0;
    bool closing = false; // aperture ramp from attempt_close in progress

    explicit WorldState(const DriftModel& d = DriftModel{}) : drift(d), rng(d.seed) {}
};

struct MoveCommand {
    Eigen::Vector2d d_base_xy{0.0, 0.0}; // m this step
    double d_lift_z = 0.0;               // m this step
    double d_aperture = 0.0;
};

inline std::array<Eigen::Vector2d, 2> tip_base_positions(const GripperState& g,
                                                         const GripperModel& m) {
    const double half = m.separation(g.aperture) / 2.0;
    return {g.base_xy + Eigen::Vector2d(-half, 0.0), g.base_xy + Eigen::Vector2d(half, 0.0)};
}

inline std::array<Eigen::Vector2d, 2> tip_positions(const GripperState& g, const GripperModel& m) {
    auto tips = tip_base_positions(g, m);
    tips[0] += g.tip_deflection[0];
    tips[1] += g.tip_deflection[1];
    return tips;
}

inline bool tip_in_contact(const GripperState& g, const GripperModel& m, int k) {
    if (m.single_tip && k == 1)
        return false;
    return g.penetration() > 0.0;
}

inline std::array<double, 2> tip_normal_forces(const GripperState& g, const GripperModel& m) {
    const double delta = g.penetration();
    std::array<double, 2> f{0.0, 0.0};
    for (int k = 0; k < 2; ++k)
        f[k] = tip_in_contact(g, m, k) ? m.tip_force(delta) : 0.0;
    return f;
}

/// Advance the world one step. Deterministic: identical seeds and command
/// sequences yield bit-identical states. Throws TorqueLimit when the total
/// normal force exceeds the configured limit.
inline WorldState step(const WorldState& world, const GripperModel& model,
                       const MoveCommand& cmd, double dt) {
    WorldState w = world;
    w.time += dt;

    const auto tips_before = tip_base_positions(w.gripper, model);

    Eigen::Vector2d actual = cmd.d_base_xy * (1.0 + w.drift.bias);
    if (cmd.d_base_xy.squaredNorm() > 0.0 && w.drift.noise_std > 0.0) {
        std::normal_distribution<double> n(0.0, w.drift.noise_std);
        actual.x() += n(w.rng);
        actual.y() += n(w.rng);
    }
    w.gripper.base_xy += actual;
    w.gripper.lift_z += cmd.d_lift_z;

    double aperture = w.gripper.aperture + cmd.d_aperture;
    if (w.closing) {
        aperture -= dt / model.close_duration;
        if (aperture <= 0.0)
            w.closing = false;
    }
    w.gripper.aperture = std::clamp(aperture, 0.0, 1.0);

    const auto tips_after = tip_base_positions(w.gripper, model);

    const double delta = w.gripper.penetration();
    double total_normal = 0.0;
    for (int k = 0; k < 2; ++k) {
        const bool contact = tip_in_contact(w.gripper, model, k);
        w.gripper.tip_contact[k] = contact;
        if (!contact) {
            w.gripper.tip_deflection[k].setZero();
            continue;
        }
        const double fn = model.tip_force(delta);
        total_normal += fn;
        // Stick: the tip stays put while the base moves, loading the lateral
        // spring; slip once the spring force exceeds mu * F_n.
        Eigen::Vector2d defl = w.gripper.tip_deflection[k] - (tips_after[k] - tips_before[k]);
        const double limit = model.deflection_limit(fn);
        const double mag = defl.norm();
        if (mag > limit)
            defl *= limit / mag;
        w.gripper.tip_deflection[k] = defl;
    }
    if (total_normal > model.normal_force_limit)
        throw TorqueLimit("step: total normal force exceeds actuator limit");

    for (auto& obj : w.objects) {
        if (obj.held) {
            obj.x += actual.x();
            obj.y += actual.y();
        }
    }
    return w;
}

/// Sample the gripper's contact footprints on the sensor grid. Each
/// contacting tip deposits a truncated paraboloid
/// p(r) = k * delta * max(0, 1 - (r/r_c)^2) centered at its deflected
/// position; footprints superpose additively.
inline PressureImage render_pressure(const WorldState& world, const GripperModel& model,
                                     const SensorSpec& spec) {
    PressureImage img = PressureImage::zeros(spec.rows, spec.cols, spec.pitch_x(), spec.pitch_y(),
                                             Frame::SensorPlane, world.time);
    const double delta = world.gripper.penetration();
    if (delta <= 0.0)
        return img;
    const double peak = model.normal_stiffness * delta;
    const double rc = model.fingertip_radius;
    const auto tips = tip_positions(world.gripper, model);
    for (int k = 0; k < 2; ++k) {
        if (!tip_in_contact(world.gripper, model, k))
            continue;
        const double cx = tips[k].x(), cy = tips[k].y();
        const int j0 = std::max(0, static_cast<int>(std::floor((cx - rc) / spec.pitch_x() - 0.5)));
        const int j1 = std::min(spec.cols - 1,
                                static_cast<int>(std::ceil((cx + rc) / spec.pitch_x() - 0.5)));
        const int i0 = std::max(0, static_cast<int>(std::floor((cy - rc) / spec.pitch_y() - 0.5)));
        const int i1 = std::min(spec.rows - 1,
                                static_cast<int>(std::ceil((cy + rc) / spec.pitch_y() - 0.5)));
        for (int i = i0; i <= i1; ++i) {
            for (int j = j0; j <= j1; ++j) {
                const auto [x, y] = img.pixel_center(i, j);
                const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                const double q = 1.0 - r2 / (rc * rc);
                if (q > 0.0)
                    img.at(i, j) += peak * q;
            }
        }
    }
    return img;
}

/// Begin closing the gripper on whatever lies between the fingertips.
/// Capture is decided at initiation from the current tip positions: an
/// object becomes held iff its centroid projects strictly between the tips
/// and lies within capture_radius + half the footprint's minor extent of the
/// closing line. The aperture then ramps to zero over close_duration via
/// step(). Requires both tips in contact; otherwise nothing is captured.
inline WorldState attempt_close(const WorldState& world, const GripperModel& model) {
    WorldState w = world;
    w.closing = true;
    if (!tip_in_contact(w.gripper, model, 0) || !tip_in_contact(w.gripper, model, 1))
        return w;
    const auto tips = tip_positions(w.gripper, model);
    const Eigen::Vector2d d = tips[1] - tips[0];
    const double len2 = d.squaredNorm();
    if (len2 <= 0.0)
        return w;
    for (auto& obj : w.objects) {
        if (obj.held)
            continue;
        const Eigen::Vector2d c(obj.x, obj.y);
        const double t = (c - tips[0]).dot(d) / len2;
        if (t <= 0.0 || t >= 1.0)
            continue; // not between the tips
        const Eigen::Vector2d closest = tips[0] + t * d;
        const double perp = (c - closest).norm();
        const double tol = model.capture_radius + 0.5 * std::min(obj.length, obj.width);
        if (perp <= tol)
            obj.held = true;
    }
    return w;
}

} // namespace pressim
