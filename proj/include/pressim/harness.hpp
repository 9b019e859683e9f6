#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pressim/control.hpp"
#include "pressim/errors.hpp"
#include "pressim/estimator.hpp"
#include "pressim/geometry.hpp"
#include "pressim/metrics.hpp"
#include "pressim/pressure.hpp"
#include "pressim/sim.hpp"

namespace pressim {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class EstimatorKind { Oracle, NoisyQuantized };

struct EstimatorConfig {
    EstimatorKind kind = EstimatorKind::Oracle;
    NoiseConfig noise;
};

struct ForceTrialParams {
    std::vector<double> levels{0.0, 1.0, 2.0, 3.0, 4.0, 5.0}; // N
    int trials_per_level = 10;
    double deadband = 0.25;    // N
    double step_size = 0.0005; // m per control tick
    double start_min = 0.03;   // m above the plane
    double start_max = 0.05;
    double timeout = 10.0;  // s
    int settle_ticks = 6;   // consecutive hold commands counted as settled
};

struct PathTrialParams {
    double side = 0.08;             // m
    double speed = 0.02;            // m/s commanded along the square
    double waypoint_spacing = 0.01; // m, closed-loop waypoints along the square
    double press_force = 2.0;       // N on the single contacting tip
    double gain = 1.0;              // IBVS lambda
    double stop_radius = 3.0;       // px
    double timeout = 90.0;          // s
    double waypoint_timeout = 5.0;  // s per waypoint before aborting
};

struct GraspSuiteParams {
    int trials_per_object = 10;
    double set_force = 2.0;    // N held while servoing
    double stop_radius = 3.0;  // px
    double lift_height = 0.05; // m
    double hold_time = 5.0;    // s
    double timeout = 60.0;     // s
    double start_height = 0.02; // m above the plane
    double placement_fraction = 0.6; // objects land in this central area fraction
};

struct Scenario {
    uint64_t seed = 0;
    SensorSpec sensor;
    GripperModel gripper;
    DriftModel drift;
    EstimatorConfig estimator;
    int image_rows = 150;
    int image_cols = 250;
    Homography sensor_to_image; // SensorPlane -> ImagePlane
    std::vector<SimObject> objects;
    ForceTrialParams force;
    PathTrialParams path;
    GraspSuiteParams grasp;
    double control_rate = 12.0; // Hz estimate/control clock
};

// Sensor plane centered in a 250x150 px image at 1 px per mm.
inline Homography default_homography() {
    Homography h;
    h.h << 1000.0, 0.0, 10.0, 0.0, 1000.0, 10.0, 0.0, 0.0, 1.0;
    h.src_frame = Frame::SensorPlane;
    h.dst_frame = Frame::ImagePlane;
    return h;
}

// The grasp-trial object set: 11 small low-profile footprints (L x W x H mm).
inline std::vector<SimObject> default_objects() {
    auto obj = [](const char* name, double l, double w, double hgt) {
        SimObject o;
        o.name = name;
        o.length = l * 1e-3;
        o.width = w * 1e-3;
        o.height = hgt * 1e-3;
        return o;
    };
    return {
        obj("washer", 10, 10, 1),        obj("small_pill", 10, 6, 6),
        obj("large_pill", 21, 8, 8),     obj("microsd_card", 15, 11, 1),
        obj("cable_segment", 82, 4, 4),  obj("penny", 19, 19, 1.5),
        obj("bottle_cap", 30, 30, 13),   obj("aa_battery", 50, 14, 14),
        obj("binder_clip", 25, 24, 19),  obj("screw", 32, 9, 9),
        obj("tape_roll", 36, 36, 13),
    };
}

inline Scenario default_scenario() {
    Scenario s;
    s.sensor_to_image = default_homography();
    s.objects = default_objects();
    return s;
}

inline EstimateFrame make_estimate(const WorldState& world, const Scenario& s,
                                   uint64_t noise_seed) {
    if (s.estimator.kind == EstimatorKind::Oracle)
        return oracle_estimate(world, s.gripper, s.sensor, s.sensor_to_image, s.image_rows,
                               s.image_cols);
    NoiseConfig n = s.estimator.noise;
    n.seed = noise_seed;
    return noisy_estimate(world, s.gripper, s.sensor, s.sensor_to_image, s.image_rows,
                          s.image_cols, n);
}

struct TrialReport {
    std::string scenario_id;
    uint64_t seed = 0;
    bool success = false;
    FailureReason reason = FailureReason::None;
    double target_force = 0.0;   // N, force trials
    double achieved_force = 0.0; // N, force trials
    double tracking_rms_px = 0.0;
    double tracking_rms_m = 0.0;
    double tracking_max_m = 0.0;
    double duration = 0.0; // simulated s
    std::vector<std::string> artifacts;
};

// ---------------------------------------------------------------------------
// Force trials

struct ForceTrialOutcome {
    TrialReport report;
};

/// One bang-bang force regulation trial: start 3-5 cm above the plane, run
/// the height controller at the estimate rate until the command settles or
/// the timeout elapses, and report the ground-truth force.
inline TrialReport run_force_trial(const Scenario& s, double target_n, uint64_t trial_seed,
                                   const std::string& scenario_id) {
    TrialReport rep;
    rep.scenario_id = scenario_id;
    rep.seed = trial_seed;
    rep.target_force = target_n;

    std::mt19937_64 init_rng(splitmix64(trial_seed));
    std::uniform_real_distribution<double> start_h(s.force.start_min, s.force.start_max);

    DriftModel drift = s.drift;
    drift.seed = splitmix64(trial_seed + 1);
    WorldState world(drift);
    world.gripper.base_xy = Eigen::Vector2d(s.sensor.active_w / 2.0, s.sensor.active_h / 2.0);
    world.gripper.lift_z = start_h(init_rng);

    const ForceTarget target{target_n, s.force.deadband, s.force.step_size};
    const AreaFn area = homography_area(s.sensor_to_image);
    const double dt = 1.0 / s.sensor.rate;
    const double ctrl_dt = 1.0 / s.control_rate;

    double next_ctrl = 0.0;
    double pending_dz = 0.0;
    int hold_streak = 0;
    bool settled = false;
    std::vector<double> recent_force; // ground truth over the trailing window

    try {
        while (world.time < s.force.timeout) {
            if (world.time + 1e-9 >= next_ctrl) {
                const EstimateFrame est = make_estimate(world, s, splitmix64(trial_seed + 2));
                pending_dz = force_command(est, area, target);
                hold_streak = pending_dz == 0.0 ? hold_streak + 1 : 0;
                next_ctrl += ctrl_dt;
                if (hold_streak >= s.force.settle_ticks) {
                    settled = true;
                    break;
                }
            }
            MoveCommand cmd;
            cmd.d_lift_z = pending_dz;
            pending_dz = 0.0;
            world = step(world, s.gripper, cmd, dt);
            recent_force.push_back(total_force(render_pressure(world, s.gripper, s.sensor)));
            const size_t window = static_cast<size_t>(s.sensor.rate); // last 1 s
            if (recent_force.size() > window)
                recent_force.erase(recent_force.begin());
        }
        if (settled) {
            rep.achieved_force = total_force(render_pressure(world, s.gripper, s.sensor));
        } else if (!recent_force.empty()) {
            double m = 0.0;
            for (double f : recent_force)
                m += f;
            rep.achieved_force = m / static_cast<double>(recent_force.size());
        }
        rep.success = true;
    } catch (const TorqueLimit&) {
        rep.success = false;
        rep.reason = FailureReason::TorqueLimit;
        rep.achieved_force = 0.0;
    }
    rep.duration = world.time;
    return rep;
}

inline std::vector<TrialReport> run_force_trials(const Scenario& s) {
    std::vector<TrialReport> out;
    for (size_t li = 0; li < s.force.levels.size(); ++li) {
        for (int t = 0; t < s.force.trials_per_level; ++t) {
            const uint64_t trial_seed =
                splitmix64(s.seed ^ splitmix64(1000 + li * 100 + static_cast<uint64_t>(t)));
            char id[64];
            std::snprintf(id, sizeof(id), "force_l%zu_t%02d", li, t);
            out.push_back(run_force_trial(s, s.force.levels[li], trial_seed, id));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Square path trials

enum class PathMode { OpenLoop, ClosedLoop };

struct PathSample {
    double t = 0.0;
    double ref_x = 0.0, ref_y = 0.0;    // commanded/target point on the square, m
    double actual_x = 0.0, actual_y = 0.0; // center of pressure, m
};

struct PathResult {
    TrialReport report;
    std::vector<PathSample> samples;
    std::vector<Eigen::Vector2d> reference; // square corners, m
};

namespace detail {

inline double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                     const Eigen::Vector2d& b) {
    const Eigen::Vector2d d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 <= 0.0)
        return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

inline double point_polyline_distance(const Eigen::Vector2d& p,
                                      const std::vector<Eigen::Vector2d>& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < poly.size(); ++k)
        best = std::min(best, point_segment_distance(p, poly[k], poly[k + 1]));
    return best;
}

} // namespace detail

/// Trace an 8 cm square with one fingertip in contact, either executing the
/// commanded displacements open loop through the drift model or servoing the
/// pressure maximum through waypoints along the square. The true path is the
/// center of pressure on the simulated sensor.
inline PathResult run_square_path(const Scenario& s, PathMode mode, uint64_t trial_seed,
                                  const std::string& scenario_id) {
    PathResult result;
    TrialReport& rep = result.report;
    rep.scenario_id = scenario_id;
    rep.seed = trial_seed;

    GripperModel model = s.gripper;
    model.single_tip = true;
    // The estimator must see the same single-tip world the path renders.
    Scenario sc = s;
    sc.gripper.single_tip = true;

    DriftModel drift = s.drift;
    drift.seed = splitmix64(trial_seed + 1);
    WorldState world(drift);

    // Place tip 0 at the square's start corner, pressed to the set force.
    const Eigen::Vector2d start_tip(s.sensor.active_w / 2.0 - s.path.side / 2.0,
                                    s.sensor.active_h / 2.0 - s.path.side / 2.0);
    world.gripper.base_xy = start_tip + Eigen::Vector2d(model.separation(1.0) / 2.0, 0.0);
    world.gripper.lift_z = -s.path.press_force / (model.normal_stiffness * M_PI *
                                                  model.fingertip_radius *
                                                  model.fingertip_radius / 2.0);

    const std::vector<Eigen::Vector2d> corners = {
        start_tip,
        start_tip + Eigen::Vector2d(s.path.side, 0.0),
        start_tip + Eigen::Vector2d(s.path.side, s.path.side),
        start_tip + Eigen::Vector2d(0.0, s.path.side),
        start_tip,
    };
    result.reference = corners;

    const double dt = 1.0 / s.sensor.rate;
    const double ctrl_dt = 1.0 / s.control_rate;
    const AreaFn area = homography_area(s.sensor_to_image);
    (void)area;

    auto record = [&](double ref_x, double ref_y) {
        const PressureImage gt = render_pressure(world, model, s.sensor);
        if (!any_contact(gt, 1.0))
            throw ContactLost("square path: contact lost");
        const auto [cx, cy] = center_of_pressure(gt);
        result.samples.push_back({world.time, ref_x, ref_y, cx, cy});
    };

    try {
        if (mode == PathMode::OpenLoop) {
            // Commanded positions advance along the square at constant speed.
            double next_ctrl = 0.0;
            double traveled = 0.0;
            const double perimeter = 4.0 * s.path.side;
            Eigen::Vector2d cmd_pos = corners[0];
            while (traveled < perimeter - 1e-12) {
                const double adv = std::min(s.path.speed * dt, perimeter - traveled);
                // Direction of the active side.
                const int side_idx = std::min(3, static_cast<int>(traveled / s.path.side));
                const Eigen::Vector2d dir =
                    (corners[side_idx + 1] - corners[side_idx]).normalized();
                // Snap commanded point to the polyline to avoid drifting the
                // reference across corners.
                const double along = traveled - side_idx * s.path.side;
                cmd_pos = corners[side_idx] + dir * std::min(along + adv, s.path.side);
                MoveCommand cmd;
                cmd.d_base_xy = dir * adv;
                world = step(world, model, cmd, dt);
                traveled += adv;
                if (world.time + 1e-9 >= next_ctrl) {
                    record(cmd_pos.x(), cmd_pos.y());
                    next_ctrl += ctrl_dt;
                }
            }
        } else {
            // Closed loop: servo the pressure maximum through waypoints.
            std::vector<Eigen::Vector2d> waypoints;
            for (int side_idx = 0; side_idx < 4; ++side_idx) {
                const Eigen::Vector2d a = corners[side_idx], b = corners[side_idx + 1];
                const int n = std::max(1, static_cast<int>(std::round(s.path.side /
                                                                      s.path.waypoint_spacing)));
                for (int k = 1; k <= n; ++k)
                    waypoints.push_back(a + (b - a) * (static_cast<double>(k) / n));
            }

            IbvsConfig ibvs;
            ibvs.gain = s.path.gain;
            ibvs.stop_radius = s.path.stop_radius;
            // Image Jacobian from the known camera geometry: px per m of base
            // motion at the workspace center.
            {
                const auto [u0, v0] = s.sensor_to_image.apply(s.sensor.active_w / 2.0,
                                                              s.sensor.active_h / 2.0);
                const double eps = 1e-6;
                const auto [ux, vx] = s.sensor_to_image.apply(s.sensor.active_w / 2.0 + eps,
                                                              s.sensor.active_h / 2.0);
                const auto [uy, vy] = s.sensor_to_image.apply(s.sensor.active_w / 2.0,
                                                              s.sensor.active_h / 2.0 + eps);
                ibvs.jacobian << (ux - u0) / eps, (uy - u0) / eps, (vx - v0) / eps,
                    (vy - v0) / eps;
            }

            size_t wp = 0;
            double next_ctrl = 0.0;
            double wp_deadline = s.path.waypoint_timeout;
            Eigen::Vector2d pending{0.0, 0.0};
            while (wp < waypoints.size()) {
                if (world.time > s.path.timeout || world.time > wp_deadline) {
                    rep.reason = FailureReason::Timeout;
                    rep.success = false;
                    result.samples.clear();
                    rep.duration = world.time;
                    return result;
                }
                if (world.time + 1e-9 >= next_ctrl) {
                    const EstimateFrame est = make_estimate(world, sc, splitmix64(trial_seed + 2));
                    IbvsConfig cfg = ibvs;
                    const auto [tx, ty] =
                        s.sensor_to_image.apply(waypoints[wp].x(), waypoints[wp].y());
                    cfg.target = Eigen::Vector2d(tx, ty);
                    const Eigen::Vector2d e = ibvs_error(est, cfg, MaximaMode::Single);
                    if (e.norm() <= cfg.stop_radius) {
                        ++wp;
                        wp_deadline = world.time + s.path.waypoint_timeout;
                        pending.setZero();
                    } else {
                        pending = ibvs_command(e, cfg) * ctrl_dt;
                    }
                    record(waypoints[std::min(wp, waypoints.size() - 1)].x(),
                           waypoints[std::min(wp, waypoints.size() - 1)].y());
                    next_ctrl += ctrl_dt;
                }
                MoveCommand cmd;
                cmd.d_base_xy = pending;
                pending.setZero();
                world = step(world, model, cmd, dt);
            }
        }
        rep.success = true;
    } catch (const ContactLost&) {
        rep.success = false;
        rep.reason = FailureReason::ContactLost;
    } catch (const TorqueLimit&) {
        rep.success = false;
        rep.reason = FailureReason::TorqueLimit;
    }

    if (rep.success && !result.samples.empty()) {
        double sum2 = 0.0, worst = 0.0;
        for (const auto& smp : result.samples) {
            const double d = detail::point_polyline_distance(
                Eigen::Vector2d(smp.actual_x, smp.actual_y), corners);
            sum2 += d * d;
            worst = std::max(worst, d);
        }
        rep.tracking_rms_m = std::sqrt(sum2 / static_cast<double>(result.samples.size()));
        rep.tracking_max_m = worst;
        // Pixel-scale conversion from the homography at the workspace center.
        const double area_center =
            pixel_area(s.sensor_to_image, s.image_rows / 2, s.image_cols / 2);
        rep.tracking_rms_px = rep.tracking_rms_m / std::sqrt(area_center);
    }
    rep.duration = world.time;
    return result;
}

// ---------------------------------------------------------------------------
// Grasp suite

/// Final closed-loop error to the last waypoint of a closed-loop path run,
/// in px, measured from the recorded samples.
inline double final_corner_error_px(const PathResult& r, const Scenario& s) {
    if (r.samples.empty())
        return std::numeric_limits<double>::infinity();
    const auto& last = r.samples.back();
    const auto [tx, ty] = s.sensor_to_image.apply(last.ref_x, last.ref_y);
    const auto [ax, ay] = s.sensor_to_image.apply(last.actual_x, last.actual_y);
    return std::hypot(tx - ax, ty - ay);
}

/// One grasp trial: the state machine drives the simulated gripper from
/// approach through hold. The object centroid is supplied in image pixels by
/// projecting the true pose through the homography.
inline TrialReport run_grasp_trial(const Scenario& s, const SimObject& object,
                                   uint64_t trial_seed, const std::string& scenario_id) {
    TrialReport rep;
    rep.scenario_id = scenario_id;
    rep.seed = trial_seed;

    DriftModel drift = s.drift;
    drift.seed = splitmix64(trial_seed + 1);
    WorldState world(drift);
    world.gripper.base_xy = Eigen::Vector2d(s.sensor.active_w / 2.0, s.sensor.active_h / 2.0);
    world.gripper.lift_z = s.grasp.start_height;

    // Random pose over the central placement area.
    std::mt19937_64 pose_rng(splitmix64(trial_seed + 3));
    const double fx = s.grasp.placement_fraction * s.sensor.active_w / 2.0;
    const double fy = s.grasp.placement_fraction * s.sensor.active_h / 2.0;
    std::uniform_real_distribution<double> ux(s.sensor.active_w / 2.0 - fx,
                                              s.sensor.active_w / 2.0 + fx);
    std::uniform_real_distribution<double> uy(s.sensor.active_h / 2.0 - fy,
                                              s.sensor.active_h / 2.0 + fy);
    std::uniform_real_distribution<double> utheta(0.0, 2.0 * M_PI);
    SimObject obj = object;
    obj.x = ux(pose_rng);
    obj.y = uy(pose_rng);
    obj.theta = utheta(pose_rng);
    world.objects.push_back(obj);

    const auto [cx_px, cy_px] = s.sensor_to_image.apply(obj.x, obj.y);

    GraspConfig cfg;
    cfg.force = ForceTarget{s.grasp.set_force, 0.25, 0.0005};
    cfg.ibvs.gain = 1.0;
    cfg.ibvs.stop_radius = s.grasp.stop_radius;
    {
        const double scale =
            1.0 / std::sqrt(pixel_area(s.sensor_to_image, s.image_rows / 2, s.image_cols / 2));
        cfg.ibvs.jacobian = Eigen::Matrix2d::Identity() * scale;
    }
    cfg.area_fn = homography_area(s.sensor_to_image);
    cfg.lift_height = s.grasp.lift_height;
    cfg.hold_time = s.grasp.hold_time;
    cfg.timeout = s.grasp.timeout;
    GraspController ctrl(cfg);

    const double dt = 1.0 / s.sensor.rate;
    const double ctrl_dt = 1.0 / s.control_rate;
    double next_ctrl = 0.0;
    MoveCommand pending;

    try {
        while (!ctrl.terminal() && world.time < s.grasp.timeout + 10.0) {
            if (world.time + 1e-9 >= next_ctrl) {
                GraspInputs in;
                in.estimate = make_estimate(world, s, splitmix64(trial_seed + 2));
                in.object_centroid_px = Eigen::Vector2d(cx_px, cy_px);
                in.held = !world.objects.empty() && world.objects[0].held;
                in.torque_ok = true;
                in.aperture = world.gripper.aperture;
                in.dt = ctrl_dt;
                const GraspOutput out = ctrl.step(in);
                pending = out.command;
                if (out.request_close)
                    world = attempt_close(world, s.gripper);
                next_ctrl += ctrl_dt;
                if (ctrl.terminal())
                    break;
            }
            world = step(world, s.gripper, pending, dt);
            pending = MoveCommand{};
        }
    } catch (const TorqueLimit&) {
        rep.success = false;
        rep.reason = FailureReason::TorqueLimit;
        rep.duration = world.time;
        return rep;
    }

    rep.duration = world.time;
    if (ctrl.phase() == GraspPhase::Success) {
        rep.success = true;
    } else {
        rep.success = false;
        rep.reason = ctrl.phase() == GraspPhase::Failure ? ctrl.failure_reason()
                                                         : FailureReason::Timeout;
    }
    return rep;
}

inline std::vector<TrialReport> run_grasp_suite(const Scenario& s) {
    std::vector<TrialReport> out;
    for (size_t oi = 0; oi < s.objects.size(); ++oi) {
        for (int t = 0; t < s.grasp.trials_per_object; ++t) {
            const uint64_t trial_seed =
                splitmix64(s.seed ^ splitmix64(90000 + oi * 100 + static_cast<uint64_t>(t)));
            char id[96];
            std::snprintf(id, sizeof(id), "grasp_%s_t%02d", s.objects[oi].name.c_str(), t);
            out.push_back(run_grasp_trial(s, s.objects[oi], trial_seed, id));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report serialization

inline nlohmann::ordered_json report_to_json(const TrialReport& r) {
    nlohmann::ordered_json j;
    j["scenario_id"] = r.scenario_id;
    j["seed"] = r.seed;
    j["outcome"] = r.success ? "Success" : "Failure";
    if (!r.success)
        j["failure_reason"] = failure_reason_name(r.reason);
    j["target_force_n"] = r.target_force;
    j["achieved_force_n"] = r.achieved_force;
    j["tracking_rms_px"] = r.tracking_rms_px;
    j["tracking_rms_m"] = r.tracking_rms_m;
    j["tracking_max_m"] = r.tracking_max_m;
    j["duration_s"] = r.duration;
    j["artifacts"] = r.artifacts;
    return j;
}

inline nlohmann::ordered_json reports_to_json(const std::vector<TrialReport>& reports,
                                              const Scenario& s) {
    nlohmann::ordered_json j;
    j["master_seed"] = s.seed;
    j["conventions"] = {{"iou_both_empty", 1.0},
                        {"metric_averaging", "macro"},
                        {"bin_schema",
                         {{"n_bins", s.estimator.noise.quantize.n_bins},
                          {"p_min_pa", s.estimator.noise.quantize.p_min},
                          {"p_max_pa", s.estimator.noise.quantize.p_max}}}};
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports)
        j["reports"].push_back(report_to_json(r));
    return j;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string reports_to_csv(const std::vector<TrialReport>& reports) {
    std::string out = "scenario_id,seed,outcome,failure_reason,target_force_n,achieved_force_n,"
                      "tracking_rms_px,tracking_rms_m,tracking_max_m,duration_s\n";
    for (const auto& r : reports) {
        out += r.scenario_id;
        out += ',' + std::to_string(r.seed);
        out += ',';
        out += r.success ? "Success" : "Failure";
        out += ',';
        out += r.success ? "" : failure_reason_name(r.reason);
        out += ',' + format_double(r.target_force);
        out += ',' + format_double(r.achieved_force);
        out += ',' + format_double(r.tracking_rms_px);
        out += ',' + format_double(r.tracking_rms_m);
        out += ',' + format_double(r.tracking_max_m);
        out += ',' + format_double(r.duration);
        out += '\n';
    }
    return out;
}

inline std::string path_samples_to_csv(const PathResult& r) {
    std::string out = "t,ref_x_m,ref_y_m,actual_x_m,actual_y_m\n";
    for (const auto& smp : r.samples) {
        out += format_double(smp.t);
        out += ',' + format_double(smp.ref_x);
        out += ',' + format_double(smp.ref_y);
        out += ',' + format_double(smp.actual_x);
        out += ',' + format_double(smp.actual_y);
        out += '\n';
    }
    return out;
}

// Plot data matching the force evaluation axes: target vs achieved force.
inline std::string force_plot_csv(const std::vector<TrialReport>& reports) {
    std::string out = "target_force_n,achieved_force_n\n";
    for (const auto& r : reports) {
        out += format_double(r.target_force);
        out += ',' + format_double(r.achieved_force);
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f)
        throw Error("cannot open for writing: " + path);
    f << content;
}

} // namespace pressim
