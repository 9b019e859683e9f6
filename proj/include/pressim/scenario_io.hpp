#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pressim/errors.hpp"
#include "pressim/harness.hpp"

namespace pressim {

/// One segment of a scripted gripper motion for `sim run`: constant rates
/// held for a duration.
struct ScriptSegment {
    double duration = 1.0; // s
    double vx = 0.0, vy = 0.0; // m/s base motion
    double vz = 0.0;           // m/s lift motion
    double va = 0.0;           // aperture/s
};

struct SimRunConfig {
    Scenario scenario;
    std::vector<ScriptSegment> script;
};

namespace detail {

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace detail

inline void scenario_from_json(const nlohmann::json& j, Scenario& s) {
    using detail::get_if_present;
    get_if_present(j, "seed", s.seed);
    if (j.contains("sensor")) {
        const auto& q = j.at("sensor");
        get_if_present(q, "rows", s.sensor.rows);
        get_if_present(q, "cols", s.sensor.cols);
        get_if_present(q, "active_w_m", s.sensor.active_w);
        get_if_present(q, "active_h_m", s.sensor.active_h);
        get_if_present(q, "rate_hz", s.sensor.rate);
    }
    if (j.contains("gripper")) {
        const auto& q = j.at("gripper");
        get_if_present(q, "fingertip_radius_m", s.gripper.fingertip_radius);
        get_if_present(q, "finger_separation_open_m", s.gripper.finger_separation_open);
        get_if_present(q, "finger_separation_closed_m", s.gripper.finger_separation_closed);
        get_if_present(q, "normal_stiffness_pa_per_m", s.gripper.normal_stiffness);
        get_if_present(q, "lateral_compliance_m_per_n", s.gripper.lateral_compliance);
        get_if_present(q, "friction_mu", s.gripper.friction_mu);
        get_if_present(q, "max_deflection_m", s.gripper.max_deflection);
        get_if_present(q, "normal_force_limit_n", s.gripper.normal_force_limit);
        get_if_present(q, "close_duration_s", s.gripper.close_duration);
        get_if_present(q, "capture_radius_m", s.gripper.capture_radius);
        get_if_present(q, "single_tip", s.gripper.single_tip);
    }
    if (j.contains("drift")) {
        const auto& q = j.at("drift");
        get_if_present(q, "bias", s.drift.bias);
        get_if_present(q, "noise_std_m", s.drift.noise_std);
    }
    if (j.contains("estimator")) {
        const auto& q = j.at("estimator");
        std::string kind = "oracle";
        get_if_present(q, "kind", kind);
        if (kind == "oracle")
            s.estimator.kind = EstimatorKind::Oracle;
        else if (kind == "noisy")
            s.estimator.kind = EstimatorKind::NoisyQuantized;
        else
            throw Error("scenario: unknown estimator kind: " + kind);
        get_if_present(q, "quantize_enabled", s.estimator.noise.quantize_enabled);
        get_if_present(q, "n_bins", s.estimator.noise.quantize.n_bins);
        get_if_present(q, "p_min_pa", s.estimator.noise.quantize.p_min);
        get_if_present(q, "p_max_pa", s.estimator.noise.quantize.p_max);
        get_if_present(q, "contact_miss_below_pa", s.estimator.noise.contact_miss_below);
        get_if_present(q, "gain_bias", s.estimator.noise.gain_bias);
        get_if_present(q, "spatial_jitter_px", s.estimator.noise.spatial_jitter);
    }
    if (j.contains("image")) {
        get_if_present(j.at("image"), "rows", s.image_rows);
        get_if_present(j.at("image"), "cols", s.image_cols);
    }
    if (j.contains("homography")) {
        const auto& arr = j.at("homography");
        if (arr.size() != 9)
            throw Error("scenario: homography must have 9 entries");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                s.sensor_to_image.h(r, c) = arr[3 * r + c].get<double>();
    }
    if (j.contains("objects")) {
        s.objects.clear();
        for (const auto& q : j.at("objects")) {
            SimObject o;
            detail::get_if_present(q, "name", o.name);
            double l = 10.0, w = 10.0, h = 1.0;
            detail::get_if_present(q, "length_mm", l);
            detail::get_if_present(q, "width_mm", w);
            detail::get_if_present(q, "height_mm", h);
            o.length = l * 1e-3;
            o.width = w * 1e-3;
            o.height = h * 1e-3;
            detail::get_if_present(q, "x_m", o.x);
            detail::get_if_present(q, "y_m", o.y);
            detail::get_if_present(q, "theta_rad", o.theta);
            s.objects.push_back(o);
        }
    }
    if (j.contains("force")) {
        const auto& q = j.at("force");
        get_if_present(q, "levels_n", s.force.levels);
        get_if_present(q, "trials_per_level", s.force.trials_per_level);
        get_if_present(q, "deadband_n", s.force.deadband);
        get_if_present(q, "step_size_m", s.force.step_size);
        get_if_present(q, "start_min_m", s.force.start_min);
        get_if_present(q, "start_max_m", s.force.start_max);
        get_if_present(q, "timeout_s", s.force.timeout);
        get_if_present(q, "settle_ticks", s.force.settle_ticks);
    }
    if (j.contains("path")) {
        const auto& q = j.at("path");
        get_if_present(q, "side_m", s.path.side);
        get_if_present(q, "speed_m_per_s", s.path.speed);
        get_if_present(q, "waypoint_spacing_m", s.path.waypoint_spacing);
        get_if_present(q, "press_force_n", s.path.press_force);
        get_if_present(q, "gain", s.path.gain);
        get_if_present(q, "stop_radius_px", s.path.stop_radius);
        get_if_present(q, "timeout_s", s.path.timeout);
        get_if_present(q, "waypoint_timeout_s", s.path.waypoint_timeout);
    }
    if (j.contains("grasp")) {
        const auto& q = j.at("grasp");
        get_if_present(q, "trials_per_object", s.grasp.trials_per_object);
        get_if_present(q, "set_force_n", s.grasp.set_force);
        get_if_present(q, "stop_radius_px", s.grasp.stop_radius);
        get_if_present(q, "lift_height_m", s.grasp.lift_height);
        get_if_present(q, "hold_time_s", s.grasp.hold_time);
        get_if_present(q, "timeout_s", s.grasp.timeout);
        get_if_present(q, "start_height_m", s.grasp.start_height);
        get_if_present(q, "placement_fraction", s.grasp.placement_fraction);
    }
    get_if_present(j, "control_rate_hz", s.control_rate);
}

inline SimRunConfig load_sim_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open scenario file: " + path);
    nlohmann::json j;
    f >> j;
    SimRunConfig cfg;
    cfg.scenario = default_scenario();
    scenario_from_json(j, cfg.scenario);
    if (j.contains("script")) {
        for (const auto& q : j.at("script")) {
            ScriptSegment seg;
            detail::get_if_present(q, "duration_s", seg.duration);
            detail::get_if_present(q, "vx_m_per_s", seg.vx);
            detail::get_if_present(q, "vy_m_per_s", seg.vy);
            detail::get_if_present(q, "vz_m_per_s", seg.vz);
            detail::get_if_present(q, "va_per_s", seg.va);
            cfg.script.push_back(seg);
        }
    }
    return cfg;
}

inline Scenario load_scenario(const std::string& path) {
    return load_sim_run_config(path).scenario;
}

} // namespace pressim
