#include <doctest.h>

#include <cmath>

#include "pressim/estimator.hpp"
#include "pressim/metrics.hpp"

using namespace pressim;

namespace {

constexpr int kImgRows = 150;
constexpr int kImgCols = 250;

// 1000 px/m plus a 10 px offset: the whole active area lands inside the image.
Homography test_homography() {
    Homography h;
    h.h << 1000.0, 0.0, 10.0, 0.0, 1000.0, 10.0, 0.0, 0.0, 1.0;
    return h;
}

WorldState world_at_force(const GripperModel& m, double per_tip_n) {
    const SensorSpec spec;
    DriftModel quiet;
    quiet.bias = 0.0;
    quiet.noise_std = 0.0;
    WorldState w(quiet);
    w.gripper.base_xy = Eigen::Vector2d(spec.active_w / 2.0, spec.active_h / 2.0);
    w.gripper.lift_z = -2.0 * per_tip_n /
                       (m.normal_stiffness * M_PI * m.fingertip_radius * m.fingertip_radius);
    return w;
}

NoiseConfig silent_noise() {
    NoiseConfig n;
    n.quantize_enabled = false;
    n.contact_miss_below = 0.0;
    n.gain_bias = 0.0;
    n.spatial_jitter = 0;
    return n;
}

} // namespace

TEST_CASE("oracle_estimate: hovering gripper yields an all-zero image frame") {
    GripperModel m;
    SensorSpec spec;
    WorldState w = world_at_force(m, 1.0);
    w.gripper.lift_z = 0.02;
    const EstimateFrame e = oracle_estimate(w, m, spec, test_homography(), kImgRows, kImgCols);
    CHECK(e.pressure.frame == Frame::ImagePlane);
    CHECK(e.pressure.rows == kImgRows);
    CHECK(e.pressure.cols == kImgCols);
    CHECK(any_contact(e.pressure) == false);
    CHECK(e.source == EstimateSource::Oracle);
}

TEST_CASE("oracle_estimate: force integrated in image space matches the sensor") {
    GripperModel m;
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 2.0);
    const PressureImage gt = render_pressure(w, m, spec);
    const EstimateFrame e = oracle_estimate(w, m, spec, h, kImgRows, kImgCols);
    const double f_sensor = total_force(gt);
    const double f_image = total_force(e.pressure, homography_area(h));
    CHECK(f_image == doctest::Approx(f_sensor).epsilon(0.03));
}

TEST_CASE("oracle_estimate: rejects a homography pointing the wrong way") {
    GripperModel m;
    SensorSpec spec;
    const WorldState w = world_at_force(m, 1.0);
    CHECK_THROWS_AS(
        oracle_estimate(w, m, spec, test_homography().inverse(), kImgRows, kImgCols),
        FrameMismatch);
}

TEST_CASE("noisy_estimate: with every degradation off it equals the oracle") {
    GripperModel m;
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 2.0);
    const EstimateFrame oracle = oracle_estimate(w, m, spec, h, kImgRows, kImgCols);
    const EstimateFrame noisy =
        noisy_estimate(w, m, spec, h, kImgRows, kImgCols, silent_noise());
    CHECK(noisy.source == EstimateSource::NoisyQuantized);
    REQUIRE(noisy.pressure.data.size() == oracle.pressure.data.size());
    for (size_t k = 0; k < noisy.pressure.data.size(); ++k)
        CHECK(noisy.pressure.data[k] == oracle.pressure.data[k]);
}

TEST_CASE("noisy_estimate: pure gain bias scales every pixel") {
    GripperModel m;
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 2.0);
    NoiseConfig n = silent_noise();
    n.gain_bias = 0.25;
    const EstimateFrame oracle = oracle_estimate(w, m, spec, h, kImgRows, kImgCols);
    const EstimateFrame noisy = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, n);
    for (size_t k = 0; k < noisy.pressure.data.size(); ++k)
        CHECK(noisy.pressure.data[k] == doctest::Approx(1.25 * oracle.pressure.data[k]));
}

TEST_CASE("noisy_estimate: quantized output takes only bin representative values") {
    GripperModel m;
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 2.0);
    NoiseConfig n = silent_noise();
    n.quantize_enabled = true;
    const EstimateFrame noisy = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, n);
    CHECK(any_contact(noisy.pressure));
    for (double v : noisy.pressure.data) {
        if (v == 0.0)
            continue;
        bool is_rep = false;
        for (int b = 1; b < n.quantize.n_bins; ++b)
            if (v == n.quantize.representative(b))
                is_rep = true;
        CHECK(is_rep);
    }
}

TEST_CASE("noisy_estimate: light contact vanishes below the miss threshold") {
    // A wide, soft footprint: 1.5 N per tip over r = 2 cm peaks at ~2.4 kPa,
    // under a 3 kPa miss threshold, so the whole reading is suppressed.
    GripperModel m;
    m.fingertip_radius = 0.02;
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 1.5);
    const double peak = m.normal_stiffness * w.gripper.penetration();
    REQUIRE(peak > kContactThresholdPa);
    REQUIRE(peak < 3000.0);

    NoiseConfig n = silent_noise();
    n.contact_miss_below = 3000.0;
    const EstimateFrame oracle = oracle_estimate(w, m, spec, h, kImgRows, kImgCols);
    const EstimateFrame noisy = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, n);
    CHECK(any_contact(oracle.pressure));
    CHECK(any_contact(noisy.pressure) == false);
    CHECK(total_force(noisy.pressure, homography_area(h)) <
          total_force(oracle.pressure, homography_area(h)));
}

TEST_CASE("noisy_estimate: blobs above the miss threshold survive intact") {
    GripperModel m; // default radius: 2 N per tip peaks well above 3 kPa
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 2.0);
    NoiseConfig n = silent_noise();
    n.contact_miss_below = 3000.0;
    const EstimateFrame oracle = oracle_estimate(w, m, spec, h, kImgRows, kImgCols);
    const EstimateFrame noisy = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, n);
    for (size_t k = 0; k < noisy.pressure.data.size(); ++k)
        CHECK(noisy.pressure.data[k] == oracle.pressure.data[k]);
}

TEST_CASE("noisy_estimate: jitter is a rigid shift, reproducible per seed and frame") {
    GripperModel m;
    SensorSpec spec;
    const Homography h = test_homography();
    WorldState w = world_at_force(m, 2.0);
    w.time = 1.23;
    NoiseConfig n = silent_noise();
    n.spatial_jitter = 2;
    n.seed = 99;

    const EstimateFrame a = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, n);
    const EstimateFrame b = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, n);
    for (size_t k = 0; k < a.pressure.data.size(); ++k)
        CHECK(a.pressure.data[k] == b.pressure.data[k]);

    // The jittered image is an integer translation of the unjittered one.
    const EstimateFrame base = noisy_estimate(w, m, spec, h, kImgRows, kImgCols, silent_noise());
    bool found = false;
    for (int di = -2; di <= 2 && !found; ++di)
        for (int dj = -2; dj <= 2 && !found; ++dj)
            if (detail::shift_image(base.pressure, di, dj).data == a.pressure.data)
                found = true;
    CHECK(found);
}

TEST_CASE("noisy_estimate: default degradations keep the estimate recognizable") {
    GripperModel m;
    SensorSpec spec;
    const Homography h = test_homography();
    const WorldState w = world_at_force(m, 2.0);
    const EstimateFrame oracle = oracle_estimate(w, m, spec, h, kImgRows, kImgCols);
    const EstimateFrame noisy =
        noisy_estimate(w, m, spec, h, kImgRows, kImgCols, NoiseConfig{});
    CHECK(any_contact(noisy.pressure));
    CHECK(volumetric_iou(oracle.pressure, noisy.pressure) >= 0.5);
    CHECK(contact_iou(oracle.pressure, noisy.pressure) >= 0.5);
}

TEST_CASE("replay_estimate: zero-order hold over recorded timestamps") {
    PressureImage a = PressureImage::zeros(2, 2, 0.0, 0.0, Frame::ImagePlane, 0.0);
    a.at(0, 0) = 1.0;
    PressureImage b = a;
    b.at(0, 0) = 2.0;
    b.timestamp = 0.5;
    const std::vector<PressureImage> frames = {a, b};

    CHECK(replay_estimate(frames, 0.0).pressure.at(0, 0) == 1.0);
    CHECK(replay_estimate(frames, 0.49).pressure.at(0, 0) == 1.0);
    CHECK(replay_estimate(frames, 0.5).pressure.at(0, 0) == 2.0);
    const EstimateFrame late = replay_estimate(frames, 3.0);
    CHECK(late.pressure.at(0, 0) == 2.0);
    CHECK(late.latency == doctest::Approx(2.5));
    CHECK(late.source == EstimateSource::Replay);
}

TEST_CASE("replay_estimate: rejects queries before the record or empty records") {
    PressureImage a = PressureImage::zeros(1, 1, 0.0, 0.0, Frame::ImagePlane, 1.0);
    CHECK_THROWS_AS(replay_estimate({a}, 0.5), OutOfRange);
    CHECK_THROWS_AS(replay_estimate({}, 0.0), OutOfRange);
}
