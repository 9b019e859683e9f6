#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "pressim/calibration.hpp"
#include "pressim/geometry.hpp"

using namespace pressim;

namespace {

Homography make_homography(const Eigen::Matrix3d& m, Frame src = Frame::SensorPlane,
                           Frame dst = Frame::ImagePlane) {
    Homography h;
    h.h = m / m(2, 2);
    h.src_frame = src;
    h.dst_frame = dst;
    return h;
}

// Random well-conditioned projective map: affine core plus small projective
// terms. Used by the generate-and-recover oracle.
Homography random_projective(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix3d m;
    m << 800.0 + 200.0 * u(rng), 60.0 * u(rng), 40.0 + 20.0 * u(rng), 60.0 * u(rng),
        800.0 + 200.0 * u(rng), 40.0 + 20.0 * u(rng), 0.3 * u(rng), 0.3 * u(rng), 1.0;
    return make_homography(m);
}

std::vector<Correspondence> sample_correspondences(const Homography& h, int n,
                                                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(0.0, 0.23), uy(0.0, 0.13);
    std::vector<Correspondence> pairs;
    for (int k = 0; k < n; ++k) {
        Correspondence c;
        c.src_x = ux(rng);
        c.src_y = uy(rng);
        std::tie(c.dst_x, c.dst_y) = h.apply(c.src_x, c.src_y);
        pairs.push_back(c);
    }
    return pairs;
}

PressureImage smooth_gaussian_field(int rows, int cols, double pitch) {
    PressureImage p = PressureImage::zeros(rows, cols, pitch, pitch);
    const double cx = cols * pitch / 2.0, cy = rows * pitch / 2.0;
    const double sigma = std::min(cx, cy) / 3.0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const auto [x, y] = p.pixel_center(i, j);
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            p.at(i, j) = 5000.0 * std::exp(-r2 / (2.0 * sigma * sigma));
        }
    }
    return p;
}

} // namespace

TEST_CASE("estimate_homography: unit square to itself gives identity") {
    std::vector<Correspondence> pairs = {
        {0, 0, 0, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}, {0, 1, 0, 1}};
    const Homography h = estimate_homography(pairs);
    CHECK((h.h - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("estimate_homography: 2x scaled square gives diag(2,2,1)") {
    std::vector<Correspondence> pairs = {
        {0, 0, 0, 0}, {1, 0, 2, 0}, {1, 1, 2, 2}, {0, 1, 0, 2}};
    const Homography h = estimate_homography(pairs);
    Eigen::Matrix3d expected = Eigen::Vector3d(2, 2, 1).asDiagonal();
    CHECK((h.h - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("estimate_homography: four exact pairs map within 1e-6 px") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Homography truth = random_projective(rng);
        const auto pairs = sample_correspondences(truth, 4, rng);
        Homography est;
        try {
            est = estimate_homography(pairs);
        } catch (const DegenerateConfiguration&) {
            continue; // unlucky near-collinear draw
        }
        for (const auto& c : pairs) {
            const auto [u, v] = est.apply(c.src_x, c.src_y);
            CHECK(std::abs(u - c.dst_x) < 1e-6);
            CHECK(std::abs(v - c.dst_y) < 1e-6);
        }
    }
}

TEST_CASE("estimate_homography: generate-and-recover on random maps") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const Homography truth = random_projective(rng);
        const auto pairs = sample_correspondences(truth, 8, rng);
        const Homography est = estimate_homography(pairs);
        const double rel =
            (est.h - truth.h).cwiseAbs().maxCoeff() / truth.h.cwiseAbs().maxCoeff();
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("estimate_homography: collinear sources are degenerate") {
    std::vector<Correspondence> pairs = {
        {0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3}, {4, 4, 4, 4}};
    CHECK_THROWS_AS(estimate_homography(pairs), DegenerateConfiguration);
}

TEST_CASE("homography invariants: inverse round trip") {
    std::mt19937_64 rng(3);
    const Homography h = random_projective(rng);
    CHECK(std::abs(h.h.determinant()) > 1e-12);
    const Homography inv = h.inverse();
    for (double x : {0.01, 0.1, 0.2}) {
        for (double y : {0.02, 0.07, 0.12}) {
            const auto [u, v] = h.apply(x, y);
            const auto [xb, yb] = inv.apply(u, v);
            CHECK(std::abs(xb - x) < 1e-9);
            CHECK(std::abs(yb - y) < 1e-9);
        }
    }
    CHECK(inv.src_frame == Frame::ImagePlane);
    CHECK(inv.dst_frame == Frame::SensorPlane);
}

TEST_CASE("warp_pressure: identity homography in image frame is exact") {
    PressureImage src = PressureImage::zeros(12, 15, 0.0, 0.0, Frame::ImagePlane);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 9000.0);
    for (double& v : src.data)
        v = u(rng);
    Homography h = make_homography(Eigen::Matrix3d::Identity(), Frame::ImagePlane,
                                   Frame::ImagePlane);
    const PressureImage dst = warp_pressure(src, h, 12, 15);
    for (size_t k = 0; k < src.data.size(); ++k)
        CHECK(dst.data[k] == doctest::Approx(src.data[k]).epsilon(1e-12));
}

TEST_CASE("warp_pressure: all-zero source stays zero") {
    PressureImage src = PressureImage::zeros(20, 30, 1e-3, 1e-3);
    std::mt19937_64 rng(11);
    const Homography h = random_projective(rng);
    const PressureImage dst = warp_pressure(src, h, 40, 60);
    for (double v : dst.data)
        CHECK(v == 0.0);
}

TEST_CASE("warp_pressure: uniform field is a fixed point of interpolation") {
    PressureImage src = PressureImage::zeros(40, 40, 1e-3, 1e-3);
    for (double& v : src.data)
        v = 1000.0;
    // 2x magnification into image pixels.
    Eigen::Matrix3d m = Eigen::Vector3d(2000.0, 2000.0, 1.0).asDiagonal();
    const Homography h = make_homography(m);
    const PressureImage dst = warp_pressure(src, h, 80, 80);
    // Interior pixels (away from the zero-padded border).
    for (int i = 10; i < 70; ++i)
        for (int j = 10; j < 70; ++j)
            CHECK(dst.at(i, j) == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("warp_pressure: frame tag mismatch is rejected") {
    PressureImage src = PressureImage::zeros(4, 4, 0.0, 0.0, Frame::ImagePlane);
    // Homography expects a sensor-plane source.
    const Homography h =
        make_homography(Eigen::Matrix3d::Identity(), Frame::SensorPlane, Frame::ImagePlane);
    CHECK_THROWS_AS(warp_pressure(src, h, 4, 4), FrameMismatch);
}

TEST_CASE("warp round trip restores smooth fields within 2% of peak") {
    const PressureImage src = smooth_gaussian_field(60, 80, 1e-3);
    std::mt19937_64 rng(17);
    const Homography h = random_projective(rng);
    const PressureImage warped = warp_pressure(src, h, 160, 260);
    const PressureImage back = warp_pressure(warped, h.inverse(), 60, 80, 1e-3, 1e-3);
    double peak = 0.0;
    for (double v : src.data)
        peak = std::max(peak, v);
    double worst = 0.0;
    for (int i = 4; i < 56; ++i)
        for (int j = 4; j < 76; ++j)
            worst = std::max(worst, std::abs(back.at(i, j) - src.at(i, j)));
    CHECK(worst <= 0.02 * peak);
}

TEST_CASE("pixel_area: identity map at 1 mm pitch gives 1e-6 m^2") {
    Eigen::Matrix3d m = Eigen::Vector3d(1e-3, 1e-3, 1.0).asDiagonal();
    const Homography img_to_sensor = make_homography(m, Frame::ImagePlane, Frame::SensorPlane);
    CHECK(pixel_area(img_to_sensor, 5, 7) == doctest::Approx(1e-6).epsilon(1e-12));
}

TEST_CASE("pixel_area: 2x magnification quadruples the area") {
    Eigen::Matrix3d m = Eigen::Vector3d(2e-3, 2e-3, 1.0).asDiagonal();
    const Homography img_to_sensor = make_homography(m, Frame::ImagePlane, Frame::SensorPlane);
    CHECK(pixel_area(img_to_sensor, 3, 3) == doctest::Approx(4e-6).epsilon(1e-12));
}

TEST_CASE("pixel_area: matches finite differences on random maps") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Homography h = random_projective(rng); // sensor -> image
        const Homography g = h.inverse();            // image -> sensor
        const int row = 40 + trial, col = 60 + 2 * trial;
        const double analytic = pixel_area(g, row, col);
        const double e = 1e-4;
        const auto [x0, y0] = g.apply(col - e, static_cast<double>(row));
        const auto [x1, y1] = g.apply(col + e, static_cast<double>(row));
        const auto [x2, y2] = g.apply(static_cast<double>(col), row - e);
        const auto [x3, y3] = g.apply(static_cast<double>(col), row + e);
        const double du_x = (x1 - x0) / (2 * e), du_y = (y1 - y0) / (2 * e);
        const double dv_x = (x3 - x2) / (2 * e), dv_y = (y3 - y2) / (2 * e);
        const double fd = std::abs(du_x * dv_y - du_y * dv_x);
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("pixel_area: behind-plane pixels raise OutsidePlane") {
    Eigen::Matrix3d m;
    m << 1e-3, 0, 0, 0, 1e-3, 0, -0.1, 0, 1.0; // w flips sign for large u
    const Homography g = make_homography(m, Frame::ImagePlane, Frame::SensorPlane);
    CHECK_THROWS_AS(pixel_area(g, 0, 100), OutsidePlane);
}

TEST_CASE("pixel_area is positive for in-plane pixels") {
    std::mt19937_64 rng(31);
    const Homography h = random_projective(rng);
    for (int i = 0; i < 150; i += 17)
        for (int j = 0; j < 250; j += 23)
            CHECK(pixel_area(h.inverse(), i, j) > 0.0);
}

TEST_CASE("total force is conserved under warping within 3%") {
    const PressureImage src = smooth_gaussian_field(105, 185, 1.24e-3);
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 5; ++trial) {
        const Homography h = random_projective(rng);
        const PressureImage warped = warp_pressure(src, h, 220, 300);
        const double f_sensor = total_force(src);
        const double f_image = total_force(warped, homography_area(h));
        CHECK(f_image == doctest::Approx(f_sensor).epsilon(0.03));
    }
}

TEST_CASE("calibration file round trip") {
    std::mt19937_64 rng(53);
    std::map<std::string, Homography> cal;
    cal["cam0"] = random_projective(rng);
    cal["cam1"] = random_projective(rng);
    const std::string path = "test_calibration.json";
    write_calibration(path, cal);
    const auto loaded = read_calibration(path);
    REQUIRE(loaded.size() == 2);
    for (const auto& [name, h] : cal) {
        CHECK((loaded.at(name).h - h.h).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(loaded.at(name).src_frame == h.src_frame);
        CHECK(loaded.at(name).dst_frame == h.dst_frame);
    }
    std::remove(path.c_str());
}
