#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pressim/errors.hpp"
#include "pressim/pressure.hpp"

namespace pressim {

/// Planar FSR sensor array geometry. Defaults: 185x105 taxels over a
/// 23x13 cm active area at 100 Hz.
struct SensorSpec {
    int rows = 105;
    int cols = 185;
    double active_w = 0.23; // m, along columns
    double active_h = 0.13; // m, along rows
    double rate = 100.0;    // Hz

    double pitch_x() const { return active_w / cols; } // ~1.24 mm
    double pitch_y() const { return active_h / rows; }
};

/// 3x3 projective map between the sensor's metric plane and camera image
/// pixels. Normalized so h(2,2) == 1. Frames are tagged so direction bugs
/// fail loudly at call sites.
struct Homography {
    Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
    Frame src_frame = Frame::SensorPlane;
    Frame dst_frame = Frame::ImagePlane;

    std::pair<double, double> apply(double x, double y) const {
        const double w = h(2, 0) * x + h(2, 1) * y + h(2, 2);
        return {(h(0, 0) * x + h(0, 1) * y + h(0, 2)) / w,
                (h(1, 0) * x + h(1, 1) * y + h(1, 2)) / w};
    }

    Homography inverse() const {
        Homography inv;
        inv.h = h.inverse();
        if (std::abs(inv.h(2, 2)) > 1e-300)
            inv.h /= inv.h(2, 2);
        inv.src_frame = dst_frame;
        inv.dst_frame = src_frame;
        return inv;
    }
};

struct Correspondence {
    double src_x = 0.0, src_y = 0.0;
    double dst_x = 0.0, dst_y = 0.0;
};

/// Normalized DLT (Hartley normalization: centroid shift + sqrt(2) mean
/// distance scaling). Minimizes algebraic error; exact for 4 non-degenerate
/// pairs.
inline Homography estimate_homography(const std::vector<Correspondence>& pairs,
                                      Frame src_frame = Frame::SensorPlane,
                                      Frame dst_frame = Frame::ImagePlane) {
    const int n = static_cast<int>(pairs.size());
    if (n < 4)
        throw DegenerateConfiguration("estimate_homography: need at least 4 correspondences");

    auto normalizer = [&](bool src) {
        double cx = 0.0, cy = 0.0;
        for (const auto& c : pairs) {
            cx += src ? c.src_x : c.dst_x;
            cy += src ? c.src_y : c.dst_y;
        }
        cx /= n;
        cy /= n;
        double mean_d = 0.0;
        for (const auto& c : pairs) {
            const double dx = (src ? c.src_x : c.dst_x) - cx;
            const double dy = (src ? c.src_y : c.dst_y) - cy;
            mean_d += std::sqrt(dx * dx + dy * dy);
        }
        mean_d /= n;
        const double s = mean_d > 1e-300 ? std::sqrt(2.0) / mean_d : 1.0;
        Eigen::Matrix3d t;
        t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
        return t;
    };

    const Eigen::Matrix3d t_src = normalizer(true);
    const Eigen::Matrix3d t_dst = normalizer(false);

    Eigen::MatrixXd a(2 * n, 9);
    for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d ps = t_src * Eigen::Vector3d(pairs[k].src_x, pairs[k].src_y, 1.0);
        const Eigen::Vector3d pd = t_dst * Eigen::Vector3d(pairs[k].dst_x, pairs[k].dst_y, 1.0);
        const double x = ps.x(), y = ps.y();
        const double u = pd.x(), v = pd.y();
        a.row(2 * k) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
        a.row(2 * k + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // With exact data the 9th singular value is ~0; rank deficiency beyond
    // that (collinear sources) leaves a 2+ dimensional null space.
    if (sv(7) < 1e-10 * sv(0))
        throw DegenerateConfiguration("estimate_homography: rank-deficient DLT system");

    const Eigen::VectorXd hv = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);

    Eigen::Matrix3d h = t_dst.inverse() * hn * t_src;
    if (std::abs(h(2, 2)) < 1e-300 || std::abs(h.determinant()) < 1e-300)
        throw DegenerateConfiguration("estimate_homography: degenerate solution");
    h /= h(2, 2);
    if (std::abs(h.determinant()) <= 1e-12)
        throw DegenerateConfiguration("estimate_homography: near-singular homography");

    Homography out;
    out.h = h;
    out.src_frame = src_frame;
    out.dst_frame = dst_frame;
    return out;
}

inline double bilinear_sample(const PressureImage& src, double fi, double fj) {
    if (fi < 0.0 || fj < 0.0 || fi > src.rows - 1 || fj > src.cols - 1)
        return 0.0;
    const int i0 = static_cast<int>(std::floor(fi));
    const int j0 = static_cast<int>(std::floor(fj));
    const int i1 = std::min(i0 + 1, src.rows - 1);
    const int j1 = std::min(j0 + 1, src.cols - 1);
    const double di = fi - i0, dj = fj - j0;
    return src.at(i0, j0) * (1 - di) * (1 - dj) + src.at(i0, j1) * (1 - di) * dj +
           src.at(i1, j0) * di * (1 - dj) + src.at(i1, j1) * di * dj;
}

/// Inverse-mapped bilinear warp. Pressure is intensive: values are copied,
/// never rescaled by area. Pixels mapping outside the source read 0 Pa.
/// A sensor-plane destination needs a metric pitch; it defaults to the
/// source pitch and must be given explicitly when warping image -> sensor.
inline PressureImage warp_pressure(const PressureImage& src, const Homography& h, int dst_rows,
                                   int dst_cols, double dst_pitch_x = -1.0,
                                   double dst_pitch_y = -1.0) {
    if (src.frame != h.src_frame)
        throw FrameMismatch("warp_pressure: homography source frame does not match image frame");

    const Frame dst_frame = h.dst_frame;
    if (dst_frame == Frame::SensorPlane) {
        if (dst_pitch_x <= 0.0)
            dst_pitch_x = src.pitch_x;
        if (dst_pitch_y <= 0.0)
            dst_pitch_y = src.pitch_y;
        if (dst_pitch_x <= 0.0 || dst_pitch_y <= 0.0)
            throw FrameMismatch("warp_pressure: sensor-plane destination needs a pixel pitch");
    } else {
        dst_pitch_x = 0.0;
        dst_pitch_y = 0.0;
    }
    PressureImage dst =
        PressureImage::zeros(dst_rows, dst_cols, dst_pitch_x, dst_pitch_y, dst_frame, src.timestamp);

    const Homography inv = h.inverse();
    for (int i = 0; i < dst_rows; ++i) {
        for (int j = 0; j < dst_cols; ++j) {
            const auto [dx, dy] = dst.pixel_center(i, j);
            const auto [sx, sy] = inv.apply(dx, dy);
            double fi, fj;
            if (src.frame == Frame::SensorPlane) {
                fj = sx / src.pitch_x - 0.5;
                fi = sy / src.pitch_y - 0.5;
            } else {
                fj = sx;
                fi = sy;
            }
            dst.at(i, j) = bilinear_sample(src, fi, fj);
        }
    }
    return dst;
}

/// Physical area of one image pixel: |det J| of the image->sensor map at the
/// pixel center, in m^2/px^2. The homography may be given in either
/// direction; it is oriented image->sensor internally.
inline double pixel_area(const Homography& h, int row, int col) {
    const Eigen::Matrix3d g =
        (h.src_frame == Frame::ImagePlane && h.dst_frame == Frame::SensorPlane) ? h.h
                                                                                : h.inverse().h;
    const double u = static_cast<double>(col);
    const double v = static_cast<double>(row);
    const double w = g(2, 0) * u + g(2, 1) * v + g(2, 2);
    if (w <= 0.0)
        throw OutsidePlane("pixel_area: pixel back-projects behind the plane");
    const double nx = g(0, 0) * u + g(0, 1) * v + g(0, 2);
    const double ny = g(1, 0) * u + g(1, 1) * v + g(1, 2);
    // d(n/w)/du = (dn*w - n*dw) / w^2
    const double xu = (g(0, 0) * w - nx * g(2, 0)) / (w * w);
    const double xv = (g(0, 1) * w - nx * g(2, 1)) / (w * w);
    const double yu = (g(1, 0) * w - ny * g(2, 0)) / (w * w);
    const double yv = (g(1, 1) * w - ny * g(2, 1)) / (w * w);
    return std::abs(xu * yv - xv * yu);
}

/// Area callback for integrating image-frame pressure into total force.
inline AreaFn homography_area(const Homography& h) {
    const Homography g = (h.src_frame == Frame::ImagePlane) ? h : h.inverse();
    return [g](int i, int j) { return pixel_area(g, i, j); };
}

} // namespace pressim
