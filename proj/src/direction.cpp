#include "vtrack/direction.hpp"

#include <cmath>
#include <cstddef>

#include "vtrack/error.hpp"

namespace vtrack {

namespace {

int kernel_radius(double sigma) { return static_cast<int>(std::ceil(4.0 * sigma)); }

double texel_or_zero(const ProbMap& map, long x, long y) {
    if (x < 0 || y < 0 || x >= static_cast<long>(map.width()) || y >= static_cast<long>(map.height()))
        return 0.0;
    return map.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
}

// 1-D convolution of a W x H plane along x (axis 0) or y (axis 1), zero padded.
std::vector<double> convolve(const std::vector<double>& src, std::size_t w, std::size_t h,
                             const std::vector<double>& kernel, int axis, Exec exec) {
    std::vector<double> dst(src.size(), 0.0);
    const long r = static_cast<long>(kernel.size() / 2);
    const long lw = static_cast<long>(w);
    const long lh = static_cast<long>(h);
    const bool parallel = exec == Exec::parallel;
#pragma omp parallel for if (parallel) schedule(static)
    for (long y = 0; y < lh; ++y) {
        for (long x = 0; x < lw; ++x) {
            double acc = 0.0;
            for (long k = -r; k <= r; ++k) {
                const long sx = axis == 0 ? x - k : x;
                const long sy = axis == 1 ? y - k : y;
                if (sx < 0 || sy < 0 || sx >= lw || sy >= lh) continue;
                acc += kernel[static_cast<std::size_t>(k + r)] *
                       src[static_cast<std::size_t>(sy * lw + sx)];
            }
            dst[static_cast<std::size_t>(y * lw + x)] = acc;
        }
    }
    return dst;
}

void check_inside(const ProbMap& map, const Vec2& p) {
    if (!map.contains(p))
        throw Error(ErrorKind::OutOfBounds,
                    "orientation requested at (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
}

}  // namespace

void TensorConfig::validate() const {
    if (!(grad_sigma > 0.0) || !(window_sigma > 0.0))
        throw Error(ErrorKind::InvalidArgument, "tensor sigmas must be positive");
    if (!(aniso_eps >= 0.0 && aniso_eps < 1.0))
        throw Error(ErrorKind::InvalidArgument, "aniso_eps must lie in [0, 1)");
}

std::vector<double> gaussian_kernel(double sigma) {
    const int r = kernel_radius(sigma);
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[static_cast<std::size_t>(i + r)];
    }
    for (auto& v : k) v /= sum;
    return k;
}

std::vector<double> gaussian_derivative_kernel(double sigma) {
    const int r = kernel_radius(sigma);
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    double moment = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = -i * std::exp(-0.5 * i * i / (sigma * sigma));
        k[static_cast<std::size_t>(i + r)] = v;
        moment += i * v;
    }
    // convolution with a ramp x gives -sum(i * k[i]); scale that to 1
    for (auto& v : k) v /= -moment;
    return k;
}

// Squared gradients of a probability map below this are round-off from
// flat regions, not structure.
constexpr double kMinTrace = 1e-12;

Vec2 minor_eigenvector(const Tensor2& t, const Vec2& hint, double aniso_eps) {
    const double trace = t.xx + t.yy;
    const double gap = std::hypot(t.xx - t.yy, 2.0 * t.xy);
    if (!(trace > kMinTrace) || gap < aniso_eps * trace) return hint;

    const double major = 0.5 * std::atan2(2.0 * t.xy, t.xx - t.yy);
    Vec2 v{-std::sin(major), std::cos(major)};
    if (dot(v, hint) < 0.0) v = -v;
    return v;
}

Tensor2 structure_tensor_at(const ProbMap& interior, const Vec2& p, const TensorConfig& cfg) {
    const auto g = gaussian_kernel(cfg.grad_sigma);
    const auto d = gaussian_derivative_kernel(cfg.grad_sigma);
    const long rg = static_cast<long>(g.size() / 2);

    const int rw = kernel_radius(cfg.window_sigma);
    double norm = 0.0;
    for (int i = -rw; i <= rw; ++i) norm += std::exp(-0.5 * i * i / (cfg.window_sigma * cfg.window_sigma));

    const long lw = static_cast<long>(interior.width());
    const long lh = static_cast<long>(interior.height());
    const long x_lo = std::max(0L, static_cast<long>(std::ceil(p.x - rw)));
    const long x_hi = std::min(lw - 1, static_cast<long>(std::floor(p.x + rw)));
    const long y_lo = std::max(0L, static_cast<long>(std::ceil(p.y - rw)));
    const long y_hi = std::min(lh - 1, static_cast<long>(std::floor(p.y + rw)));

    Tensor2 t;
    for (long qy = y_lo; qy <= y_hi; ++qy) {
        for (long qx = x_lo; qx <= x_hi; ++qx) {
            double gx = 0.0;
            double gy = 0.0;
            for (long b = -rg; b <= rg; ++b) {
                for (long a = -rg; a <= rg; ++a) {
                    const double v = texel_or_zero(interior, qx - a, qy - b);
                    if (v == 0.0) continue;
                    gx += d[static_cast<std::size_t>(a + rg)] * g[static_cast<std::size_t>(b + rg)] * v;
                    gy += g[static_cast<std::size_t>(a + rg)] * d[static_cast<std::size_t>(b + rg)] * v;
                }
            }
            const double dx = static_cast<double>(qx) - p.x;
            const double dy = static_cast<double>(qy) - p.y;
            const double s2 = cfg.window_sigma * cfg.window_sigma;
            const double wgt = std::exp(-0.5 * dx * dx / s2) * std::exp(-0.5 * dy * dy / s2) / (norm * norm);
            t.xx += wgt * gx * gx;
            t.xy += wgt * gx * gy;
            t.yy += wgt * gy * gy;
        }
    }
    return t;
}

Vec2 orientation_at(const ProbMap& interior, const Vec2& p, const TensorConfig& cfg, const Vec2& hint) {
    check_inside(interior, p);
    return minor_eigenvector(structure_tensor_at(interior, p, cfg), hint, cfg.aniso_eps);
}

TensorField::TensorField(const ProbMap& interior, const TensorConfig& cfg, Exec exec)
    : width_(interior.width()), height_(interior.height()), cfg_(cfg) {
    cfg_.validate();
    const std::vector<double> image(interior.data().begin(), interior.data().end());
    const auto g = gaussian_kernel(cfg.grad_sigma);
    const auto d = gaussian_derivative_kernel(cfg.grad_sigma);
    const auto window = gaussian_kernel(cfg.window_sigma);

    const auto gx = convolve(convolve(image, width_, height_, g, 1, exec), width_, height_, d, 0, exec);
    const auto gy = convolve(convolve(image, width_, height_, g, 0, exec), width_, height_, d, 1, exec);

    std::vector<double> xx(image.size()), xy(image.size()), yy(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        xx[i] = gx[i] * gx[i];
        xy[i] = gx[i] * gy[i];
        yy[i] = gy[i] * gy[i];
    }
    auto smooth = [&](const std::vector<double>& plane) {
        return convolve(convolve(plane, width_, height_, window, 0, exec), width_, height_, window, 1, exec);
    };
    const auto sxx = smooth(xx);
    const auto sxy = smooth(xy);
    const auto syy = smooth(yy);

    field_.resize(image.size());
    for (std::size_t i = 0; i < field_.size(); ++i) field_[i] = {sxx[i], sxy[i], syy[i]};
}

Tensor2 TensorField::interpolate(const Vec2& p) const {
    const auto x0 = std::min(static_cast<std::size_t>(p.x), width_ >= 2 ? width_ - 2 : 0);
    const auto y0 = std::min(static_cast<std::size_t>(p.y), height_ >= 2 ? height_ - 2 : 0);
    const std::size_t x1 = std::min(x0 + 1, width_ - 1);
    const std::size_t y1 = std::min(y0 + 1, height_ - 1);
    const double fx = p.x - static_cast<double>(x0);
    const double fy = p.y - static_cast<double>(y0);
    const double w00 = (1 - fx) * (1 - fy), w10 = fx * (1 - fy), w01 = (1 - fx) * fy, w11 = fx * fy;
    const Tensor2 a = at(x0, y0), b = at(x1, y0), c = at(x0, y1), e = at(x1, y1);
    return {w00 * a.xx + w10 * b.xx + w01 * c.xx + w11 * e.xx,
            w00 * a.xy + w10 * b.xy + w01 * c.xy + w11 * e.xy,
            w00 * a.yy + w10 * b.yy + w01 * c.yy + w11 * e.yy};
}

Vec2 TensorField::orientation(const Vec2& p, const Vec2& hint) const {
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= static_cast<double>(width_ - 1) &&
          p.y <= static_cast<double>(height_ - 1)))
        throw Error(ErrorKind::OutOfBounds,
                    "orientation requested at (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    return minor_eigenvector(interpolate(p), hint, cfg_.aniso_eps);
}

bool operator==(const TensorField& a, const TensorField& b) {
    if (a.width_ != b.width_ || a.height_ != b.height_) return false;
    for (std::size_t i = 0; i < a.field_.size(); ++i) {
        const auto& s = a.field_[i];
        const auto& t = b.field_[i];
        if (s.xx != t.xx || s.xy != t.xy || s.yy != t.yy) return false;
    }
    return true;
}

}  // namespace vtrack
