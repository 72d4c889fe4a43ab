#pragma once

// Brute-force reference implementations, written independently of the
// library: dense linear algebra, textbook formulas, no shared helpers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vtrack/filter.hpp"
#include "vtrack/raster.hpp"

namespace oracle {

// Sum over the four surrounding texels of value * (1 - |dx|) * (1 - |dy|).
inline double bilinear(const vtrack::ProbMap& m, double x, double y) {
    const double W = static_cast<double>(m.width()), H = static_cast<double>(m.height());
    if (!(x >= 0 && y >= 0 && x <= W - 1 && y <= H - 1)) return 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < m.height(); ++j)
        for (std::size_t i = 0; i < m.width(); ++i) {
            const double wx = 1.0 - std::abs(x - static_cast<double>(i));
            const double wy = 1.0 - std::abs(y - static_cast<double>(j));
            if (wx > 0 && wy > 0) acc += wx * wy * m.at(i, j);
        }
    return acc;
}

struct Chi {
    double x[3], y[3];
};

inline Chi chi(double lx, double ly, double rx, double ry) {
    Chi c{};
    for (int j = 1; j <= 3; ++j) {
        c.x[j - 1] = lx + (rx - lx) * j / 4.0;
        c.y[j - 1] = ly + (ry - ly) * j / 4.0;
    }
    return c;
}

struct Mean {
    double dx, dy, ax, ay, wl, wr;
};

inline Mean weighted_mean(const vtrack::ParticleSet& ps) {
    Mean m{0, 0, 0, 0, 0, 0};
    double wsum = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) wsum += ps.weights[i];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double w = ps.weights[i] / wsum;
        m.dx += w * ps.states[i].dir.x;
        m.dy += w * ps.states[i].dir.y;
        m.ax += w * ps.states[i].anchor.x;
        m.ay += w * ps.states[i].anchor.y;
        m.wl += w * ps.states[i].wl;
        m.wr += w * ps.states[i].wr;
    }
    const double n = std::sqrt(m.dx * m.dx + m.dy * m.dy);
    m.dx /= n;
    m.dy /= n;
    return m;
}

// Standard deviation of a - b with an explicit divisor offset (ddof = 0 or 1).
inline double std_of_difference(const std::vector<double>& a, const std::vector<double>& b, int ddof) {
    const std::size_t n = a.size();
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    return std::sqrt(ss / static_cast<double>(static_cast<int>(n) - ddof));
}

inline double mean_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

// Natural cubic spline: assemble the full (n x n) system for the knot second
// derivatives and solve it by Gaussian elimination with partial pivoting.
inline std::vector<double> natural_spline_at(const std::vector<double>& x, const std::vector<double>& y,
                                             const std::vector<double>& query) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    A[0][0] = 1.0;
    A[n - 1][n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        A[i][i - 1] = h0 / 6.0;
        A[i][i] = (h0 + h1) / 3.0;
        A[i][i + 1] = h1 / 6.0;
        A[i][n] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<double> M(n);
    for (std::size_t i = 0; i < n; ++i) M[i] = A[i][n] / A[i][i];

    std::vector<double> out;
    for (double q : query) {
        std::size_t i = 0;
        while (i + 2 < n && q > x[i + 1]) ++i;
        const double h = x[i + 1] - x[i];
        const double a = (x[i + 1] - q) / h, b = (q - x[i]) / h;
        out.push_back(a * y[i] + b * y[i + 1] + ((a * a * a - a) * M[i] + (b * b * b - b) * M[i + 1]) * h * h / 6.0);
    }
    return out;
}

inline std::vector<double> spline_to_100(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> q(100);
    for (int i = 0; i < 100; ++i) q[static_cast<std::size_t>(i)] = x.front() + (x.back() - x.front()) * i / 99.0;
    return natural_spline_at(x, y, q);
}

// Hyndman-Fan type 7 quantile.
inline double quantile7(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
}

}  // namespace oracle
