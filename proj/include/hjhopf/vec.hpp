#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hjhopf/error.hpp"

namespace hjhopf {

inline constexpr int kMaxDim = 3;

/// Small fixed-capacity point in R^n, n <= kMaxDim.
class Vec {
public:
    Vec() = default;
    explicit Vec(int n, double fill = 0.0) : n_(n) {
        if (n < 1 || n > kMaxDim)
            throw ConfigError("dimension must be in 1.." + std::to_string(kMaxDim) + ", got " +
                              std::to_string(n));
        v_.fill(fill);
    }
    Vec(std::initializer_list<double> xs) : Vec(static_cast<int>(xs.size())) {
        std::copy(xs.begin(), xs.end(), v_.begin());
    }
    explicit Vec(std::span<const double> xs) : Vec(static_cast<int>(xs.size())) {
        std::copy(xs.begin(), xs.end(), v_.begin());
    }

    int size() const noexcept { return n_; }
    double& operator[](int i) noexcept { return v_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const noexcept { return v_[static_cast<std::size_t>(i)]; }
    double* begin() noexcept { return v_.data(); }
    double* end() noexcept { return v_.data() + n_; }
    const double* begin() const noexcept { return v_.data(); }
    const double* end() const noexcept { return v_.data() + n_; }
    std::span<const double> span() const noexcept { return {v_.data(), static_cast<std::size_t>(n_)}; }
    std::vector<double> to_vector() const { return {begin(), end()}; }

    Vec& operator+=(const Vec& o) noexcept {
        for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) noexcept {
        for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(double s) noexcept {
        for (int i = 0; i < n_; ++i) v_[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
    friend Vec operator*(Vec a, double s) noexcept { return a *= s; }
    friend Vec operator*(double s, Vec a) noexcept { return a *= s; }
    friend bool operator==(const Vec& a, const Vec& b) noexcept {
        return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
    }

private:
    std::array<double, kMaxDim> v_{};
    int n_ = 0;
};

inline double dot(const Vec& a, const Vec& b) noexcept {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) noexcept { return std::sqrt(dot(a, a)); }

inline double distance(const Vec& a, const Vec& b) noexcept { return norm(a - b); }

/// Axis-aligned box [lo, hi] in R^n.
struct Box {
    Vec lo;
    Vec hi;

    Box() = default;
    Box(Vec lo_, Vec hi_) : lo(lo_), hi(hi_) {
        if (lo.size() != hi.size()) throw ConfigError("box corners have different dimensions");
        for (int i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
                throw ConfigError("box must have positive volume with finite corners");
    }
    /// Cube [lo, hi]^n.
    static Box cube(int n, double lo, double hi) { return Box(Vec(n, lo), Vec(n, hi)); }

    int dim() const noexcept { return lo.size(); }
    double diameter() const noexcept { return distance(lo, hi); }
    Vec center() const noexcept { return 0.5 * (lo + hi); }

    bool contains(const Vec& p, double slack = 0.0) const noexcept {
        for (int i = 0; i < dim(); ++i)
            if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
        return true;
    }
    /// Distance from an interior point to the nearest face.
    double distance_to_boundary(const Vec& p) const noexcept {
        double d = INFINITY;
        for (int i = 0; i < dim(); ++i) d = std::min({d, p[i] - lo[i], hi[i] - p[i]});
        return d;
    }
    Vec clamp(Vec p) const noexcept {
        for (int i = 0; i < dim(); ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
        return p;
    }
    /// Box with the same center and each half-width multiplied by `factor`.
    Box scaled(double factor) const {
        const Vec c = center();
        return Box(c + factor * (lo - c), c + factor * (hi - c));
    }
};

/// Evenly spaced nodes lo..hi inclusive (count >= 2).
inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> xs(static_cast<std::size_t>(count));
    if (count == 1) {
        xs[0] = 0.5 * (lo + hi);
        return xs;
    }
    for (int i = 0; i < count; ++i)
        xs[static_cast<std::size_t>(i)] = (i == count - 1) ? hi : lo + (hi - lo) * i / (count - 1);
    return xs;
}

/// Tensor grid over a box, `per_axis` nodes per axis, row-major with axis 0 fastest.
std::vector<Vec> tensor_grid(const Box& box, int per_axis);

}  // namespace hjhopf
