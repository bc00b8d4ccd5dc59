#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "hjhopf/error.hpp"
#include "hjhopf/vec.hpp"

namespace hjhopf {

/// Absolute tolerance of every time integral in the library.
inline constexpr double kQuadratureTol = 1e-10;

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vec& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

template <class V, class F>
V simpson_step(const F& f, double a, double b, const V& fa, const V& fm, const V& fb,
               const V& whole, double tol, int depth, int min_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const V flm = f(lm);
    const V frm = f(rm);
    const V left = ((m - a) / 6.0) * (fa + 4.0 * flm + fm);
    const V right = ((b - m) / 6.0) * (fm + 4.0 * frm + fb);
    const V delta = (left + right) - whole;
    if (depth <= 0) throw NumericError("adaptive Simpson exceeded its recursion limit");
    if (min_depth <= 0 && magnitude(delta) <= 15.0 * tol)
        return left + right + (1.0 / 15.0) * delta;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
/// V is double or Vec. Non-finite integrand values propagate as DomainError from f.
template <class V, class F>
V adaptive_simpson(const F& f, double a, double b, double tol = kQuadratureTol) {
    if (a == b) return 0.0 * f(a);
    const V fa = f(a);
    const V fb = f(b);
    const V fm = f(0.5 * (a + b));
    const V whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return detail::simpson_step<V>(f, a, b, fa, fm, fb, whole, tol, 48, 2);
}

/// Write-once memo keyed by (channel, q, t). Concurrent duplicate computation is
/// allowed; every writer stores the same value, so lookups are order-independent.
template <class V>
class MemoTable {
public:
    template <class F>
    V get_or_compute(int channel, const Vec& q, double t, const F& compute) {
        const Key key = make_key(channel, q, t);
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        V value = compute();
        std::unique_lock lock(mutex_);
        if (table_.size() >= kMaxEntries) table_.clear();
        table_.emplace(key, value);
        return value;
    }

    void clear() {
        std::unique_lock lock(mutex_);
        table_.clear();
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

private:
    struct Key {
        std::array<std::uint64_t, kMaxDim + 2> bits{};
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = 1469598103934665603ull;
            for (auto b : k.bits) h = (h ^ b) * 1099511628211ull;
            return static_cast<std::size_t>(h);
        }
    };
    static Key make_key(int channel, const Vec& q, double t) {
        Key k;
        k.bits[0] = static_cast<std::uint64_t>(channel) | (static_cast<std::uint64_t>(q.size()) << 32);
        std::memcpy(&k.bits[1], &t, sizeof t);
        for (int i = 0; i < q.size(); ++i) {
            const double v = q[i];
            std::memcpy(&k.bits[static_cast<std::size_t>(i) + 2], &v, sizeof v);
        }
        return k;
    }

    static constexpr std::size_t kMaxEntries = std::size_t{1} << 20;
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, V, KeyHash> table_;
};

using QuadratureCache = MemoTable<double>;

}  // namespace hjhopf
