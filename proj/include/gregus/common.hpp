#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gregus {

/// A point of R^1 or R^2. The dimension is carried explicitly; unused
/// coordinates stay at zero so lexicographic comparison is total.
struct Point {
    int dim = 1;
    std::array<double, 2> v{0.0, 0.0};

    Point() = default;
    explicit Point(double x) : dim(1), v{x, 0.0} {}
    Point(double x, double y) : dim(2), v{x, y} {}

    double x() const { return v[0]; }
    double y() const { return v[1]; }
    double operator[](int i) const { return v[static_cast<size_t>(i)]; }
    double& operator[](int i) { return v[static_cast<size_t>(i)]; }

    friend Point operator+(Point a, const Point& b) {
        for (int i = 0; i < a.dim; ++i) a.v[static_cast<size_t>(i)] += b.v[static_cast<size_t>(i)];
        return a;
    }
    friend Point operator-(Point a, const Point& b) {
        for (int i = 0; i < a.dim; ++i) a.v[static_cast<size_t>(i)] -= b.v[static_cast<size_t>(i)];
        return a;
    }
    friend Point operator*(double s, Point a) {
        for (int i = 0; i < a.dim; ++i) a.v[static_cast<size_t>(i)] *= s;
        return a;
    }

    double dot(const Point& b) const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += v[static_cast<size_t>(i)] * b.v[static_cast<size_t>(i)];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }

    bool finite() const {
        for (int i = 0; i < dim; ++i)
            if (!std::isfinite(v[static_cast<size_t>(i)])) return false;
        return true;
    }

    friend bool operator==(const Point& a, const Point& b) {
        return a.dim == b.dim && a.v == b.v;
    }
    /// Lexicographic order on coordinates; used for deterministic tie-breaks.
    friend bool lex_less(const Point& a, const Point& b) {
        for (int i = 0; i < a.dim; ++i) {
            if (a.v[static_cast<size_t>(i)] < b.v[static_cast<size_t>(i)]) return true;
            if (a.v[static_cast<size_t>(i)] > b.v[static_cast<size_t>(i)]) return false;
        }
        return false;
    }
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

/// Convex combination t*p + (1-t)*q.
inline Point lerp(const Point& q, const Point& p, double t) {
    Point r = q;
    for (int i = 0; i < r.dim; ++i)
        r[i] = t * p[i] + (1.0 - t) * q[i];
    return r;
}

struct Segment {
    Point a;
    Point b;
    Segment() = default;
    Segment(Point a_, Point b_) : a(a_), b(b_) {
        if (a.dim != b.dim) throw std::invalid_argument("segment endpoints differ in dimension");
    }
};

/// |a-b| <= tol, absolute.
inline bool within_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// |a-b| <= tol * max(1, |a|, |b|): relative comparison with a unit floor,
/// so values near zero are compared absolutely.
inline bool within_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Deterministic splitmix64-seeded xoshiro256** stream. Hand-rolled so the
/// stream is identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t s = seed;
        for (auto& w : state_) {
            s += 0x9E3779B97F4A7C15ull;
            uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
    }

    uint64_t next() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        uint64_t result = rotl(state_[1] * 5, 7) * 9;
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

private:
    std::array<uint64_t, 4> state_{};
};

inline constexpr uint64_t kDefaultSeed = 0x9E3779B9ull;

/// Parses a real number written either as a decimal literal or as an exact
/// fraction "p/q" (rounded once to nearest binary64).
double parse_real(const std::string& text);

/// FNV-1a 64-bit over a byte string; stable across platforms.
uint64_t fnv1a(const std::string& bytes);

}  // namespace gregus
