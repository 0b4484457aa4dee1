#pragma once

// Independent brute-force oracles used to freeze expected values. These
// deliberately avoid the library's fast paths: plain dense enumeration
// only, so they stay valid as the implementation evolves.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gregus/coincidence.hpp"

namespace oracle {

using gregus::DomainSet;
using gregus::Point;
using gregus::Segment;

// Dense minimum of ||p - y|| over segment samples.
inline double segment_distance(const Point& p, const Segment& s, int samples = 10000) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        double t = static_cast<double>(i) / samples;
        Point y = s.a;
        for (int c = 0; c < y.dim; ++c) y[c] = s.a[c] + t * (s.b[c] - s.a[c]);
        best = std::min(best, gregus::distance(p, y));
    }
    return best;
}

// Does the segment [a, b] stay inside E at a dense sampling?
inline bool segment_inside(const DomainSet& E, const Point& a, const Point& b,
                           int samples = 2000) {
    for (int i = 0; i <= samples; ++i) {
        double t = static_cast<double>(i) / samples;
        if (!E.contains(gregus::lerp(a, b, t))) return false;
    }
    return true;
}

// Dense samples of a 1D point/interval set.
inline std::vector<double> dense_1d(const gregus::CoincidenceSet& set, double pitch = 1e-4) {
    std::vector<double> xs;
    for (const auto& p : set.points) xs.push_back(p.x());
    for (const auto& iv : set.intervals) {
        long n = std::max<long>(1, std::lround((iv[1] - iv[0]) / pitch));
        for (long i = 0; i <= n; ++i)
            xs.push_back(iv[0] + (iv[1] - iv[0]) * static_cast<double>(i) / static_cast<double>(n));
    }
    return xs;
}

inline double hausdorff_1d(const std::vector<double>& a, const std::vector<double>& b) {
    auto one_sided = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (double x : from) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : to) best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

// Brute-force minimum distance from u to E over a dense grid.
inline double min_distance_to_set(const DomainSet& E, const Point& u, double pitch = 1e-3) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : E.grid_points(pitch)) best = std::min(best, gregus::distance(u, p));
    return best;
}

}  // namespace oracle
