#include "gregus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gregus/parallel.hpp"

namespace gregus {

namespace {

// Signed distance helpers per primitive (negative inside).
double interval_sdist(const Primitive& pr, double x) {
    return std::max(pr.lo - x, x - pr.hi);
}

double disk_sdist(const Primitive& pr, const Point& p) {
    return distance(p, pr.center) - pr.radius;
}

// For a convex CCW polygon: max over edges of the signed distance to the
// supporting half-plane, corrected outside by the true distance to the hull.
double polygon_sdist(const Primitive& pr, const Point& p) {
    const auto& vs = pr.vertices;
    const size_t n = vs.size();
    double inside = -std::numeric_limits<double>::infinity();
    bool outside_any = false;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = vs[i];
        const Point& b = vs[(i + 1) % n];
        // outward normal of CCW edge (a->b) is (dy, -dx)
        double nx = b.y() - a.y();
        double ny = -(b.x() - a.x());
        double len = std::hypot(nx, ny);
        double d = ((p.x() - a.x()) * nx + (p.y() - a.y()) * ny) / len;
        inside = std::max(inside, d);
        if (d > 0) outside_any = true;
    }
    if (!outside_any) return inside;  // negative: depth into the polygon
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(p, Segment(vs[i], vs[(i + 1) % n])));
    return best;
}

double primitive_sdist(const Primitive& pr, const Point& p) {
    switch (pr.kind) {
        case PrimitiveKind::interval: return interval_sdist(pr, p.x());
        case PrimitiveKind::disk: return disk_sdist(pr, p);
        case PrimitiveKind::polygon: return polygon_sdist(pr, p);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Primitive Primitive::make_interval(double lo, double hi, bool lo_closed, bool hi_closed) {
    if (!(lo <= hi)) throw std::invalid_argument("interval with lo > hi");
    Primitive pr;
    pr.kind = PrimitiveKind::interval;
    pr.lo = lo;
    pr.hi = hi;
    pr.lo_closed = lo_closed;
    pr.hi_closed = hi_closed;
    return pr;
}

Primitive Primitive::make_disk(Point center, double radius) {
    if (center.dim != 2) throw std::invalid_argument("disk center must be 2D");
    if (!(radius >= 0)) throw std::invalid_argument("disk with negative radius");
    Primitive pr;
    pr.kind = PrimitiveKind::disk;
    pr.center = center;
    pr.radius = radius;
    return pr;
}

Primitive Primitive::make_polygon(std::vector<Point> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    // Enforce CCW orientation via the shoelace sign.
    double area2 = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % vertices.size()];
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    if (area2 < 0) std::reverse(vertices.begin(), vertices.end());
    Primitive pr;
    pr.kind = PrimitiveKind::polygon;
    pr.vertices = std::move(vertices);
    return pr;
}

bool Primitive::contains(const Point& p, double tol) const {
    if (kind == PrimitiveKind::interval) {
        double x = p.x();
        bool lo_ok = lo_closed ? x >= lo - tol : x > lo + tol;
        bool hi_ok = hi_closed ? x <= hi + tol : x < hi - tol;
        return lo_ok && hi_ok;
    }
    return primitive_sdist(*this, p) <= tol;
}

bool Primitive::strictly_inside(const Point& p, double tol) const {
    if (kind == PrimitiveKind::interval) return p.x() > lo + tol && p.x() < hi - tol;
    return primitive_sdist(*this, p) < -tol;
}

DomainSet::DomainSet(int dim, std::vector<Primitive> primitives)
    : dim_(dim), prims_(std::move(primitives)) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (prims_.empty()) throw std::invalid_argument("domain must have at least one primitive");
    for (const auto& pr : prims_)
        if (pr.dim() != dim_) throw std::invalid_argument("primitive dimension mismatch");

    bbox_lo_ = dim_ == 1 ? Point(0.0) : Point(0.0, 0.0);
    bbox_hi_ = bbox_lo_;
    bool first = true;
    for (const auto& pr : prims_) {
        Point lo = bbox_lo_, hi = bbox_hi_;
        switch (pr.kind) {
            case PrimitiveKind::interval:
                lo = Point(pr.lo);
                hi = Point(pr.hi);
                break;
            case PrimitiveKind::disk:
                lo = Point(pr.center.x() - pr.radius, pr.center.y() - pr.radius);
                hi = Point(pr.center.x() + pr.radius, pr.center.y() + pr.radius);
                break;
            case PrimitiveKind::polygon: {
                lo = hi = pr.vertices.front();
                for (const auto& v : pr.vertices)
                    for (int i = 0; i < 2; ++i) {
                        lo[i] = std::min(lo[i], v[i]);
                        hi[i] = std::max(hi[i], v[i]);
                    }
                break;
            }
        }
        if (first) {
            bbox_lo_ = lo;
            bbox_hi_ = hi;
            first = false;
        } else {
            for (int i = 0; i < dim_; ++i) {
                bbox_lo_[i] = std::min(bbox_lo_[i], lo[i]);
                bbox_hi_[i] = std::max(bbox_hi_[i], hi[i]);
            }
        }
    }
}

bool DomainSet::contains(const Point& p, double tol) const {
    if (p.dim != dim_) throw std::invalid_argument("point dimension mismatch");
    for (const auto& pr : prims_)
        if (pr.contains(p, tol)) return true;
    return false;
}

double DomainSet::diameter() const {
    return (bbox_hi_ - bbox_lo_).norm();
}

std::vector<Point> DomainSet::grid_points(double pitch) const {
    std::vector<Point> out;
    if (dim_ == 1) {
        long n = std::lround(std::floor((bbox_hi_.x() - bbox_lo_.x()) / pitch)) + 1;
        for (long i = 0; i <= n; ++i) {
            double x = std::min(bbox_lo_.x() + static_cast<double>(i) * pitch, bbox_hi_.x());
            Point p(x);
            if (contains(p) && (out.empty() || out.back().x() != x)) out.push_back(p);
            if (x >= bbox_hi_.x()) break;
        }
    } else {
        long nx = std::lround(std::floor((bbox_hi_.x() - bbox_lo_.x()) / pitch)) + 1;
        long ny = std::lround(std::floor((bbox_hi_.y() - bbox_lo_.y()) / pitch)) + 1;
        for (long i = 0; i <= nx; ++i) {
            double x = std::min(bbox_lo_.x() + static_cast<double>(i) * pitch, bbox_hi_.x());
            for (long j = 0; j <= ny; ++j) {
                double y = std::min(bbox_lo_.y() + static_cast<double>(j) * pitch, bbox_hi_.y());
                Point p(x, y);
                if (contains(p)) out.push_back(p);
                if (y >= bbox_hi_.y()) break;
            }
            if (x >= bbox_hi_.x()) break;
        }
    }
    return out;
}

std::vector<Point> DomainSet::cell_centered_points(double pitch) const {
    std::vector<Point> out;
    if (dim_ == 1) {
        long n = std::max<long>(1, std::lround(std::ceil((bbox_hi_.x() - bbox_lo_.x()) / pitch)));
        for (long i = 0; i < n; ++i) {
            Point p(bbox_lo_.x() + (static_cast<double>(i) + 0.5) * (bbox_hi_.x() - bbox_lo_.x()) /
                                       static_cast<double>(n));
            if (contains(p)) out.push_back(p);
        }
    } else {
        long nx = std::max<long>(1, std::lround(std::ceil((bbox_hi_.x() - bbox_lo_.x()) / pitch)));
        long ny = std::max<long>(1, std::lround(std::ceil((bbox_hi_.y() - bbox_lo_.y()) / pitch)));
        for (long i = 0; i < nx; ++i)
            for (long j = 0; j < ny; ++j) {
                Point p(bbox_lo_.x() + (static_cast<double>(i) + 0.5) *
                                           (bbox_hi_.x() - bbox_lo_.x()) / static_cast<double>(nx),
                        bbox_lo_.y() + (static_cast<double>(j) + 0.5) *
                                           (bbox_hi_.y() - bbox_lo_.y()) / static_cast<double>(ny));
                if (contains(p)) out.push_back(p);
            }
    }
    return out;
}

std::vector<Point> DomainSet::boundary_points(double pitch) const {
    std::vector<Point> out;
    auto covered = [&](const Point& p, size_t self) {
        for (size_t j = 0; j < prims_.size(); ++j)
            if (j != self && prims_[j].strictly_inside(p, kMembershipTol)) return true;
        return false;
    };
    for (size_t i = 0; i < prims_.size(); ++i) {
        const Primitive& pr = prims_[i];
        switch (pr.kind) {
            case PrimitiveKind::interval: {
                for (double e : {pr.lo, pr.hi}) {
                    Point p(e);
                    if (!covered(p, i)) out.push_back(p);
                }
                break;
            }
            case PrimitiveKind::disk: {
                long n = std::max<long>(8, std::lround(2.0 * M_PI * pr.radius / pitch));
                for (long k = 0; k < n; ++k) {
                    double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
                    Point p(pr.center.x() + pr.radius * std::cos(a),
                            pr.center.y() + pr.radius * std::sin(a));
                    if (!covered(p, i)) out.push_back(p);
                }
                break;
            }
            case PrimitiveKind::polygon: {
                const auto& vs = pr.vertices;
                for (size_t k = 0; k < vs.size(); ++k) {
                    const Point& a = vs[k];
                    const Point& b = vs[(k + 1) % vs.size()];
                    double len = distance(a, b);
                    long n = std::max<long>(1, std::lround(len / pitch));
                    for (long t = 0; t < n; ++t) {
                        Point p = lerp(a, b, static_cast<double>(t) / static_cast<double>(n));
                        // lerp(q=a, p=b, t) interpolates a -> b
                        if (!covered(p, i)) out.push_back(p);
                    }
                }
                break;
            }
        }
    }
    return out;
}

std::vector<Point> DomainSet::random_points(int count, uint64_t seed) const {
    std::vector<Point> out;
    out.reserve(static_cast<size_t>(count));
    Rng rng(seed);
    long guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 1000L * count + 1000) {
        ++guard;
        Point p = dim_ == 1 ? Point(rng.uniform(bbox_lo_.x(), bbox_hi_.x()))
                            : Point(rng.uniform(bbox_lo_.x(), bbox_hi_.x()),
                                    rng.uniform(bbox_lo_.y(), bbox_hi_.y()));
        if (contains(p)) out.push_back(p);
    }
    return out;
}

double point_segment_distance(const Point& p, const Segment& s) {
    if (p.dim != s.a.dim) throw std::invalid_argument("point/segment dimension mismatch");
    Point d = s.b - s.a;
    double len2 = d.dot(d);
    if (len2 == 0.0) return distance(p, s.a);
    double t = (p - s.a).dot(d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    Point proj = s.a + t * d;
    return distance(p, proj);
}

namespace {

// Nearest point on the boundary circle/edge of primitive `i` that is not
// strictly inside any other primitive. Exact when the plain projection is
// uncovered; otherwise a dense scan with golden-section polish.
double uncovered_boundary_distance(const DomainSet& E, size_t i, const Point& p) {
    const auto& prims = E.primitives();
    const Primitive& pr = prims[i];
    auto covered = [&](const Point& b) {
        for (size_t j = 0; j < prims.size(); ++j)
            if (j != i && prims[j].strictly_inside(b, kMembershipTol)) return true;
        return false;
    };

    if (pr.kind == PrimitiveKind::interval) {
        double best = std::numeric_limits<double>::infinity();
        for (double e : {pr.lo, pr.hi})
            if (!covered(Point(e))) best = std::min(best, std::abs(p.x() - e));
        return best;
    }

    // Parametric boundary: circle angle or edge-chain parameter.
    auto boundary_at = [&](double t) -> Point {
        if (pr.kind == PrimitiveKind::disk) {
            double a = 2.0 * M_PI * t;
            return Point(pr.center.x() + pr.radius * std::cos(a),
                         pr.center.y() + pr.radius * std::sin(a));
        }
        const auto& vs = pr.vertices;
        double scaled = t * static_cast<double>(vs.size());
        size_t k = std::min(vs.size() - 1, static_cast<size_t>(scaled));
        return lerp(vs[k], vs[(k + 1) % vs.size()], scaled - static_cast<double>(k));
    };

    // Fast path: the unconstrained projection.
    if (pr.kind == PrimitiveKind::disk && pr.radius > 0) {
        Point dir = p - pr.center;
        double n = dir.norm();
        Point proj = n == 0.0 ? Point(pr.center.x() + pr.radius, pr.center.y())
                              : pr.center + (pr.radius / n) * dir;
        if (!covered(proj)) return distance(p, proj);
    }
    if (pr.kind == PrimitiveKind::polygon) {
        double best = std::numeric_limits<double>::infinity();
        bool all_uncovered = true;
        for (size_t k = 0; k < pr.vertices.size(); ++k) {
            Segment e(pr.vertices[k], pr.vertices[(k + 1) % pr.vertices.size()]);
            Point d = e.b - e.a;
            double t = d.dot(d) == 0 ? 0.0 : std::clamp((p - e.a).dot(d) / d.dot(d), 0.0, 1.0);
            Point proj = e.a + t * d;
            if (covered(proj)) {
                all_uncovered = false;
                continue;
            }
            best = std::min(best, distance(p, proj));
        }
        if (all_uncovered || std::isfinite(best)) {
            if (std::isfinite(best) && all_uncovered) return best;
        }
    }

    // General path: scan the parametric boundary, keep uncovered samples,
    // polish the best one locally.
    const int n = 4096;
    double best_t = -1, best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double t = (static_cast<double>(k) + 0.5) / n;
        Point b = boundary_at(t);
        if (covered(b)) continue;
        double d = distance(p, b);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    if (best_t < 0) return std::numeric_limits<double>::infinity();
    double lo = best_t - 1.0 / n, hi = best_t + 1.0 / n;
    for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        Point b1 = boundary_at(m1), b2 = boundary_at(m2);
        double d1 = covered(b1) ? std::numeric_limits<double>::infinity() : distance(p, b1);
        double d2 = covered(b2) ? std::numeric_limits<double>::infinity() : distance(p, b2);
        if (d1 < d2)
            hi = m2;
        else
            lo = m1;
    }
    Point b = boundary_at(0.5 * (lo + hi));
    return covered(b) ? best_d : std::min(best_d, distance(p, b));
}

}  // namespace

double boundary_distance(const DomainSet& E, const Point& p) {
    if (p.dim != E.dim()) throw std::invalid_argument("point dimension mismatch");
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < E.primitives().size(); ++i)
        d = std::min(d, uncovered_boundary_distance(E, i, p));
    return E.contains(p) ? -d : d;
}

StarshapeVerdict is_q_starshaped(const DomainSet& E, const Point& q, const SampleSpec& spec) {
    if (!E.contains(q)) throw std::invalid_argument("star-center q is not in E");

    std::vector<Point> samples = E.grid_points(spec.pitch(E.dim()));
    {
        auto bd = E.boundary_points(spec.pitch(E.dim()));
        for (const auto& p : bd)
            if (E.contains(p)) samples.push_back(p);
    }

    struct Cand {
        double depth = -1.0;  // escape distance; <= 0 means no violation
        Point p;
        double t = 0.0;
    };
    auto escape = [&](const Point& m) {
        return E.contains(m) ? -1.0 : boundary_distance(E, m);
    };
    auto eval = [&](std::ptrdiff_t i) {
        const Point& p = samples[static_cast<size_t>(i)];
        Cand c;
        c.p = p;
        for (int j = 0; j <= spec.segment_samples; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(spec.segment_samples);
            double d = escape(lerp(q, p, t));
            if (d > c.depth) {
                c.depth = d;
                c.t = t;
            }
        }
        return c;
    };
    auto better = [](const Cand& a, const Cand& b) {
        if (a.depth != b.depth) return a.depth > b.depth;
        if (!(a.p == b.p)) return lex_less(a.p, b.p);
        return a.t < b.t;
    };

    Cand best = reduce_best(static_cast<std::ptrdiff_t>(samples.size()), Cand{}, eval, better);

    StarshapeVerdict v;
    if (best.depth <= 0.0) return v;

    // Polish t around the worst sample for a sharper witness.
    double step = 1.0 / spec.segment_samples;
    double t = best.t;
    double d = best.depth;
    while (step > 1e-12) {
        bool moved = false;
        for (double cand : {t - step, t + step}) {
            if (cand < 0.0 || cand > 1.0) continue;
            double dc = escape(lerp(q, best.p, cand));
            if (dc > d) {
                d = dc;
                t = cand;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    v.holds = false;
    v.witness_p = best.p;
    v.witness_t = t;
    v.depth = d;
    return v;
}

ConvexityVerdict is_convex(const DomainSet& E, const SampleSpec& spec) {
    // Violating pairs always include boundary pairs once the chord is
    // extended, so pair the boundary samples plus a coarse interior set.
    std::vector<Point> pts = E.boundary_points(spec.pitch(E.dim()));
    {
        auto interior = E.grid_points(spec.pitch(E.dim()) * 10.0);
        pts.insert(pts.end(), interior.begin(), interior.end());
    }
    std::vector<Point> members;
    for (const auto& p : pts)
        if (E.contains(p)) members.push_back(p);

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(members.size());
    struct Cand {
        double depth = -1.0;
        Point a, b;
        double t = 0.0;
    };
    auto escape = [&](const Point& m) {
        return E.contains(m) ? -1.0 : boundary_distance(E, m);
    };
    auto eval = [&](std::ptrdiff_t flat) {
        std::ptrdiff_t i = flat / n, j = flat % n;
        Cand c;
        if (j <= i) return c;  // unordered pairs once
        c.a = members[static_cast<size_t>(i)];
        c.b = members[static_cast<size_t>(j)];
        for (int s = 0; s <= spec.segment_samples; ++s) {
            double t = static_cast<double>(s) / static_cast<double>(spec.segment_samples);
            double d = escape(lerp(c.a, c.b, t));
            if (d > c.depth) {
                c.depth = d;
                c.t = t;
            }
        }
        return c;
    };
    auto better = [](const Cand& a, const Cand& b) {
        if (a.depth != b.depth) return a.depth > b.depth;
        if (!(a.a == b.a)) return lex_less(a.a, b.a);
        if (!(a.b == b.b)) return lex_less(a.b, b.b);
        return a.t < b.t;
    };

    Cand best = reduce_best(n * n, Cand{}, eval, better);

    ConvexityVerdict v;
    if (best.depth <= 0.0) return v;

    double step = 1.0 / spec.segment_samples;
    double t = best.t, d = best.depth;
    while (step > 1e-12) {
        bool moved = false;
        for (double cand : {t - step, t + step}) {
            if (cand < 0.0 || cand > 1.0) continue;
            double dc = escape(lerp(best.a, best.b, cand));
            if (dc > d) {
                d = dc;
                t = cand;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    v.holds = false;
    v.witness_a = best.a;
    v.witness_b = best.b;
    v.witness_t = t;
    v.depth = d;
    return v;
}

}  // namespace gregus
