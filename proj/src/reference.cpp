#include "gregus/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gregus::serial {

InequalityReport sweep_verify(const PiecewiseMap& A, const PiecewiseMap& B,
                              const PiecewiseMap& S, const PiecewiseMap& T, const DomainSet& E,
                              const Point& q, const GregusConstants& c, InequalityForm form,
                              const SweepOptions& opts) {
    c.validate();
    std::vector<std::pair<Point, Point>> pairs;
    std::vector<Point> grid = E.grid_points(opts.pair_pitch(E.dim()));
    for (const auto& x : grid)
        for (const auto& y : grid) {
            if (opts.exclude_diagonal && x == y) continue;
            pairs.emplace_back(x, y);
        }
    Rng rng(opts.seed);
    auto draw = [&]() {
        for (;;) {
            Point p = E.dim() == 1 ? Point(rng.uniform(E.bbox_lo().x(), E.bbox_hi().x()))
                                   : Point(rng.uniform(E.bbox_lo().x(), E.bbox_hi().x()),
                                           rng.uniform(E.bbox_lo().y(), E.bbox_hi().y()));
            if (E.contains(p)) return p;
        }
    };
    for (long i = 0; i < opts.random_pairs; ++i) {
        Point x = draw();
        Point y = draw();
        if (opts.exclude_diagonal && x == y) continue;
        pairs.emplace_back(x, y);
    }

    InequalityReport rep;
    rep.pairs_tested = static_cast<long>(pairs.size());
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        SidePair s = form == InequalityForm::linear_2_2_1
                         ? evaluate_sides_linear(x, y, A, B, S, T, q)
                         : evaluate_sides(x, y, A, B, S, T, q, c);
        double margin = s.rhs - s.lhs;
        bool take = margin < rep.worst_margin;
        if (margin == rep.worst_margin) {
            if (!(rep.worst_x == x)) take = lex_less(x, rep.worst_x);
            else take = lex_less(y, rep.worst_y);
        }
        if (take) {
            rep.worst_margin = margin;
            rep.worst_x = x;
            rep.worst_y = y;
        }
    }
    rep.holds = rep.worst_margin >= -opts.tol;
    return rep;
}

namespace {

double escape_depth(const DomainSet& E, const Point& m) {
    return E.contains(m) ? -1.0 : boundary_distance(E, m);
}

// Identical polish loop to the parallel kernels'.
void polish_t(const DomainSet& E, const Point& a, const Point& b, double& t, double& d,
              int segment_samples) {
    double step = 1.0 / segment_samples;
    while (step > 1e-12) {
        bool moved = false;
        for (double cand : {t - step, t + step}) {
            if (cand < 0.0 || cand > 1.0) continue;
            double dc = escape_depth(E, lerp(a, b, cand));
            if (dc > d) {
                d = dc;
                t = cand;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
}

}  // namespace

StarshapeVerdict is_q_starshaped(const DomainSet& E, const Point& q, const SampleSpec& spec) {
    if (!E.contains(q)) throw std::invalid_argument("star-center q is not in E");
    std::vector<Point> samples = E.grid_points(spec.pitch(E.dim()));
    for (const auto& p : E.boundary_points(spec.pitch(E.dim())))
        if (E.contains(p)) samples.push_back(p);

    double best_depth = -1.0;
    Point best_p;
    double best_t = 0.0;
    for (const auto& p : samples) {
        for (int j = 0; j <= spec.segment_samples; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(spec.segment_samples);
            double d = escape_depth(E, lerp(q, p, t));
            bool take = d > best_depth ||
                        (d == best_depth && best_depth >= 0.0 &&
                         (lex_less(p, best_p) || (p == best_p && t < best_t)));
            if (take) {
                best_depth = d;
                best_p = p;
                best_t = t;
            }
        }
    }

    StarshapeVerdict v;
    if (best_depth <= 0.0) return v;
    polish_t(E, q, best_p, best_t, best_depth, spec.segment_samples);
    v.holds = false;
    v.witness_p = best_p;
    v.witness_t = best_t;
    v.depth = best_depth;
    return v;
}

ConvexityVerdict is_convex(const DomainSet& E, const SampleSpec& spec) {
    std::vector<Point> pts = E.boundary_points(spec.pitch(E.dim()));
    for (const auto& p : E.grid_points(spec.pitch(E.dim()) * 10.0)) pts.push_back(p);
    std::vector<Point> members;
    for (const auto& p : pts)
        if (E.contains(p)) members.push_back(p);

    double best_depth = -1.0;
    Point best_a, best_b;
    double best_t = 0.0;
    for (size_t i = 0; i < members.size(); ++i)
        for (size_t j = i + 1; j < members.size(); ++j) {
            for (int s = 0; s <= spec.segment_samples; ++s) {
                double t = static_cast<double>(s) / static_cast<double>(spec.segment_samples);
                double d = escape_depth(E, lerp(members[i], members[j], t));
                bool take = d > best_depth;
                if (d == best_depth && best_depth >= 0.0) {
                    if (!(members[i] == best_a)) take = lex_less(members[i], best_a);
                    else if (!(members[j] == best_b)) take = lex_less(members[j], best_b);
                    else take = t < best_t;
                }
                if (take) {
                    best_depth = d;
                    best_a = members[i];
                    best_b = members[j];
                    best_t = t;
                }
            }
        }

    ConvexityVerdict v;
    if (best_depth <= 0.0) return v;
    polish_t(E, best_a, best_b, best_t, best_depth, spec.segment_samples);
    v.holds = false;
    v.witness_a = best_a;
    v.witness_b = best_b;
    v.witness_t = best_t;
    v.depth = best_depth;
    return v;
}

BestApproximantSet best_approximants(const DomainSet& E, const Point& u, const SampleSpec& spec,
                                     double tol) {
    // Naive full path: direct projections onto every primitive; no
    // clustering or bucketing shortcuts.
    BestApproximantSet out;
    out.u = u;
    if (E.contains(u)) {
        out.dist = 0.0;
        out.points = {u};
        out.containment_margin = std::abs(boundary_distance(E, u));
        return out;
    }

    auto project = [&](const Primitive& pr) -> Point {
        switch (pr.kind) {
            case PrimitiveKind::interval:
                return Point(std::clamp(u.x(), pr.lo, pr.hi));
            case PrimitiveKind::disk: {
                Point d = u - pr.center;
                double n = d.norm();
                if (n <= pr.radius) return u;
                return pr.center + (pr.radius / n) * d;
            }
            case PrimitiveKind::polygon: {
                if (pr.contains(u, 0.0)) return u;
                Point bp = u;
                double best = std::numeric_limits<double>::infinity();
                for (size_t i = 0; i < pr.vertices.size(); ++i) {
                    Segment e(pr.vertices[i], pr.vertices[(i + 1) % pr.vertices.size()]);
                    Point d = e.b - e.a;
                    double len2 = d.dot(d);
                    double t = len2 == 0.0 ? 0.0 : std::clamp((u - e.a).dot(d) / len2, 0.0, 1.0);
                    Point proj = e.a + t * d;
                    if (distance(u, proj) < best) {
                        best = distance(u, proj);
                        bp = proj;
                    }
                }
                return bp;
            }
        }
        return u;
    };

    std::vector<Point> projections;
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& pr : E.primitives()) {
        Point p = project(pr);
        projections.push_back(p);
        dmin = std::min(dmin, distance(u, p));
    }
    out.dist = dmin;
    std::sort(projections.begin(), projections.end(),
              [](const Point& a, const Point& b) { return lex_less(a, b); });
    for (const auto& p : projections) {
        if (distance(u, p) > dmin + tol) continue;
        bool dup = false;
        for (const auto& kept : out.points)
            if (distance(kept, p) <= std::max(tol, 1e-12)) dup = true;
        if (!dup) out.points.push_back(p);
    }
    double margin = 0.0;
    for (const auto& p : out.points)
        margin = std::max(margin, std::abs(boundary_distance(E, p)));
    out.containment_margin = margin;
    (void)spec;
    return out;
}

InnerResult inner_solve(const PiecewiseMap& A, const PiecewiseMap& B, const PiecewiseMap& S,
                        const PiecewiseMap& T, const DomainSet& E, const Point& q, double k,
                        const SampleSpec& spec, double tol) {
    double pitch = spec.pitch(E.dim()) * (E.dim() == 1 ? 10.0 : 1.0);
    std::vector<Point> scan = E.grid_points(pitch);
    for (const auto& p : E.boundary_points(pitch))
        if (E.contains(p)) scan.push_back(p);
    for (const auto* m : {&A, &B, &S, &T})
        for (const auto& p : m->guard_boundary_points(E, pitch)) scan.push_back(p);
    if (E.contains(q)) scan.push_back(q);

    auto R = [&](const Point& x) {
        auto scaled = [&](const PiecewiseMap& m) {
            Point v = m.eval(x);
            Point r = v;
            for (int i = 0; i < r.dim; ++i) r[i] = k * v[i] + (1.0 - k) * q[i];
            return r;
        };
        double r = distance(scaled(A), x);
        r = std::max(r, distance(scaled(B), x));
        r = std::max(r, distance(S.eval(x), x));
        r = std::max(r, distance(T.eval(x), x));
        return r;
    };

    double best_r = std::numeric_limits<double>::infinity();
    double best_dq = std::numeric_limits<double>::infinity();
    Point best_x;
    for (const auto& x : scan) {
        double r = R(x), dq = distance(x, q);
        bool take = r < best_r || (r == best_r && dq < best_dq) ||
                    (r == best_r && dq == best_dq && lex_less(x, best_x));
        if (take) {
            best_r = r;
            best_dq = dq;
            best_x = x;
        }
    }

    Point x = best_x;
    double rx = best_r;
    double step = pitch;
    const double step_floor = 1e-13 * std::max(1.0, E.diameter());
    while (step > step_floor && rx > 0.0) {
        bool moved = false;
        for (int axis = 0; axis < E.dim() && !moved; ++axis)
            for (double dir : {-1.0, 1.0}) {
                Point c = x;
                c[axis] += dir * step;
                if (!E.contains(c) || A.piece_index(c) < 0 || B.piece_index(c) < 0 ||
                    S.piece_index(c) < 0 || T.piece_index(c) < 0)
                    continue;
                double rc = R(c);
                if (rc < rx) {
                    x = c;
                    rx = rc;
                    moved = true;
                    break;
                }
            }
        if (!moved) step *= 0.5;
    }

    InnerResult res;
    res.x = x;
    res.residual = rx;
    res.found = rx <= tol;
    return res;
}

}  // namespace gregus::serial
