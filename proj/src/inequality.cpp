#include "gregus/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gregus/parallel.hpp"

namespace gregus {

void GregusConstants::validate() const {
    if (c1 < 0.0 || c2 < 0.0 || c3 < 0.0)
        throw std::invalid_argument("inequality constants must be nonnegative");
    double s12 = c1 + 2.0 * c2;
    double s13 = c1 + c3;
    if (s12 > 1.0 + 1e-12 || s13 > 1.0 + 1e-12)
        throw std::invalid_argument("constants exceed the admissible region");
    if (strict) {
        if (!(s12 < 1.0 && s13 < 1.0))
            throw std::invalid_argument("strict regime requires c1+2c2 < 1 and c1+c3 < 1");
    } else {
        if (std::abs(s12 - 1.0) > 1e-12 || std::abs(s13 - 1.0) > 1e-12)
            throw std::invalid_argument("equality regime requires c1+2c2 = 1 and c1+c3 = 1");
    }
}

SidePair evaluate_sides(const Point& x, const Point& y, const PiecewiseMap& A,
                        const PiecewiseMap& B, const PiecewiseMap& S, const PiecewiseMap& T,
                        const Point& q, const GregusConstants& c) {
    Point ax = A.eval(x), by = B.eval(y), sx = S.eval(x), ty = T.eval(y);
    double d_sa = point_segment_distance(sx, Segment(q, ax));
    double d_tb = point_segment_distance(ty, Segment(q, by));
    double d_sb = point_segment_distance(sx, Segment(q, by));
    double d_ta = point_segment_distance(ty, Segment(q, ax));
    double st = distance(sx, ty);

    SidePair s;
    double diff = distance(ax, by);
    s.lhs = diff * diff;
    s.rhs = c.c1 * std::max({d_sa * d_sa, d_tb * d_tb, st * st}) +
            c.c2 * std::max(d_sa * d_sb, d_tb * d_ta) + c.c3 * d_sb * d_ta;
    return s;
}

SidePair evaluate_sides_linear(const Point& x, const Point& y, const PiecewiseMap& A,
                               const PiecewiseMap& B, const PiecewiseMap& S,
                               const PiecewiseMap& T, const Point& q) {
    Point ax = A.eval(x), by = B.eval(y), sx = S.eval(x), ty = T.eval(y);
    SidePair s;
    s.lhs = distance(ax, by);
    s.rhs = std::max({point_segment_distance(sx, Segment(q, ax)),
                      point_segment_distance(ty, Segment(q, by)), distance(sx, ty)});
    return s;
}

Point eval_extended(const PiecewiseMap& m, const Point& x) {
    if (m.piece_index(x) >= 0) return m.eval(x);
    // Fall back to the piece whose guard is nearest; ties go to the first
    // piece in declaration order.
    double best = std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    for (size_t i = 0; i < m.pieces().size(); ++i) {
        const Piece& pc = m.pieces()[i];
        double d;
        if (pc.guard_all) {
            d = 0.0;
        } else if (pc.guard.kind == PrimitiveKind::interval) {
            d = std::max({pc.guard.lo - x.x(), x.x() - pc.guard.hi, 0.0});
        } else if (pc.guard.kind == PrimitiveKind::disk) {
            d = std::max(0.0, distance(x, pc.guard.center) - pc.guard.radius);
        } else {
            d = 0.0;
            if (!pc.guard.contains(x, 0.0)) {
                d = std::numeric_limits<double>::infinity();
                for (size_t v = 0; v < pc.guard.vertices.size(); ++v)
                    d = std::min(d, point_segment_distance(
                                        x, Segment(pc.guard.vertices[v],
                                                   pc.guard.vertices[(v + 1) %
                                                                     pc.guard.vertices.size()])));
            }
        }
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    const Piece& pc = m.pieces()[best_i];
    Point out = x.dim == 1 ? Point(0.0) : Point(0.0, 0.0);
    for (int c = 0; c < x.dim; ++c) {
        double s = 0.0;
        for (const auto& t : pc.expr[static_cast<size_t>(c)]) {
            double mono = t.coeff;
            for (int i = 0; i < t.px; ++i) mono *= x.x();
            for (int i = 0; i < t.py; ++i) mono *= x.y();
            s += mono;
        }
        out[c] = s;
    }
    return out;
}

InequalityReport sweep_verify(const PiecewiseMap& A, const PiecewiseMap& B,
                              const PiecewiseMap& S, const PiecewiseMap& T, const DomainSet& E,
                              const Point& q, const GregusConstants& c, InequalityForm form,
                              const SweepOptions& opts,
                              const std::optional<RestrictedSpec>& restricted) {
    c.validate();

    // Build the deterministic pair list up front; evaluation is then a
    // pure parallel pass with an order-independent reduction.
    std::vector<std::pair<Point, Point>> pairs;

    if (form == InequalityForm::restricted_3_2_1) {
        if (!restricted) throw std::invalid_argument("restricted form needs u and P_E(u)");
        const auto& P = restricted->approximants;
        for (const auto& x : P)
            for (const auto& y : P) pairs.emplace_back(x, y);
        for (const auto& x : P) pairs.emplace_back(x, restricted->u);
        for (const auto& y : P) pairs.emplace_back(restricted->u, y);
    } else {
        std::vector<Point> grid = E.grid_points(opts.pair_pitch(E.dim()));
        for (const auto& x : grid)
            for (const auto& y : grid) {
                if (opts.exclude_diagonal && x == y) continue;
                pairs.emplace_back(x, y);
            }
        Rng rng(opts.seed);
        auto draw = [&]() {
            for (;;) {
                Point p = E.dim() == 1
                              ? Point(rng.uniform(E.bbox_lo().x(), E.bbox_hi().x()))
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
    }

    const bool is_restricted = form == InequalityForm::restricted_3_2_1;
    const Point u = is_restricted ? restricted->u : Point();

    auto margin_at = [&](const Point& x, const Point& y) {
        if (is_restricted) {
            bool xu = x == u, yu = y == u;
            if (xu || yu) {
                // ||Ax-Bu||^2 <= ||Sx-Tu||^2 (and symmetric). Values at u
                // use the guard-extension fallback when u sits outside E.
                Point ax = xu ? eval_extended(A, x) : A.eval(x);
                Point by = yu ? eval_extended(B, y) : B.eval(y);
                Point sx = xu ? eval_extended(S, x) : S.eval(x);
                Point ty = yu ? eval_extended(T, y) : T.eval(y);
                double lhs = distance(ax, by);
                double rhs = distance(sx, ty);
                return rhs * rhs - lhs * lhs;
            }
            SidePair s = evaluate_sides(x, y, A, B, S, T, q, c);
            return s.rhs - s.lhs;
        }
        if (form == InequalityForm::linear_2_2_1) {
            SidePair s = evaluate_sides_linear(x, y, A, B, S, T, q);
            return s.rhs - s.lhs;
        }
        SidePair s = evaluate_sides(x, y, A, B, S, T, q, c);
        return s.rhs - s.lhs;
    };

    struct Cand {
        double margin = std::numeric_limits<double>::infinity();
        Point x, y;
    };
    Cand worst = reduce_best(
        static_cast<std::ptrdiff_t>(pairs.size()), Cand{},
        [&](std::ptrdiff_t i) {
            const auto& [x, y] = pairs[static_cast<size_t>(i)];
            return Cand{margin_at(x, y), x, y};
        },
        [](const Cand& a, const Cand& b) {
            if (a.margin != b.margin) return a.margin < b.margin;
            if (!(a.x == b.x)) return lex_less(a.x, b.x);
            return lex_less(a.y, b.y);
        });

    InequalityReport rep;
    rep.pairs_tested = static_cast<long>(pairs.size());
    rep.worst_margin = worst.margin;
    rep.worst_x = worst.x;
    rep.worst_y = worst.y;
    rep.holds = worst.margin >= -opts.tol;
    return rep;
}

}  // namespace gregus
