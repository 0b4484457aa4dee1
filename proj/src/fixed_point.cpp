#include "gregus/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gregus/parallel.hpp"

namespace gregus {

Schedule Schedule::harmonic(int n) {
    Schedule s;
    for (int i = 0; i < n; ++i)
        s.k_values.push_back(static_cast<double>(i + 1) / static_cast<double>(i + 2));
    s.validate();
    return s;
}

Schedule Schedule::geometric(double ratio, int n) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("geometric schedule needs ratio in (0,1)");
    Schedule s;
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
        p *= ratio;
        s.k_values.push_back(1.0 - p);
    }
    s.validate();
    return s;
}

void Schedule::validate() const {
    if (k_values.size() < 3) throw std::invalid_argument("schedule needs at least 3 terms");
    for (size_t i = 0; i < k_values.size(); ++i) {
        if (!(k_values[i] > 0.0 && k_values[i] < 1.0))
            throw std::invalid_argument("schedule values must lie in (0,1)");
        if (i > 0 && !(k_values[i] > k_values[i - 1]))
            throw std::invalid_argument("schedule must be strictly increasing");
    }
}

namespace {

double four_map_residual(const PiecewiseMap& A, const PiecewiseMap& B, const PiecewiseMap& S,
                         const PiecewiseMap& T, const Point& q, double k, const Point& x) {
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
}

}  // namespace

InnerResult inner_solve(const PiecewiseMap& A, const PiecewiseMap& B, const PiecewiseMap& S,
                        const PiecewiseMap& T, const DomainSet& E, const Point& q, double k,
                        const SampleSpec& spec, double tol) {
    // Scan set: grid + boundary + guard breakpoints + the star-center.
    double pitch = spec.pitch(E.dim()) * (E.dim() == 1 ? 10.0 : 1.0);
    std::vector<Point> scan = E.grid_points(pitch);
    {
        auto bd = E.boundary_points(pitch);
        for (const auto& p : bd)
            if (E.contains(p)) scan.push_back(p);
        for (const auto* m : {&A, &B, &S, &T})
            for (const auto& p : m->guard_boundary_points(E, pitch)) scan.push_back(p);
        if (E.contains(q)) scan.push_back(q);
    }

    auto R = [&](const Point& x) { return four_map_residual(A, B, S, T, q, k, x); };

    struct Cand {
        double r = std::numeric_limits<double>::infinity();
        double dq = std::numeric_limits<double>::infinity();
        Point x;
    };
    Cand best = reduce_best(
        static_cast<std::ptrdiff_t>(scan.size()), Cand{},
        [&](std::ptrdiff_t i) {
            const Point& x = scan[static_cast<size_t>(i)];
            return Cand{R(x), distance(x, q), x};
        },
        [](const Cand& a, const Cand& b) {
            if (a.r != b.r) return a.r < b.r;
            if (a.dq != b.dq) return a.dq < b.dq;
            return lex_less(a.x, b.x);
        });

    // Deterministic pattern-search refinement (strict improvement only).
    Point x = best.x;
    double rx = best.r;
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

FixedPointTrace solve_schedule(const PiecewiseMap& A, const PiecewiseMap& B,
                               const PiecewiseMap& S, const PiecewiseMap& T, const DomainSet& E,
                               const Point& q, const Schedule& schedule, const SampleSpec& spec,
                               double tol) {
    schedule.validate();
    const size_t n = schedule.k_values.size();

    FixedPointTrace trace;
    trace.steps.resize(n);

    // Inner solves at distinct k are independent.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        double k = schedule.k_values[static_cast<size_t>(i)];
        InnerResult r = inner_solve(A, B, S, T, E, q, k, spec, tol);
        trace.steps[static_cast<size_t>(i)] = TraceStep{k, r.x, r.residual, r.found};
    }

    for (const auto& st : trace.steps) {
        if (!st.found) {
            trace.outcome = SolveOutcome::not_found;
            trace.z = st.x;
            return trace;
        }
    }

    // Converged when the last three solutions agree pairwise within tol.
    bool cauchy = true;
    for (size_t i = n - 3; i + 1 < n; ++i)
        if (distance(trace.steps[i].x, trace.steps[i + 1].x) >= tol) cauchy = false;
    if (distance(trace.steps[n - 3].x, trace.steps[n - 1].x) >= tol) cauchy = false;

    trace.z = trace.steps.back().x;
    ResidualVerdict v = validate_common_fixed_point(A, B, S, T, E, trace.z, 10.0 * tol);
    trace.limit_residuals = v.residuals;
    trace.residuals_ok = v.holds;
    trace.outcome = (cauchy && v.holds) ? SolveOutcome::converged : SolveOutcome::diverged;
    return trace;
}

ResidualVerdict validate_common_fixed_point(const PiecewiseMap& A, const PiecewiseMap& B,
                                            const PiecewiseMap& S, const PiecewiseMap& T,
                                            const DomainSet& E, const Point& z, double tol) {
    if (!E.contains(z)) throw std::invalid_argument("candidate fixed point lies outside E");
    ResidualVerdict v;
    const PiecewiseMap* maps[4] = {&A, &B, &S, &T};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        v.residuals[static_cast<size_t>(i)] = distance(maps[i]->eval(z), z);
        worst = std::max(worst, v.residuals[static_cast<size_t>(i)]);
    }
    v.holds = worst <= tol;
    return v;
}

}  // namespace gregus
