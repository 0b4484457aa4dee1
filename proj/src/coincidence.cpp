#include "gregus/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gregus/parallel.hpp"

namespace gregus {

std::vector<Point> CoincidenceSet::sample_points(int per_interval) const {
    std::vector<Point> out = points;
    for (const auto& iv : intervals) {
        for (int j = 0; j <= per_interval; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(per_interval);
            out.push_back(Point(iv[0] + t * (iv[1] - iv[0])));
        }
    }
    return out;
}

namespace {

double residual_norm(const PiecewiseMap& A, const PiecewiseMap& T, const Point& q, double k,
                     const Point& x) {
    Point ax = A.eval(x);
    Point tx = T.eval(x);
    Point tk = tx;
    for (int i = 0; i < tk.dim; ++i) tk[i] = k * tx[i] + (1.0 - k) * q[i];
    return distance(ax, tk);
}

// Signed residual for the 1D bisection path.
double residual_1d(const PiecewiseMap& A, const PiecewiseMap& T, const Point& q, double k,
                   double x) {
    Point p(x);
    double ax = A.eval(p).x();
    double tk = k * T.eval(p).x() + (1.0 - k) * q.x();
    return ax - tk;
}

// All 1D scan nodes: domain grid, domain boundary, guard breakpoints of
// both maps. Sorted and deduplicated.
std::vector<double> scan_nodes_1d(const PiecewiseMap& A, const PiecewiseMap& T,
                                  const DomainSet& E, double pitch) {
    std::vector<double> xs;
    for (const auto& p : E.grid_points(pitch)) xs.push_back(p.x());
    for (const auto& p : E.boundary_points(pitch))
        if (E.contains(p)) xs.push_back(p.x());
    for (const auto* m : {&A, &T})
        for (const auto& p : m->guard_boundary_points(E, pitch)) xs.push_back(p.x());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

CoincidenceSet coincidence_set_1d(const PiecewiseMap& A, const PiecewiseMap& T,
                                  const DomainSet& E, const Point& q, double k,
                                  const SampleSpec& spec, double tol) {
    const double pitch = spec.pitch1d;
    std::vector<double> xs = scan_nodes_1d(A, T, E, pitch);
    const size_t n = xs.size();

    std::vector<double> g(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        g[static_cast<size_t>(i)] = residual_1d(A, T, q, k, xs[static_cast<size_t>(i)]);

    auto is_zero = [&](size_t i) { return std::abs(g[i]) <= tol; };

    CoincidenceSet set;
    std::vector<double> roots;

    // Maximal runs of zero nodes become intervals (runs of length >= 2
    // within grid adjacency); isolated zero nodes become points.
    size_t i = 0;
    while (i < n) {
        if (!is_zero(i)) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < n && is_zero(j + 1) && xs[j + 1] - xs[j] <= 2.0 * pitch) ++j;
        if (j > i) {
            // Refine the run edges by bisecting the |g| <= tol predicate
            // into the neighbouring nonzero gaps.
            double lo = xs[i];
            if (i > 0 && xs[i] - xs[i - 1] <= 2.0 * pitch) {
                double a = xs[i - 1], b = xs[i];
                for (int it = 0; it < 60; ++it) {
                    double m = 0.5 * (a + b);
                    (std::abs(residual_1d(A, T, q, k, m)) <= tol ? b : a) = m;
                }
                lo = b;
            }
            double hi = xs[j];
            if (j + 1 < n && xs[j + 1] - xs[j] <= 2.0 * pitch) {
                double a = xs[j], b = xs[j + 1];
                for (int it = 0; it < 60; ++it) {
                    double m = 0.5 * (a + b);
                    (std::abs(residual_1d(A, T, q, k, m)) <= tol ? a : b) = m;
                }
                hi = a;
            }
            set.intervals.push_back({lo, hi});
        } else {
            roots.push_back(xs[i]);
        }
        i = j + 1;
    }

    // Sign changes between consecutive nonzero nodes: bisection, accepted
    // only if the limit point really has a small residual (a jump
    // discontinuity also produces a sign change but no root).
    for (size_t m = 0; m + 1 < n; ++m) {
        if (is_zero(m) || is_zero(m + 1)) continue;
        if (g[m] * g[m + 1] >= 0.0) continue;
        double a = xs[m], b = xs[m + 1];
        double ga = g[m];
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (a + b);
            double gm = residual_1d(A, T, q, k, mid);
            if (gm == 0.0) {
                a = b = mid;
                break;
            }
            if ((ga < 0) == (gm < 0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        double root = 0.5 * (a + b);
        if (std::abs(residual_1d(A, T, q, k, root)) <= tol) roots.push_back(root);
    }

    // Drop roots swallowed by intervals, coalesce the rest at 2*pitch.
    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        bool inside = false;
        for (const auto& iv : set.intervals)
            if (r >= iv[0] - 2.0 * pitch && r <= iv[1] + 2.0 * pitch) inside = true;
        if (inside) continue;
        if (!set.points.empty() && r - set.points.back().x() <= 2.0 * pitch) continue;
        set.points.push_back(Point(r));
    }
    return set;
}

CoincidenceSet coincidence_set_2d(const PiecewiseMap& A, const PiecewiseMap& T,
                                  const DomainSet& E, const Point& q, double k,
                                  const SampleSpec& spec, double tol) {
    const double pitch = spec.pitch2d;
    std::vector<Point> nodes = E.grid_points(pitch);
    {
        auto bd = E.boundary_points(pitch);
        for (const auto& p : bd)
            if (E.contains(p)) nodes.push_back(p);
    }
    const size_t n = nodes.size();
    std::vector<double> r(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        r[static_cast<size_t>(i)] = residual_norm(A, T, q, k, nodes[static_cast<size_t>(i)]);

    // Candidates: nodes whose residual could plausibly reach tol nearby.
    // The residual is Lipschitz on each piece, so anything far above the
    // node spacing scale is hopeless.
    double cutoff = std::max(tol, pitch * 8.0);
    std::vector<Point> candidates;
    for (size_t i = 0; i < n; ++i)
        if (r[i] <= cutoff) candidates.push_back(nodes[i]);

    // Pattern-search refinement of every candidate.
    std::vector<Point> refined(candidates.size());
    std::vector<double> refined_r(candidates.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ci = 0; ci < static_cast<std::ptrdiff_t>(candidates.size()); ++ci) {
        Point x = candidates[static_cast<size_t>(ci)];
        double rx = residual_norm(A, T, q, k, x);
        double step = pitch;
        while (step > 1e-12) {
            bool moved = false;
            for (int axis = 0; axis < 2 && !moved; ++axis)
                for (double dir : {-1.0, 1.0}) {
                    Point c = x;
                    c[axis] += dir * step;
                    if (!E.contains(c)) continue;
                    double rc = residual_norm(A, T, q, k, c);
                    if (rc < rx) {
                        x = c;
                        rx = rc;
                        moved = true;
                        break;
                    }
                }
            if (!moved) step *= 0.5;
        }
        refined[static_cast<size_t>(ci)] = x;
        refined_r[static_cast<size_t>(ci)] = rx;
    }

    // Keep refined points below tolerance, deduplicated at 2*pitch via a
    // spatial hash (degenerate cases like k=1 with A=T flood the grid).
    std::vector<size_t> order;
    for (size_t ci = 0; ci < refined.size(); ++ci)
        if (refined_r[ci] <= tol) order.push_back(ci);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return lex_less(refined[a], refined[b]); });

    CoincidenceSet set;
    const double cell = 2.0 * pitch;
    std::map<std::pair<long, long>, std::vector<size_t>> buckets;
    for (size_t ci : order) {
        const Point& p = refined[ci];
        long bx = std::lround(std::floor(p.x() / cell));
        long by = std::lround(std::floor(p.y() / cell));
        bool dup = false;
        for (long dx = -1; dx <= 1 && !dup; ++dx)
            for (long dy = -1; dy <= 1 && !dup; ++dy) {
                auto it = buckets.find({bx + dx, by + dy});
                if (it == buckets.end()) continue;
                for (size_t idx : it->second)
                    if (distance(set.points[idx], p) <= cell) {
                        dup = true;
                        break;
                    }
            }
        if (dup) continue;
        buckets[{bx, by}].push_back(set.points.size());
        set.points.push_back(p);
    }
    return set;
}

}  // namespace

CoincidenceSet coincidence_set(const PiecewiseMap& A, const PiecewiseMap& T, const DomainSet& E,
                               const Point& q, double k, const SampleSpec& spec, double tol) {
    if (k < 0.0 || k > 1.0) throw std::invalid_argument("k outside [0,1]");
    return E.dim() == 1 ? coincidence_set_1d(A, T, E, q, k, spec, tol)
                        : coincidence_set_2d(A, T, E, q, k, spec, tol);
}

namespace {

CoincidenceSet merge_union(const std::vector<CoincidenceSet>& sets, double pitch) {
    CoincidenceSet u;
    std::vector<std::array<double, 2>> ivs;
    std::vector<Point> pts;
    for (const auto& s : sets) {
        ivs.insert(ivs.end(), s.intervals.begin(), s.intervals.end());
        pts.insert(pts.end(), s.points.begin(), s.points.end());
    }
    std::sort(ivs.begin(), ivs.end());
    for (const auto& iv : ivs) {
        if (!u.intervals.empty() && iv[0] <= u.intervals.back()[1] + 2.0 * pitch)
            u.intervals.back()[1] = std::max(u.intervals.back()[1], iv[1]);
        else
            u.intervals.push_back(iv);
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
    for (const auto& p : pts) {
        bool inside = false;
        for (const auto& iv : u.intervals)
            if (p.dim == 1 && p.x() >= iv[0] - 2.0 * pitch && p.x() <= iv[1] + 2.0 * pitch)
                inside = true;
        if (inside) continue;
        if (!u.points.empty() && distance(u.points.back(), p) <= 2.0 * pitch) continue;
        u.points.push_back(p);
    }
    return u;
}

}  // namespace

CoincidenceReport cq_set(const PiecewiseMap& A, const PiecewiseMap& T, const DomainSet& E,
                         const Point& q, const SampleSpec& spec, double tol,
                         const CqOptions& opts) {
    std::map<double, CoincidenceSet> by_k;

    auto solve_batch = [&](const std::vector<double>& ks) {
        std::vector<CoincidenceSet> out(ks.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ks.size()); ++i)
            out[static_cast<size_t>(i)] =
                coincidence_set(A, T, E, q, ks[static_cast<size_t>(i)], spec, tol);
        for (size_t i = 0; i < ks.size(); ++i) by_k[ks[i]] = std::move(out[i]);
    };

    std::vector<double> ks;
    const int n = std::max(2, opts.k_samples);
    for (int j = 0; j < n; ++j)
        ks.push_back(static_cast<double>(j) / static_cast<double>(n - 1));
    solve_batch(ks);

    // Adaptive refinement: bisect every k gap whose set signature changes,
    // so k-degenerate transitions are pinned down.
    for (int depth = 0; depth < opts.max_refine_depth; ++depth) {
        std::vector<double> fresh;
        auto it = by_k.begin();
        auto prev = it++;
        for (; it != by_k.end(); ++prev, ++it) {
            if (prev->second.signature() != it->second.signature()) {
                double mid = 0.5 * (prev->first + it->first);
                if (by_k.find(mid) == by_k.end()) fresh.push_back(mid);
            }
        }
        if (fresh.empty()) break;
        solve_batch(fresh);
    }

    CoincidenceReport rep;
    std::vector<CoincidenceSet> all;
    for (const auto& [k, set] : by_k) {
        rep.k_samples.push_back(k);
        rep.per_k.push_back(set);
        all.push_back(set);
    }
    rep.cq_union = merge_union(all, spec.pitch(E.dim()));
    return rep;
}

CommuteVerdict commute_probe(const PiecewiseMap& A, const PiecewiseMap& T, const DomainSet& E,
                             const Point& x, double tol) {
    CommuteVerdict v;
    v.witness = x;
    Point ax = A.eval(x);
    Point tx = T.eval(x);
    if (!E.contains(ax) || !E.contains(tx)) {
        v.holds = false;
        v.domain_escape = true;
        return v;
    }
    v.at_value = A.eval(tx);
    v.ta_value = T.eval(ax);
    v.error = distance(v.at_value, v.ta_value);
    v.holds = v.error <= tol;
    return v;
}

CommuteVerdict check_cq_commuting(const PiecewiseMap& A, const PiecewiseMap& T,
                                  const DomainSet& E, const CoincidenceReport& report,
                                  double tol) {
    CommuteVerdict worst;
    for (const auto& x : report.cq_union.sample_points()) {
        CommuteVerdict v = commute_probe(A, T, E, x, tol);
        if (!v.holds && (worst.holds || v.error > worst.error)) worst = v;
    }
    return worst;
}

CommuteVerdict check_weak_compatibility(const PiecewiseMap& A, const PiecewiseMap& T,
                                        const DomainSet& E, const SampleSpec& spec, double tol) {
    // C(A,T) is the k=1 coincidence set; q is irrelevant at k=1.
    Point q_dummy = E.dim() == 1 ? Point(E.bbox_lo().x()) : E.bbox_lo();
    CoincidenceSet c = coincidence_set(A, T, E, q_dummy, 1.0, spec, tol);
    CommuteVerdict worst;
    for (const auto& x : c.sample_points()) {
        CommuteVerdict v = commute_probe(A, T, E, x, tol);
        if (!v.holds && (worst.holds || v.error > worst.error)) worst = v;
    }
    return worst;
}

CommuteVerdict check_scaled_weak_compatibility(const PiecewiseMap& A, const PiecewiseMap& S,
                                               const DomainSet& E, const Point& q, double k,
                                               const SampleSpec& spec, double tol) {
    // C(A_k, S): roots of S(x) - (k*A(x) + (1-k)*q), i.e. the coincidence
    // of S with the k-scaled A.
    CoincidenceSet c = coincidence_set(S, A, E, q, k, spec, tol);
    auto scaled_a = [&](const Point& x) {
        Point v = A.eval(x);
        Point r = v;
        for (int i = 0; i < r.dim; ++i) r[i] = k * v[i] + (1.0 - k) * q[i];
        return r;
    };
    CommuteVerdict worst;
    for (const auto& x : c.sample_points()) {
        CommuteVerdict v;
        v.witness = x;
        Point sx = S.eval(x);
        Point akx = scaled_a(x);
        if (!E.contains(sx) || !E.contains(akx) || A.piece_index(sx) < 0 ||
            S.piece_index(akx) < 0) {
            v.holds = false;
            v.domain_escape = true;
        } else {
            v.at_value = scaled_a(sx);   // A_k(S x)
            v.ta_value = S.eval(akx);    // S(A_k x)
            v.error = distance(v.at_value, v.ta_value);
            v.holds = v.error <= tol;
        }
        if (!v.holds && (worst.holds || v.error > worst.error)) worst = v;
    }
    return worst;
}

namespace {

// Extrapolated limit of f along x(s) = t + s*dir for s -> 0, using two
// geometric scales (ratio 10): removes the linear term of a one-sided
// polynomial piece.
Point richardson(const Point& f_small, const Point& f_mid) {
    Point r = f_small;
    for (int i = 0; i < r.dim; ++i) r[i] = (10.0 * f_small[i] - f_mid[i]) / 9.0;
    return r;
}

}  // namespace

ReciprocalVerdict check_reciprocal_continuity(const PiecewiseMap& A, const PiecewiseMap& T,
                                              const DomainSet& E, const SampleSpec& spec,
                                              double tol) {
    const double diam = std::max(E.diameter(), 1e-6);
    const double pitch = spec.pitch(E.dim());

    // Candidate limit points: residual local minima, guard breakpoints,
    // domain boundary members.
    std::vector<Point> candidates;
    {
        std::vector<Point> nodes = E.grid_points(pitch * (E.dim() == 1 ? 1.0 : 1.0));
        std::vector<double> res(nodes.size());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nodes.size()); ++i)
            res[static_cast<size_t>(i)] =
                distance(A.eval(nodes[static_cast<size_t>(i)]), T.eval(nodes[static_cast<size_t>(i)]));
        double best = std::numeric_limits<double>::infinity();
        for (double rr : res) best = std::min(best, rr);
        for (size_t i = 0; i < nodes.size(); ++i)
            if (res[i] <= best + pitch) candidates.push_back(nodes[i]);
        // Thin out: keep at most 8 spread candidates from the minima set.
        if (candidates.size() > 8) {
            std::vector<Point> thin;
            size_t stride = candidates.size() / 8;
            for (size_t i = 0; i < candidates.size(); i += stride) thin.push_back(candidates[i]);
            candidates = thin;
        }
    }
    for (const auto* m : {&A, &T})
        for (const auto& p : m->guard_boundary_points(E, pitch)) candidates.push_back(p);
    for (const auto& p : E.boundary_points(pitch * 50.0))
        if (E.contains(p)) candidates.push_back(p);

    std::vector<Point> dirs;
    if (E.dim() == 1) {
        dirs = {Point(1.0), Point(-1.0)};
    } else {
        dirs = {Point(1.0, 0.0), Point(-1.0, 0.0), Point(0.0, 1.0), Point(0.0, -1.0)};
    }
    const std::array<double, 3> scales = {1e-3 * diam, 1e-4 * diam, 1e-5 * diam};

    ReciprocalVerdict verdict;
    for (const auto& t : candidates) {
        for (const auto& dir : dirs) {
            std::array<Point, 3> xs;
            bool ok = true;
            for (size_t si = 0; si < 3; ++si) {
                Point x = t;
                for (int c = 0; c < x.dim; ++c) x[c] += scales[si] * dir[c];
                if (!E.contains(x) || A.piece_index(x) < 0 || T.piece_index(x) < 0) ok = false;
                xs[si] = x;
            }
            if (!ok) continue;

            auto lim = [&](auto&& f) {
                Point f1 = f(xs[1]);  // mid scale
                Point f2 = f(xs[2]);  // small scale
                Point L = richardson(f2, f1);
                double unc = distance(L, f2);
                return std::pair<Point, double>(L, unc);
            };

            auto [a_lim, a_unc] = lim([&](const Point& x) { return A.eval(x); });
            auto [t_lim, t_unc] = lim([&](const Point& x) { return T.eval(x); });

            // Premise: the two limits must agree on a common value t'.
            double premise_tol = std::max({tol, 100.0 * (a_unc + t_unc)});
            if (distance(a_lim, t_lim) > premise_tol) continue;
            Point common = a_lim;
            for (int c = 0; c < common.dim; ++c) common[c] = 0.5 * (a_lim[c] + t_lim[c]);
            // Snap to the candidate point or an exact map value: the
            // estimate carries roundoff while breakpoints are exact.
            for (const Point& snap : {t, A.eval(t), T.eval(t)}) {
                if (distance(common, snap) <= std::max(1e-9 * diam, 10.0 * (a_unc + t_unc)))
                    common = snap;
            }
            if (!E.contains(common)) continue;

            auto [at_lim, at_unc] = lim([&](const Point& x) { return A.eval(T.eval(x)); });
            auto [ta_lim, ta_unc] = lim([&](const Point& x) { return T.eval(A.eval(x)); });

            Point a_at = A.eval(common);
            Point t_at = T.eval(common);
            double check_tol_at = std::max(tol, 100.0 * at_unc);
            double check_tol_ta = std::max(tol, 100.0 * ta_unc);

            if (distance(at_lim, a_at) > check_tol_at) {
                verdict.counterexample = true;
                verdict.t = common;
                verdict.direction = dir;
                verdict.identity = "lim A(T x_n) vs A(t)";
                verdict.limit_value = at_lim;
                verdict.map_value = a_at;
                verdict.error = distance(at_lim, a_at);
                return verdict;
            }
            if (distance(ta_lim, t_at) > check_tol_ta) {
                verdict.counterexample = true;
                verdict.t = common;
                verdict.direction = dir;
                verdict.identity = "lim T(A x_n) vs T(t)";
                verdict.limit_value = ta_lim;
                verdict.map_value = t_at;
                verdict.error = distance(ta_lim, t_at);
                return verdict;
            }
        }
    }
    return verdict;
}

}  // namespace gregus
