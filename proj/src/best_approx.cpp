#include "gregus/best_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gregus/coincidence.hpp"
#include "gregus/parallel.hpp"

namespace gregus {

namespace {

// Closed-form projection of u onto one primitive (its closure).
Point project_onto(const Primitive& pr, const Point& u) {
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
            double best = std::numeric_limits<double>::infinity();
            Point bp = u;
            const auto& vs = pr.vertices;
            for (size_t i = 0; i < vs.size(); ++i) {
                Segment e(vs[i], vs[(i + 1) % vs.size()]);
                Point d = e.b - e.a;
                double len2 = d.dot(d);
                double t = len2 == 0.0 ? 0.0 : std::clamp((u - e.a).dot(d) / len2, 0.0, 1.0);
                Point p = e.a + t * d;
                double dd = distance(u, p);
                if (dd < best) {
                    best = dd;
                    bp = p;
                }
            }
            return bp;
        }
    }
    return u;
}

}  // namespace

BestApproximantSet best_approximants(const DomainSet& E, const Point& u, const SampleSpec& spec,
                                     double tol) {
    if (!u.finite()) throw std::invalid_argument("u must be finite");
    BestApproximantSet out;
    out.u = u;

    if (E.contains(u)) {
        out.dist = 0.0;
        out.points = {u};
        out.containment_margin = std::abs(boundary_distance(E, u));
        return out;
    }

    const double pitch = spec.pitch(E.dim());
    std::vector<Point> samples = E.grid_points(pitch);
    {
        auto bd = E.boundary_points(pitch);
        for (const auto& p : bd)
            if (E.contains(p)) samples.push_back(p);
    }

    struct Cand {
        double d = std::numeric_limits<double>::infinity();
        Point p;
    };
    Cand best = reduce_best(
        static_cast<std::ptrdiff_t>(samples.size()), Cand{},
        [&](std::ptrdiff_t i) {
            const Point& p = samples[static_cast<size_t>(i)];
            return Cand{distance(u, p), p};
        },
        [](const Cand& a, const Cand& b) {
            if (a.d != b.d) return a.d < b.d;
            return lex_less(a.p, b.p);
        });

    // Candidates within one pitch of the sampled minimum (the distance
    // field is 1-Lipschitz, so every true minimizer has a sample in here).
    std::vector<Point> cands;
    for (const auto& p : samples)
        if (distance(u, p) <= best.d + pitch) cands.push_back(p);
    std::sort(cands.begin(), cands.end(),
              [](const Point& a, const Point& b) { return lex_less(a, b); });

    // Greedy clustering by proximity, then closed-form projection onto the
    // cluster's active primitive.
    std::vector<Point> reps;
    for (const auto& p : cands) {
        bool merged = false;
        for (auto& r : reps)
            if (distance(r, p) <= 3.0 * pitch) merged = true;
        if (!merged) reps.push_back(p);
    }

    std::vector<Point> refined;
    for (const auto& rep : reps) {
        // Active primitive: the one the representative is nearest to.
        size_t active = 0;
        double best_pd = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < E.primitives().size(); ++i) {
            Point proj = project_onto(E.primitives()[i], rep);
            double d = distance(rep, proj);
            if (d < best_pd) {
                best_pd = d;
                active = i;
            }
        }
        refined.push_back(project_onto(E.primitives()[active], u));
    }

    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& p : refined) dmin = std::min(dmin, distance(u, p));
    out.dist = dmin;

    std::sort(refined.begin(), refined.end(),
              [](const Point& a, const Point& b) { return lex_less(a, b); });
    for (const auto& p : refined) {
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
    return out;
}

LemmaVerdict check_boundary_containment(const BestApproximantSet& set, const DomainSet& E,
                                        double tol) {
    LemmaVerdict v;
    for (const auto& p : set.points) {
        double bd = std::abs(boundary_distance(E, p));
        if (bd > v.max_boundary_distance) {
            v.max_boundary_distance = bd;
            v.witness = p;
        }
    }
    v.holds = v.max_boundary_distance <= tol;
    return v;
}

namespace {

std::string point_str(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    if (p.dim == 1)
        os << p.x();
    else
        os << "(" << p.x() << ", " << p.y() << ")";
    return os.str();
}

DomainSet point_set_domain(const std::vector<Point>& pts, int dim) {
    std::vector<Primitive> prims;
    for (const auto& p : pts) {
        if (dim == 1)
            prims.push_back(Primitive::make_interval(p.x(), p.x()));
        else
            prims.push_back(Primitive::make_disk(p, 0.0));
    }
    return DomainSet(dim, prims);
}

}  // namespace

ApproxPipelineReport invariant_approximation(const PiecewiseMap& A, const PiecewiseMap& B,
                                             const PiecewiseMap& S, const PiecewiseMap& T,
                                             const DomainSet& E, const Point& q, const Point& u,
                                             const GregusConstants& c, const Schedule& schedule,
                                             const SampleSpec& spec, double tol, bool force) {
    ApproxPipelineReport rep;
    auto fail = [&](HypothesisRecord rec) {
        rep.checks.push_back(rec);
        if (rec.hard && !rec.holds && !force && !rep.aborted) {
            rep.aborted = true;
            rep.abort_reason = rec.name;
        }
        return rep.aborted;
    };

    // (1) u is a common fixed point of all four maps. Outside E the maps
    // are undefined, so the check runs on the guard extension and is
    // reported as a warning rather than a native evaluation.
    {
        bool in_E = E.contains(u);
        HypothesisRecord rec;
        rec.name = "u_common_fixed_point";
        rec.warning = !in_E;
        double worst = 0.0;
        std::string worst_map;
        const char* names = "ABST";
        const PiecewiseMap* maps[4] = {&A, &B, &S, &T};
        for (int i = 0; i < 4; ++i) {
            Point v = in_E ? maps[i]->eval(u) : eval_extended(*maps[i], u);
            double r = distance(v, u);
            if (r > worst) {
                worst = r;
                worst_map = std::string(1, names[i]);
            }
        }
        rec.holds = worst <= tol;
        std::ostringstream os;
        os << (in_E ? "evaluated at u in E" : "u outside E: guard-extension evaluation")
           << ", worst residual " << worst;
        if (!rec.holds) os << " at map " << worst_map;
        rec.detail = os.str();
        if (fail(rec)) return rep;
    }

    // (2) Boundary invariance, each of the four maps reported separately
    // (the theorem hypothesises S and T; its proof uses A and B).
    {
        auto bd = E.boundary_points(spec.pitch(E.dim()));
        const char* names[4] = {"A", "B", "S", "T"};
        const PiecewiseMap* maps[4] = {&A, &B, &S, &T};
        for (int i = 0; i < 4; ++i) {
            HypothesisRecord rec;
            rec.name = std::string("boundary_invariance_") + names[i];
            rec.hard = i >= 2;  // S and T are the stated hypotheses
            int violations = 0;
            Point witness;
            for (const auto& p : bd) {
                if (!E.contains(p)) continue;
                if (!E.contains(maps[i]->eval(p))) {
                    if (violations == 0) witness = p;
                    ++violations;
                }
            }
            rec.holds = violations == 0;
            if (!rec.holds)
                rec.detail = "image leaves E at " + point_str(witness) + " (" +
                             std::to_string(violations) + " boundary samples)";
            if (fail(rec)) return rep;
        }
    }

    // (3) The best approximant set.
    rep.approx = best_approximants(E, u, spec, tol);
    const auto& P = rep.approx.points;
    {
        HypothesisRecord rec;
        rec.name = "approximants_on_boundary";
        LemmaVerdict lv = check_boundary_containment(rep.approx, E, 1e-6);
        rec.holds = lv.holds;
        rec.detail = "dist = " + std::to_string(rep.approx.dist) + ", " +
                     std::to_string(P.size()) + " point(s), max |boundary_distance| = " +
                     std::to_string(lv.max_boundary_distance);
        if (fail(rec)) return rep;
    }

    // (4) P_E(u) q-starshaped with the problem's star-center. With our
    // primitives P is a finite point set: a single point must equal q;
    // several distinct points can never be starshaped.
    {
        HypothesisRecord rec;
        rec.name = "approximant_set_q_starshaped";
        if (P.size() == 1) {
            rec.holds = distance(P[0], q) <= std::max(tol, 1e-9);
            if (!rec.holds)
                rec.detail = "P_E(u) = {" + point_str(P[0]) + "} but q = " + point_str(q);
        } else {
            rec.holds = false;
            rec.detail = std::to_string(P.size()) +
                         " isolated approximants cannot form a q-starshaped set";
        }
        if (fail(rec)) return rep;
    }

    // (5) q fixed by S and T.
    {
        HypothesisRecord rec;
        rec.name = "q_fixed_by_S_and_T";
        double r = std::max(distance(S.eval(q), q), distance(T.eval(q), q));
        rec.holds = r <= tol;
        rec.detail = "max residual " + std::to_string(r);
        if (fail(rec)) return rep;
    }

    // (6) S(P) = P = T(P) as finite sets (both inclusions, within tol).
    {
        for (const auto* m : {&S, &T}) {
            HypothesisRecord rec;
            rec.name = std::string("approximant_set_invariant_under_") +
                       (m == &S ? "S" : "T");
            std::vector<Point> image;
            for (const auto& p : P) image.push_back(m->eval(p));
            auto near_some = [&](const Point& x, const std::vector<Point>& set) {
                for (const auto& s : set)
                    if (distance(x, s) <= std::max(tol, 1e-9)) return true;
                return false;
            };
            bool fwd = true, bwd = true;
            for (const auto& ip : image)
                if (!near_some(ip, P)) fwd = false;
            for (const auto& p : P)
                if (!near_some(p, image)) bwd = false;
            rec.holds = fwd && bwd;
            if (!rec.holds)
                rec.detail = fwd ? "image misses some approximant" : "image leaves P_E(u)";
            if (fail(rec)) return rep;
        }
    }

    // (7) Restricted inequality over P_E(u) and u.
    {
        HypothesisRecord rec;
        rec.name = "restricted_inequality";
        rec.warning = !E.contains(u);  // u-branches use the guard extension
        SweepOptions opts;
        opts.tol = 1e-9;
        RestrictedSpec rs{u, P};
        InequalityReport ir = sweep_verify(A, B, S, T, E, q, c,
                                           InequalityForm::restricted_3_2_1, opts, rs);
        rec.holds = ir.holds;
        rec.detail = "worst margin " + std::to_string(ir.worst_margin) + " over " +
                     std::to_string(ir.pairs_tested) + " pairs";
        if (fail(rec)) return rep;
    }

    // (8) C_q-commutation of (A,S) and (B,T) on the restricted domain.
    DomainSet restricted = point_set_domain(P, E.dim());
    {
        SampleSpec rspec = spec;
        const PiecewiseMap* firsts[2] = {&A, &B};
        const PiecewiseMap* seconds[2] = {&S, &T};
        const char* names[2] = {"A_S", "B_T"};
        for (int i = 0; i < 2; ++i) {
            HypothesisRecord rec;
            rec.name = std::string("cq_commuting_on_approximants_") + names[i];
            CoincidenceReport cr = cq_set(*firsts[i], *seconds[i], restricted, q, rspec, tol);
            CommuteVerdict cv;
            // Compositions may leave the finite restricted set while staying
            // in E; commutation itself is what matters here.
            for (const auto& x : cr.cq_union.sample_points()) {
                CommuteVerdict v = commute_probe(*firsts[i], *seconds[i], E, x, tol);
                if (!v.holds && (cv.holds || v.error > cv.error)) cv = v;
            }
            rec.holds = cv.holds;
            if (!rec.holds)
                rec.detail = "A(T(x)) != T(A(x)) at x = " + point_str(cv.witness);
            if (fail(rec)) return rep;
        }
    }

    // (9) Restricted schedule solve; z must be an approximant and a common
    // fixed point.
    {
        FixedPointTrace tr = solve_schedule(A, B, S, T, restricted, q, schedule, spec, tol);
        rep.trace = tr;
        rep.solved = tr.outcome == SolveOutcome::converged;
        HypothesisRecord rec;
        rec.name = "restricted_solve";
        rec.holds = rep.solved;
        if (rep.solved) {
            double dP = std::numeric_limits<double>::infinity();
            for (const auto& p : P) dP = std::min(dP, distance(p, tr.z));
            rec.holds = dP <= std::max(tol, 1e-9);
            rec.detail = "z = " + point_str(tr.z) + ", distance to P_E(u) " + std::to_string(dP);
        } else {
            rec.detail = "schedule solve did not converge";
        }
        fail(rec);
    }
    return rep;
}

}  // namespace gregus
