#pragma once

#include <string>
#include <vector>

#include "gregus/fixed_point.hpp"
#include "gregus/inequality.hpp"

namespace gregus {

struct BestApproximantSet {
    Point u;
    double dist = 0.0;               // delta(u, E)
    std::vector<Point> points;       // refined minimizers, lexicographic order
    double containment_margin = 0.0; // max |boundary_distance| over points
};

/// Grid scan of ||u - z|| over E, candidate clustering near the minimum,
/// and closed-form projection onto the active primitive per cluster.
BestApproximantSet best_approximants(const DomainSet& E, const Point& u,
                                     const SampleSpec& spec = {}, double tol = 1e-9);

struct LemmaVerdict {
    bool holds = true;
    double max_boundary_distance = 0.0;
    Point witness;
};

/// Every best approximant must lie on the topological boundary of E.
LemmaVerdict check_boundary_containment(const BestApproximantSet& set, const DomainSet& E,
                                        double tol = 1e-6);

struct HypothesisRecord {
    std::string name;
    bool holds = true;
    bool hard = true;     // failing aborts the pipeline unless forced
    bool warning = false; // vacuous / extension-evaluated checks
    std::string detail;
};

struct ApproxPipelineReport {
    BestApproximantSet approx;
    std::vector<HypothesisRecord> checks;
    bool aborted = false;
    std::string abort_reason;
    bool solved = false;
    FixedPointTrace trace;
};

/// The invariant-approximation pipeline: verifies the hypothesis battery
/// (fixed u, boundary invariance, starshaped approximant set, q fixed by S
/// and T, set invariance, restricted inequality, commuting on the set),
/// restricts the problem to P_E(u) and runs the schedule solver there.
/// Aborts on the first hard failure unless force is set.
ApproxPipelineReport invariant_approximation(const PiecewiseMap& A, const PiecewiseMap& B,
                                             const PiecewiseMap& S, const PiecewiseMap& T,
                                             const DomainSet& E, const Point& q, const Point& u,
                                             const GregusConstants& c, const Schedule& schedule,
                                             const SampleSpec& spec = {}, double tol = 1e-9,
                                             bool force = false);

}  // namespace gregus
