#pragma once

#include <vector>

#include "gregus/maps.hpp"

namespace gregus {

/// Default residual tolerance for accepting a coincidence point.
inline constexpr double kCoincidenceTol = 1e-7;

/// A refined coincidence set: isolated points plus (in 1D) maximal
/// intervals where the residual stays below tolerance.
struct CoincidenceSet {
    std::vector<std::array<double, 2>> intervals;  // 1D only, [lo, hi]
    std::vector<Point> points;

    bool empty() const { return intervals.empty() && points.empty(); }
    /// Representative sample of the set: every point plus interval
    /// endpoints and interior samples.
    std::vector<Point> sample_points(int per_interval = 33) const;
    /// Signature used by the adaptive k-refinement.
    std::pair<size_t, size_t> signature() const { return {intervals.size(), points.size()}; }
};

/// Roots of A(x) - T_k(x) over E, located by sign-change bisection per
/// piece in 1D (grid + residual minimization in 2D) and refined to
/// |residual| <= tol. Contiguous root runs become intervals.
CoincidenceSet coincidence_set(const PiecewiseMap& A, const PiecewiseMap& T, const DomainSet& E,
                               const Point& q, double k, const SampleSpec& spec = {},
                               double tol = kCoincidenceTol);

struct CoincidenceReport {
    std::vector<double> k_samples;
    std::vector<CoincidenceSet> per_k;
    CoincidenceSet cq_union;
};

struct CqOptions {
    int k_samples = 101;     // uniform grid including both endpoints
    int max_refine_depth = 4;
};

/// C_q(A,T): union of C(A,T_k) over a k-grid including {0,1}, with
/// adaptive k-refinement wherever the set signature changes between
/// neighbouring k values.
CoincidenceReport cq_set(const PiecewiseMap& A, const PiecewiseMap& T, const DomainSet& E,
                         const Point& q, const SampleSpec& spec = {},
                         double tol = kCoincidenceTol, const CqOptions& opts = {});

struct CommuteVerdict {
    bool holds = true;
    bool domain_escape = false;  // A or T left the domain before composing
    Point witness;
    Point at_value;  // A(T(witness))
    Point ta_value;  // T(A(witness))
    double error = 0.0;
};

/// Checks A(T(x)) == T(A(x)) on every refined coincidence point of the
/// report (interval members sampled).
CommuteVerdict check_cq_commuting(const PiecewiseMap& A, const PiecewiseMap& T,
                                  const DomainSet& E, const CoincidenceReport& report,
                                  double tol = kCoincidenceTol);

/// Commutation probe at an arbitrary point (diagnostic mode; the point need
/// not be a coincidence point).
CommuteVerdict commute_probe(const PiecewiseMap& A, const PiecewiseMap& T, const DomainSet& E,
                             const Point& x, double tol = kCoincidenceTol);

/// Weak compatibility: commuting on C(A,T) itself (the k = 1 set, no
/// scaling involved).
CommuteVerdict check_weak_compatibility(const PiecewiseMap& A, const PiecewiseMap& T,
                                        const DomainSet& E, const SampleSpec& spec = {},
                                        double tol = kCoincidenceTol);

/// Weak compatibility of the scaled pair (A_k, S): locates
/// C(A_k, S) = {x : Sx = k*Ax + (1-k)q} and checks A_k(Sx) == S(A_k x)
/// there. This is the per-instance form the schedule solver gates on.
CommuteVerdict check_scaled_weak_compatibility(const PiecewiseMap& A, const PiecewiseMap& S,
                                               const DomainSet& E, const Point& q, double k,
                                               const SampleSpec& spec = {},
                                               double tol = kCoincidenceTol);

struct ReciprocalVerdict {
    bool counterexample = false;
    Point t;            // limit point of the constructed sequence
    Point direction;
    // Which identity broke and the values on both sides.
    std::string identity;  // "lim A(T x_n) vs A(t)" or "lim T(A x_n) vs T(t)"
    Point limit_value;
    Point map_value;
    double error = 0.0;
};

/// Heuristic refutation of reciprocal continuity: builds geometric-ramp
/// sequences toward residual minima and guard breakpoints at three
/// decreasing scales and compares extrapolated limits against the map
/// values at the limit point. Can only refute, never certify.
ReciprocalVerdict check_reciprocal_continuity(const PiecewiseMap& A, const PiecewiseMap& T,
                                              const DomainSet& E, const SampleSpec& spec = {},
                                              double tol = 1e-6);

}  // namespace gregus
