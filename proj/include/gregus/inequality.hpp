#pragma once

#include <optional>
#include <vector>

#include "gregus/maps.hpp"

namespace gregus {

/// Constant triple of the contractive inequality. The non-strict regime
/// requires c1 + 2*c2 = 1 and c1 + c3 = 1 (to 1e-12); the strict regime
/// requires both sums < 1.
struct GregusConstants {
    double c1 = 1.0;
    double c2 = 0.0;
    double c3 = 0.0;
    bool strict = false;

    void validate() const;
};

enum class InequalityForm { quadratic_2_1_1, linear_2_2_1, restricted_3_2_1 };

struct SidePair {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the quadratic inequality at one pair:
///   lhs = ||Ax - By||^2
///   rhs = c1*max{d(Sx,[q,Ax])^2, d(Ty,[q,By])^2, ||Sx-Ty||^2}
///       + c2*max{d(Sx,[q,Ax])*d(Sx,[q,By]), d(Ty,[q,By])*d(Ty,[q,Ax])}
///       + c3*d(Sx,[q,By])*d(Ty,[q,Ax])
/// with d(.,.) the point-to-segment distance.
SidePair evaluate_sides(const Point& x, const Point& y, const PiecewiseMap& A,
                        const PiecewiseMap& B, const PiecewiseMap& S, const PiecewiseMap& T,
                        const Point& q, const GregusConstants& c);

/// Linear form of the corollary: lhs = ||Ax-By||, rhs = max of the three
/// unsquared quantities.
SidePair evaluate_sides_linear(const Point& x, const Point& y, const PiecewiseMap& A,
                               const PiecewiseMap& B, const PiecewiseMap& S,
                               const PiecewiseMap& T, const Point& q);

struct InequalityReport {
    long pairs_tested = 0;
    double worst_margin = 0.0;  // min over pairs of rhs - lhs
    Point worst_x, worst_y;
    bool holds = true;          // worst_margin >= -tol
};

struct SweepOptions {
    double pair_pitch1d = 1e-2;
    double pair_pitch2d = 2e-1;
    long random_pairs = 100000;
    uint64_t seed = kDefaultSeed;
    bool exclude_diagonal = false;
    double tol = 1e-9;

    double pair_pitch(int dim) const { return dim == 1 ? pair_pitch1d : pair_pitch2d; }
};

/// Extra inputs for the restricted form: the reference point u and the best
/// approximant set; the x=u / y=u branches compare squared map distances
/// directly.
struct RestrictedSpec {
    Point u;
    std::vector<Point> approximants;
};

/// Deterministic grid x grid pairs plus seeded random pairs; reports the
/// worst margin with a lexicographic tie-break on the witness coordinates,
/// so the reduction is independent of thread count.
InequalityReport sweep_verify(const PiecewiseMap& A, const PiecewiseMap& B,
                              const PiecewiseMap& S, const PiecewiseMap& T, const DomainSet& E,
                              const Point& q, const GregusConstants& c, InequalityForm form,
                              const SweepOptions& opts = {},
                              const std::optional<RestrictedSpec>& restricted = std::nullopt);

/// Evaluates a map at a point that may sit outside every guard by falling
/// back to the piece with the nearest guard. Used only where the theorem
/// references points outside E (flagged in reports as an extension).
Point eval_extended(const PiecewiseMap& m, const Point& x);

}  // namespace gregus
