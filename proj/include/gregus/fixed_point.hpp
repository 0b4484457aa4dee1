#pragma once

#include <vector>

#include "gregus/maps.hpp"

namespace gregus {

/// The outer scale schedule k_n -> 1.
struct Schedule {
    std::vector<double> k_values;

    static Schedule harmonic(int n);               // k_i = (i+1)/(i+2)
    static Schedule geometric(double ratio, int n); // k_i = 1 - ratio^(i+1)

    void validate() const;
};

struct InnerResult {
    bool found = false;
    Point x;
    double residual = 0.0;  // best max-residual reached
};

/// Seeks x with max{||A_k x - x||, ||B_k x - x||, ||Sx - x||, ||Tx - x||}
/// <= tol at a fixed scale k: coarse grid scan (grid, boundary, guard
/// breakpoints, q) then deterministic pattern-search refinement. Ties on
/// the grid go to the point nearest q, then lexicographically smallest.
InnerResult inner_solve(const PiecewiseMap& A, const PiecewiseMap& B, const PiecewiseMap& S,
                        const PiecewiseMap& T, const DomainSet& E, const Point& q, double k,
                        const SampleSpec& spec = {}, double tol = 1e-9);

struct TraceStep {
    double k = 0.0;
    Point x;
    double residual = 0.0;
    bool found = false;
};

enum class SolveOutcome { converged, diverged, not_found };

struct FixedPointTrace {
    std::vector<TraceStep> steps;
    SolveOutcome outcome = SolveOutcome::diverged;
    Point z;
    std::array<double, 4> limit_residuals{};  // A, B, S, T at z
    bool residuals_ok = false;
};

/// Runs inner solves across the schedule (concurrently; the convergence
/// decision consumes them in order), declares convergence when the last
/// three solutions agree pairwise within tol, and validates the limit
/// residuals at 10*tol.
FixedPointTrace solve_schedule(const PiecewiseMap& A, const PiecewiseMap& B,
                               const PiecewiseMap& S, const PiecewiseMap& T, const DomainSet& E,
                               const Point& q, const Schedule& schedule,
                               const SampleSpec& spec = {}, double tol = 1e-9);

struct ResidualVerdict {
    bool holds = false;
    std::array<double, 4> residuals{};  // ||Az-z||, ||Bz-z||, ||Sz-z||, ||Tz-z||
};

ResidualVerdict validate_common_fixed_point(const PiecewiseMap& A, const PiecewiseMap& B,
                                            const PiecewiseMap& S, const PiecewiseMap& T,
                                            const DomainSet& E, const Point& z,
                                            double tol = 1e-9);

}  // namespace gregus
