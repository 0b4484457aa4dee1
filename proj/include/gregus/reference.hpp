#pragma once

#include "gregus/best_approx.hpp"
#include "gregus/coincidence.hpp"

namespace gregus::serial {

/// Plain single-threaded counterparts of the OpenMP kernels. They follow
/// the same candidate enumeration and tie-break rules, so the parallel
/// implementations must reproduce their results exactly; tests and the
/// benchmark hold them to that.

InequalityReport sweep_verify(const PiecewiseMap& A, const PiecewiseMap& B,
                              const PiecewiseMap& S, const PiecewiseMap& T, const DomainSet& E,
                              const Point& q, const GregusConstants& c, InequalityForm form,
                              const SweepOptions& opts = {});

StarshapeVerdict is_q_starshaped(const DomainSet& E, const Point& q,
                                 const SampleSpec& spec = {});

ConvexityVerdict is_convex(const DomainSet& E, const SampleSpec& spec = {});

BestApproximantSet best_approximants(const DomainSet& E, const Point& u,
                                     const SampleSpec& spec = {}, double tol = 1e-9);

InnerResult inner_solve(const PiecewiseMap& A, const PiecewiseMap& B, const PiecewiseMap& S,
                        const PiecewiseMap& T, const DomainSet& E, const Point& q, double k,
                        const SampleSpec& spec = {}, double tol = 1e-9);

}  // namespace gregus::serial
