#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gregus/best_approx.hpp"
#include "gregus/coincidence.hpp"

namespace gregus {

struct Tolerances {
    double membership = 1e-9;
    double coincidence = 1e-7;
    double inequality = 1e-9;
    double inner1d = 1e-9;
    double inner2d = 1e-6;
    double fixed_point = 1e-9;
    double affinity = 1e-9;

    double inner(int dim) const { return dim == 1 ? inner1d : inner2d; }
};

struct SamplingConfig {
    SampleSpec geometry;   // predicates, coincidence scans, approximants
    SweepOptions sweep;    // inequality pair sweeps
    int k_samples = 101;
};

struct ScheduleConfig {
    std::string rule = "harmonic";  // "harmonic" or "geometric"
    double ratio = 0.5;             // geometric only
    int length = 12;

    Schedule make() const;
};

/// A fully validated problem instance: domain, star-center, the four maps,
/// constants, sampling resolutions and tolerances.
struct Problem {
    std::string name;
    DomainSet domain;
    Point q;
    PiecewiseMap A, B, S, T;
    GregusConstants constants;
    SamplingConfig sampling;
    ScheduleConfig schedule;
    Tolerances tol;
    std::optional<Point> u;  // reference point for invariant approximation

    /// Stable digest of the canonical JSON serialization.
    std::string digest() const;
    nlohmann::ordered_json to_json() const;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses and validates a problem JSON document. Numbers may be JSON
/// numbers or strings holding decimal or "p/q" fraction literals. Throws
/// ParseError with a field path on any defect (syntax, unresolved alias,
/// q outside E, guards that fail to cover or overlap, non-self-map).
Problem parse_problem_json(const nlohmann::json& doc, const std::string& name = {});
Problem parse_problem(const std::string& path);
Problem parse_problem_text(const std::string& text, const std::string& name = {});

}  // namespace gregus
