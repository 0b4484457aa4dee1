#include "gregus/run.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "gregus/registry.hpp"

namespace gregus {

using nlohmann::ordered_json;

namespace {

ordered_json point_json(const Point& p) {
    if (p.dim == 1) return ordered_json(p.x());
    return ordered_json::array({p.x(), p.y()});
}

ordered_json set_json(const CoincidenceSet& set) {
    ordered_json j;
    ordered_json ivs = ordered_json::array();
    for (const auto& iv : set.intervals) ivs.push_back({iv[0], iv[1]});
    j["intervals"] = ivs;
    // Degenerate unions (identity pairs at k = 1) can flood the report, so
    // the cloud is capped; the count always reflects the full set.
    const size_t cap = 64;
    ordered_json pts = ordered_json::array();
    for (size_t i = 0; i < set.points.size() && i < cap; ++i)
        pts.push_back(point_json(set.points[i]));
    j["points"] = pts;
    j["point_count"] = set.points.size();
    return j;
}

std::string verdict_name(bool holds) { return holds ? "holds" : "violated"; }

Problem apply_options(Problem p, const RunOptions& opts) {
    if (opts.grid) {
        if (p.domain.dim() == 1)
            p.sampling.geometry.pitch1d = *opts.grid;
        else
            p.sampling.geometry.pitch2d = *opts.grid;
    }
    if (opts.pairs) p.sampling.sweep.random_pairs = *opts.pairs;
    if (opts.seed) {
        p.sampling.sweep.seed = *opts.seed;
        p.sampling.geometry.seed = *opts.seed;
    }
    if (opts.tol) {
        p.tol.coincidence = *opts.tol;
        p.tol.inequality = *opts.tol;
        p.tol.inner1d = *opts.tol;
        p.tol.inner2d = *opts.tol;
        p.tol.fixed_point = *opts.tol;
        p.tol.affinity = *opts.tol;
    }
    if (opts.schedule) {
        const std::string& s = *opts.schedule;
        if (s == "harmonic") {
            p.schedule.rule = "harmonic";
        } else if (s.rfind("geometric:", 0) == 0) {
            p.schedule.rule = "geometric";
            p.schedule.ratio = parse_real(s.substr(10));
        } else {
            throw ParseError("--schedule expects harmonic or geometric:<r>");
        }
        p.schedule.make();  // validate now
    }
    if (opts.u_override) p.u = *opts.u_override;
    return p;
}

void check_geometry(const Problem& p, std::vector<CheckRecord>& out) {
    {
        CheckRecord rec;
        rec.name = "geometry.q_starshaped";
        StarshapeVerdict v = is_q_starshaped(p.domain, p.q, p.sampling.geometry);
        rec.verdict = verdict_name(v.holds);
        rec.code = v.holds ? 0 : 1;
        rec.data["q"] = point_json(p.q);
        if (!v.holds) {
            rec.data["witness_p"] = point_json(v.witness_p);
            rec.data["witness_t"] = v.witness_t;
            rec.data["escape_depth"] = v.depth;
        }
        out.push_back(std::move(rec));
    }
    {
        CheckRecord rec;
        rec.name = "geometry.convex";
        ConvexityVerdict v = is_convex(p.domain, p.sampling.geometry);
        rec.verdict = verdict_name(v.holds);
        rec.code = v.holds ? 0 : 1;
        if (!v.holds) {
            rec.data["witness_a"] = point_json(v.witness_a);
            rec.data["witness_b"] = point_json(v.witness_b);
            rec.data["witness_t"] = v.witness_t;
            rec.data["escape_depth"] = v.depth;
        }
        out.push_back(std::move(rec));
    }
}

AffinityKind kind_from(const std::string& s) {
    if (s == "affine") return AffinityKind::affine;
    if (s == "affine_wrt_point") return AffinityKind::affine_wrt_point;
    if (s == "q_affine") return AffinityKind::q_affine;
    throw ParseError("--kind expects affine | affine_wrt_point | q_affine");
}

void check_affinity_cmd(const Problem& p, const RunOptions& opts, std::vector<CheckRecord>& out) {
    AffinityKind kind = kind_from(opts.kind);
    std::vector<std::string> targets =
        opts.map_names.empty() ? std::vector<std::string>{"S", "T"} : opts.map_names;
    for (const auto& mn : targets) {
        const PiecewiseMap* m = mn == "A"   ? &p.A
                                : mn == "B" ? &p.B
                                : mn == "S" ? &p.S
                                : mn == "T" ? &p.T
                                            : nullptr;
        if (!m) throw ParseError("--map expects A | B | S | T");
        CheckRecord rec;
        rec.name = "affinity." + mn + "." + opts.kind;
        AffinityVerdict v = check_affinity(*m, p.domain, p.q, kind, p.sampling.geometry,
                                           p.tol.affinity);
        rec.verdict = verdict_name(v.holds);
        rec.code = v.holds ? 0 : 1;
        if (kind == AffinityKind::q_affine) rec.data["qfix_error"] = v.qfix_error;
        if (!v.holds) {
            rec.data["witness_x"] = point_json(v.witness_x);
            rec.data["witness_lambda"] = v.witness_lambda;
            rec.data["error"] = v.error;
        }
        out.push_back(std::move(rec));
    }
}

void check_commute_cmd(const Problem& p, const RunOptions& opts, std::vector<CheckRecord>& out) {
    struct PairSpec {
        const char* label;
        const PiecewiseMap* first;
        const PiecewiseMap* second;
    };
    const PairSpec pairs[2] = {{"A_S", &p.A, &p.S}, {"B_T", &p.B, &p.T}};

    CqOptions cq_opts;
    cq_opts.k_samples = p.sampling.k_samples;

    for (const auto& pr : pairs) {
        CoincidenceReport report = cq_set(*pr.first, *pr.second, p.domain, p.q,
                                          p.sampling.geometry, p.tol.coincidence, cq_opts);
        {
            CheckRecord rec;
            rec.name = std::string("commute.cq_set.") + pr.label;
            rec.verdict = "computed";
            rec.code = 0;
            rec.data["k_samples"] = report.k_samples.size();
            rec.data["union"] = set_json(report.cq_union);
            out.push_back(std::move(rec));
        }
        {
            CheckRecord rec;
            rec.name = std::string("commute.cq_commuting.") + pr.label;
            CommuteVerdict v = check_cq_commuting(*pr.first, *pr.second, p.domain, report,
                                                  p.tol.coincidence);
            rec.verdict = v.holds ? "holds" : (v.domain_escape ? "domain_escape" : "violated");
            rec.code = v.holds ? 0 : 1;
            if (!v.holds) {
                rec.data["witness"] = point_json(v.witness);
                if (!v.domain_escape) {
                    rec.data["composed_first_second"] = point_json(v.at_value);
                    rec.data["composed_second_first"] = point_json(v.ta_value);
                    rec.data["error"] = v.error;
                }
            }
            out.push_back(std::move(rec));
        }
        {
            CheckRecord rec;
            rec.name = std::string("commute.weakly_compatible.") + pr.label;
            CommuteVerdict v = check_weak_compatibility(*pr.first, *pr.second, p.domain,
                                                        p.sampling.geometry, p.tol.coincidence);
            rec.verdict = v.holds ? "holds" : (v.domain_escape ? "domain_escape" : "violated");
            rec.code = v.holds ? 0 : 1;
            if (!v.holds) rec.data["witness"] = point_json(v.witness);
            out.push_back(std::move(rec));
        }
        {
            CheckRecord rec;
            rec.name = std::string("commute.reciprocally_continuous.") + pr.label;
            ReciprocalVerdict v = check_reciprocal_continuity(*pr.first, *pr.second, p.domain,
                                                              p.sampling.geometry);
            rec.verdict = v.counterexample ? "violated" : "no_counterexample";
            rec.code = v.counterexample ? 1 : 0;
            rec.data["heuristic"] = true;  // refutation only, never a certificate
            if (v.counterexample) {
                rec.data["limit_point"] = point_json(v.t);
                rec.data["direction"] = point_json(v.direction);
                rec.data["identity"] = v.identity;
                rec.data["limit_value"] = point_json(v.limit_value);
                rec.data["map_value"] = point_json(v.map_value);
            }
            out.push_back(std::move(rec));
        }
    }

    for (const auto& probe : opts.probes) {
        CommuteVerdict v = commute_probe(p.A, p.T, p.domain, probe, p.tol.coincidence);
        CheckRecord rec;
        rec.name = "commute.probe";
        rec.verdict = v.holds ? "holds" : (v.domain_escape ? "domain_escape" : "violated");
        rec.code = 0;       // diagnostic only
        rec.gating = false;
        rec.data["x"] = point_json(probe);
        if (!v.domain_escape) {
            rec.data["A_of_Tx"] = point_json(v.at_value);
            rec.data["T_of_Ax"] = point_json(v.ta_value);
            rec.data["error"] = v.error;
        }
        out.push_back(std::move(rec));
    }
}

void verify_gregus_cmd(const Problem& p, std::vector<CheckRecord>& out) {
    SweepOptions sw = p.sampling.sweep;
    sw.tol = p.tol.inequality;

    auto record = [&](const char* name, InequalityForm form) {
        CheckRecord rec;
        rec.name = name;
        InequalityReport r = sweep_verify(p.A, p.B, p.S, p.T, p.domain, p.q, p.constants, form, sw);
        rec.verdict = verdict_name(r.holds);
        rec.code = r.holds ? 0 : 1;
        rec.data["pairs_tested"] = r.pairs_tested;
        rec.data["worst_margin"] = r.worst_margin;
        rec.data["worst_x"] = point_json(r.worst_x);
        rec.data["worst_y"] = point_json(r.worst_y);
        rec.data["constants"] = {p.constants.c1, p.constants.c2, p.constants.c3};
        out.push_back(std::move(rec));
    };

    record("gregus.quadratic_2_1_1", InequalityForm::quadratic_2_1_1);
    // The linear corollary form applies exactly when c = (1, 0, 0).
    if (std::abs(p.constants.c1 - 1.0) <= 1e-12 && p.constants.c2 == 0.0 && p.constants.c3 == 0.0)
        record("gregus.linear_2_2_1", InequalityForm::linear_2_2_1);
}

void solve_fixedpoint_cmd(const Problem& p, const RunOptions& opts,
                          std::vector<CheckRecord>& out) {
    Schedule schedule = p.schedule.make();
    double tol = p.tol.inner(p.domain.dim());

    // Hypothesis gate: the inequality sweep plus weak compatibility of the
    // scaled pairs at every scheduled k. Failures are reported as warnings
    // and do not block the solve: the solver's own outcome (and the final
    // residual validation) is the primary verdict of this command.
    if (!opts.force) {
        SweepOptions sw = p.sampling.sweep;
        sw.tol = p.tol.inequality;
        InequalityReport ir = sweep_verify(p.A, p.B, p.S, p.T, p.domain, p.q, p.constants,
                                           InequalityForm::quadratic_2_1_1, sw);
        CheckRecord rec;
        rec.name = "solve.gate.inequality";
        rec.verdict = ir.holds ? "holds" : "violated";
        rec.code = 0;
        rec.gating = false;
        rec.data["worst_margin"] = ir.worst_margin;
        rec.data["worst_x"] = point_json(ir.worst_x);
        rec.data["worst_y"] = point_json(ir.worst_y);
        out.push_back(std::move(rec));

        const char* labels[2] = {"A_S", "B_T"};
        const PiecewiseMap* firsts[2] = {&p.A, &p.B};
        const PiecewiseMap* seconds[2] = {&p.S, &p.T};
        for (int i = 0; i < 2; ++i) {
            bool ok = true;
            double worst_k = 0.0;
            Point witness;
            for (double k : schedule.k_values) {
                CommuteVerdict v = check_scaled_weak_compatibility(
                    *firsts[i], *seconds[i], p.domain, p.q, k, p.sampling.geometry,
                    p.tol.coincidence);
                if (!v.holds) {
                    ok = false;
                    worst_k = k;
                    witness = v.witness;
                    break;
                }
            }
            CheckRecord rec2;
            rec2.name = std::string("solve.gate.scaled_weak_compatibility.") + labels[i];
            rec2.verdict = ok ? "holds" : "violated";
            rec2.code = 0;
            rec2.gating = false;
            if (!ok) {
                rec2.data["k"] = worst_k;
                rec2.data["witness"] = point_json(witness);
            }
            out.push_back(std::move(rec2));
        }
    }

    FixedPointTrace tr = solve_schedule(p.A, p.B, p.S, p.T, p.domain, p.q, schedule,
                                        p.sampling.geometry, tol);
    CheckRecord rec;
    rec.name = "solve.schedule";
    switch (tr.outcome) {
        case SolveOutcome::converged:
            rec.verdict = "converged";
            rec.code = 0;
            break;
        case SolveOutcome::not_found:
            rec.verdict = "not_found";
            rec.code = 2;
            break;
        case SolveOutcome::diverged:
            rec.verdict = "diverged";
            rec.code = 2;
            break;
    }
    ordered_json steps = ordered_json::array();
    for (const auto& st : tr.steps)
        steps.push_back(ordered_json{{"k", st.k},
                                     {"x", point_json(st.x)},
                                     {"residual", st.residual},
                                     {"found", st.found}});
    rec.data["steps"] = steps;
    if (tr.outcome != SolveOutcome::not_found) {
        rec.data["z"] = point_json(tr.z);
        rec.data["limit_residuals"] = {tr.limit_residuals[0], tr.limit_residuals[1],
                                       tr.limit_residuals[2], tr.limit_residuals[3]};
    }
    out.push_back(std::move(rec));
}

void invariant_approx_cmd(const Problem& p, const RunOptions& opts,
                          std::vector<CheckRecord>& out) {
    if (!p.u) throw ParseError("invariant-approx needs a reference point (problem field "
                               "\"u\" or --u)");
    ApproxPipelineReport rep = invariant_approximation(
        p.A, p.B, p.S, p.T, p.domain, p.q, *p.u, p.constants, p.schedule.make(),
        p.sampling.geometry, p.tol.fixed_point, opts.force);

    {
        CheckRecord rec;
        rec.name = "approx.best_approximants";
        rec.verdict = "computed";
        rec.code = 0;
        rec.data["u"] = point_json(rep.approx.u);
        rec.data["dist"] = rep.approx.dist;
        ordered_json pts = ordered_json::array();
        for (const auto& pt : rep.approx.points) pts.push_back(point_json(pt));
        rec.data["points"] = pts;
        out.push_back(std::move(rec));
    }
    for (const auto& hc : rep.checks) {
        CheckRecord rec;
        rec.name = "approx." + hc.name;
        rec.verdict = hc.holds ? (hc.warning ? "holds_with_warning" : "holds")
                               : (hc.hard ? "precondition_failure" : "violated");
        rec.code = hc.holds ? 0 : 1;
        if (!hc.detail.empty()) rec.data["detail"] = hc.detail;
        out.push_back(std::move(rec));
    }
    if (rep.aborted) {
        CheckRecord rec;
        rec.name = "approx.pipeline";
        rec.verdict = "aborted";
        rec.code = 1;
        rec.data["failed_check"] = rep.abort_reason;
        out.push_back(std::move(rec));
        return;
    }
    CheckRecord rec;
    rec.name = "approx.common_fixed_point_in_p_set";
    rec.verdict = rep.solved ? "holds" : "not_found";
    rec.code = rep.solved ? 0 : 2;
    if (rep.solved) {
        rec.data["z"] = point_json(rep.trace.z);
        rec.data["limit_residuals"] = {rep.trace.limit_residuals[0], rep.trace.limit_residuals[1],
                                       rep.trace.limit_residuals[2], rep.trace.limit_residuals[3]};
    }
    out.push_back(std::move(rec));
}

}  // namespace

std::vector<std::string> command_names() {
    return {"check-geometry", "check-affinity", "check-commute", "verify-gregus",
            "solve-fixedpoint", "invariant-approx", "all"};
}

Report run_command(const std::string& command, const Problem& problem, const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    Problem p = apply_options(problem, opts);

    std::vector<CheckRecord> records;
    auto dispatch = [&](const std::string& cmd) {
        if (cmd == "check-geometry") {
            check_geometry(p, records);
        } else if (cmd == "check-affinity") {
            check_affinity_cmd(p, opts, records);
        } else if (cmd == "check-commute") {
            check_commute_cmd(p, opts, records);
        } else if (cmd == "verify-gregus") {
            verify_gregus_cmd(p, records);
        } else if (cmd == "solve-fixedpoint") {
            solve_fixedpoint_cmd(p, opts, records);
        } else if (cmd == "invariant-approx") {
            invariant_approx_cmd(p, opts, records);
        } else {
            throw ParseError("unknown subcommand: " + cmd);
        }
    };

    if (command == "all") {
        check_geometry(p, records);
        check_affinity_cmd(p, opts, records);
        check_commute_cmd(p, opts, records);
        verify_gregus_cmd(p, records);
        solve_fixedpoint_cmd(p, opts, records);
        if (p.u) invariant_approx_cmd(p, opts, records);
    } else {
        dispatch(command);
    }

    int exit_code = 0;
    for (const auto& rec : records)
        if (rec.gating) exit_code = std::max(exit_code, rec.code);

    Report rep;
    rep.exit_code = exit_code;

    ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["problem"] = p.name;
    j["input_digest"] = p.digest();
    j["seed"] = p.sampling.sweep.seed;
    ordered_json checks = ordered_json::array();
    for (const auto& rec : records) {
        ordered_json cj;
        cj["name"] = rec.name;
        cj["verdict"] = rec.verdict;
        cj["gating"] = rec.gating;
        if (!rec.data.is_null()) cj["data"] = rec.data;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["exit_code"] = exit_code;
    rep.machine = j;

    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::ostringstream os;
    os << p.name << " :: " << command << "  (digest " << p.digest() << ", seed "
       << p.sampling.sweep.seed << ")\n";
    for (const auto& rec : records) {
        os << "  [" << rec.verdict << "] " << rec.name;
        if (!rec.gating) os << "  (informational)";
        if (rec.data.contains("detail")) os << " - " << rec.data["detail"].get<std::string>();
        os << "\n";
    }
    os << "exit " << exit_code << ", wall " << ms << " ms\n";
    rep.text = os.str();
    return rep;
}

}  // namespace gregus
