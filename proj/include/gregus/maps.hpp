#pragma once

#include <string>
#include <vector>

#include "gregus/geometry.hpp"

namespace gregus {

/// One monomial coeff * x^px * y^py (py unused in 1D). Total degree <= 4.
struct Term {
    double coeff = 0.0;
    int px = 0;
    int py = 0;
};

/// One guarded piece: applies where the guard primitive contains the input.
/// A piece without a guard covers the whole domain.
struct Piece {
    bool guard_all = true;
    Primitive guard;
    std::vector<std::vector<Term>> expr;  // one term list per output coordinate
};

/// A self-map of a DomainSet given as guarded polynomial pieces. Guards must
/// be pairwise disjoint and cover the domain; evaluation never averages
/// across a breakpoint, so jump discontinuities are preserved exactly.
class PiecewiseMap {
public:
    PiecewiseMap() = default;
    PiecewiseMap(int dim, std::vector<Piece> pieces, std::string name = {});

    static PiecewiseMap identity(int dim);
    static PiecewiseMap constant(const Point& value);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    /// Index of the unique active piece, or -1 if no guard matches.
    int piece_index(const Point& x) const;
    /// Evaluates the active piece; throws std::domain_error off every guard.
    Point eval(const Point& x) const;

    /// Guard breakpoints / edges, used as probe points by the heuristics.
    std::vector<Point> guard_boundary_points(const DomainSet& E, double pitch) const;

private:
    int dim_ = 1;
    std::vector<Piece> pieces_;
    std::string name_;
};

/// T_k x = k*T(x) + (1-k)*q: the base map pulled toward the star-center.
struct ScaledMap {
    const PiecewiseMap* base = nullptr;
    double k = 1.0;
    Point q;

    ScaledMap(const PiecewiseMap& base_, double k_, const Point& q_) : base(&base_), k(k_), q(q_) {
        if (k < 0.0 || k > 1.0) throw std::invalid_argument("scale k outside [0,1]");
    }
    Point eval(const Point& x) const {
        Point tx = base->eval(x);
        Point r = tx;
        for (int i = 0; i < r.dim; ++i) r[i] = k * tx[i] + (1.0 - k) * q[i];
        return r;
    }
};

enum class AffinityKind { affine, affine_wrt_point, q_affine };

struct AffinityVerdict {
    bool holds = true;
    Point witness_x;
    Point witness_y;       // second sample point (affine kind only)
    double witness_lambda = 0.0;
    double error = 0.0;    // identity mismatch at the witness
    double qfix_error = 0.0;  // ||Tq - q||, filled for kind q_affine
};

/// Samples the affinity identity of the requested kind over E x (0,1) to
/// tolerance tol. Sample points are cell-centered plus seeded randoms, so
/// the quantifier domain is covered without pinning bounding-box corners.
AffinityVerdict check_affinity(const PiecewiseMap& m, const DomainSet& E, const Point& q,
                               AffinityKind kind, const SampleSpec& spec = {},
                               double tol = 1e-9);

struct ImageVerdict {
    bool holds = true;
    Point witness_x;
    double distance = 0.0;  // gap from m(witness) to the target image cloud
};

/// Checks image(m) within the sampled image of target: every m(x) must be
/// within 2*pitch of some sampled target value.
ImageVerdict image_check(const PiecewiseMap& m, const DomainSet& E,
                         const PiecewiseMap& target, const SampleSpec& spec = {});

/// Load-time validation: guards partition the sampled domain and the map is
/// a self-map on samples. Throws std::invalid_argument with a description.
void validate_piecewise_map(const PiecewiseMap& m, const DomainSet& E,
                            const SampleSpec& spec = {});

}  // namespace gregus
