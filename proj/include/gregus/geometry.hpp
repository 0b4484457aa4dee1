#pragma once

#include <optional>
#include <vector>

#include "gregus/common.hpp"

namespace gregus {

/// Absolute tolerance for set membership at boundaries (binary64 roundoff
/// on projections).
inline constexpr double kMembershipTol = 1e-9;

enum class PrimitiveKind { interval, disk, polygon };

/// One building block of a DomainSet. Intervals carry open/closed endpoint
/// flags; 2D primitives are always closed. Polygons are convex with CCW
/// vertex order.
struct Primitive {
    PrimitiveKind kind = PrimitiveKind::interval;

    // interval
    double lo = 0.0, hi = 0.0;
    bool lo_closed = true, hi_closed = true;

    // disk
    Point center;
    double radius = 0.0;

    // polygon
    std::vector<Point> vertices;

    static Primitive make_interval(double lo, double hi, bool lo_closed = true,
                                   bool hi_closed = true);
    static Primitive make_disk(Point center, double radius);
    static Primitive make_polygon(std::vector<Point> vertices);

    int dim() const { return kind == PrimitiveKind::interval ? 1 : 2; }
    bool contains(const Point& p, double tol) const;
    /// Strict interior at the given tolerance (used to decide whether a
    /// candidate boundary point of one primitive is swallowed by another).
    bool strictly_inside(const Point& p, double tol) const;
};

/// Sampling resolutions for the falsification-style predicates. "holds"
/// always means "no counterexample at this resolution".
struct SampleSpec {
    double pitch1d = 1e-3;
    double pitch2d = 2e-2;
    int segment_samples = 64;
    int random_points = 0;       // extra seeded random samples where useful
    uint64_t seed = kDefaultSeed;

    double pitch(int dim) const { return dim == 1 ? pitch1d : pitch2d; }
};

/// A compact subset of R^1 or R^2: a finite union of primitives.
class DomainSet {
public:
    DomainSet() = default;
    DomainSet(int dim, std::vector<Primitive> primitives);

    int dim() const { return dim_; }
    const std::vector<Primitive>& primitives() const { return prims_; }

    bool contains(const Point& p, double tol = kMembershipTol) const;

    /// Axis-aligned bounding box [lo, hi] per coordinate.
    Point bbox_lo() const { return bbox_lo_; }
    Point bbox_hi() const { return bbox_hi_; }
    double diameter() const;

    /// Node-centered grid over the bounding box (includes box corners),
    /// filtered by membership.
    std::vector<Point> grid_points(double pitch) const;
    /// Cell-centered grid: never contains bounding-box edge points.
    std::vector<Point> cell_centered_points(double pitch) const;
    /// Samples of the topological boundary of the union (primitive
    /// boundaries with covered stretches removed).
    std::vector<Point> boundary_points(double pitch) const;
    /// Seeded rejection sampling into the set.
    std::vector<Point> random_points(int count, uint64_t seed) const;

private:
    int dim_ = 1;
    std::vector<Primitive> prims_;
    Point bbox_lo_, bbox_hi_;
};

/// Euclidean distance from p to the closed segment s (orthogonal projection
/// clamped to the parameter range; exact for degenerate segments).
double point_segment_distance(const Point& p, const Segment& s);

/// Signed distance from p to the topological boundary of E: negative
/// inside, positive outside, ~0 on the boundary.
double boundary_distance(const DomainSet& E, const Point& p);

struct StarshapeVerdict {
    bool holds = true;
    Point witness_p;       // point of E whose segment to q leaves E
    double witness_t = 0;  // parameter of the escaping segment point
    double depth = 0;      // distance of the escaping point from E
};

/// Checks that [q, p] stays inside E for sampled p (grid + boundary
/// emphasis). A violation reports the deepest escaping point found.
StarshapeVerdict is_q_starshaped(const DomainSet& E, const Point& q,
                                 const SampleSpec& spec = {});

struct ConvexityVerdict {
    bool holds = true;
    Point witness_a, witness_b;
    double witness_t = 0;
    double depth = 0;
};

/// Pairwise segment sampling over boundary points (plus a coarse interior
/// set); reports the deepest violation after local refinement of t.
ConvexityVerdict is_convex(const DomainSet& E, const SampleSpec& spec = {});

}  // namespace gregus
