#include "gregus/registry.hpp"

namespace gregus {

namespace {

Piece piece_1d(double lo, double hi, bool lo_closed, bool hi_closed, std::vector<double> coeffs) {
    Piece pc;
    pc.guard_all = false;
    pc.guard = Primitive::make_interval(lo, hi, lo_closed, hi_closed);
    std::vector<Term> terms;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0.0 || i == 0) terms.push_back(Term{coeffs[i], static_cast<int>(i), 0});
    pc.expr = {terms};
    return pc;
}

// Union of the two closed unit disks touching at (1,0); q-starshaped but
// not convex. Identity maps make every geometric check meaningful while
// keeping the map layer trivial.
Problem two_disks() {
    Problem p;
    p.name = "two_disks";
    p.domain = DomainSet(2, {Primitive::make_disk(Point(0.0, 0.0), 1.0),
                             Primitive::make_disk(Point(2.0, 0.0), 1.0)});
    p.q = Point(1.0, 0.0);
    p.A = PiecewiseMap::identity(2);
    p.B = PiecewiseMap::identity(2);
    p.S = PiecewiseMap::identity(2);
    p.T = PiecewiseMap::identity(2);
    p.u = Point(1.0, 2.0);
    return p;
}

// The jump map on [0,1]: T = 1 on [0,1), T(1) = 0, with star-center 1/2.
// Affine with respect to 1/2 on the sampled quantifier domain, but not
// q-affine (T(1/2) = 1 != 1/2).
Problem ex1_9() {
    Problem p;
    p.name = "ex1_9";
    p.domain = DomainSet(1, {Primitive::make_interval(0.0, 1.0)});
    p.q = Point(0.5);
    p.A = PiecewiseMap::identity(1);
    p.B = PiecewiseMap::identity(1);
    p.S = PiecewiseMap::identity(1);
    p.T = PiecewiseMap(1,
                       {piece_1d(0.0, 1.0, true, false, {1.0}),
                        piece_1d(1.0, 1.0, true, true, {0.0})},
                       "T");
    return p;
}

// Step map against x^2 with star-center 0. The coincidence union is
// [0, 0.5] plus the isolated point 1; the pair commutes there and fails
// at 0.6. Declared as both theorem pairs (B = A, S = T) so each check
// runs against the same pair.
Problem cq_def() {
    Problem p;
    p.name = "cq_def";
    p.domain = DomainSet(1, {Primitive::make_interval(0.0, 1.0)});
    p.q = Point(0.0);
    p.A = PiecewiseMap(1,
                       {piece_1d(0.0, 0.5, true, true, {0.0}),
                        piece_1d(0.5, 1.0, false, true, {1.0})},
                       "A");
    p.B = PiecewiseMap(p.A.dim(), p.A.pieces(), "B");
    PiecewiseMap square(1, {[] {
                            Piece pc;
                            pc.guard_all = true;
                            pc.expr = {{Term{1.0, 2, 0}}};
                            return pc;
                        }()},
                        "T");
    p.S = PiecewiseMap(square.dim(), square.pieces(), "S");
    p.T = square;
    return p;
}

// Four piecewise-linear selfmaps of [0,1] with the common fixed point 2/3.
Problem ex2_6() {
    const double q = 2.0 / 3.0;
    Problem p;
    p.name = "ex2_6";
    p.domain = DomainSet(1, {Primitive::make_interval(0.0, 1.0)});
    p.q = Point(q);
    p.A = PiecewiseMap(1,
                       {piece_1d(0.0, q, true, false, {q}),
                        piece_1d(q, 1.0, true, true, {4.0 / 3.0, -1.0})},
                       "A");
    p.B = PiecewiseMap(p.A.dim(), p.A.pieces(), "B");
    p.S = PiecewiseMap(1,
                       {piece_1d(0.0, q, true, false, {q}),
                        piece_1d(q, 1.0, true, true, {1.0, -0.5})},
                       "S");
    p.T = PiecewiseMap(1,
                       {piece_1d(0.0, q, true, false, {1.0, -0.5}),
                        piece_1d(q, 1.0, true, true, {q})},
                       "T");
    p.constants = GregusConstants{1.0, 0.0, 0.0, false};
    return p;
}

}  // namespace

std::vector<std::string> registry_names() {
    return {"two_disks", "ex1_9", "cq_def", "ex2_6"};
}

Problem make_example(const std::string& name) {
    if (name == "two_disks") return two_disks();
    if (name == "ex1_9") return ex1_9();
    if (name == "cq_def") return cq_def();
    if (name == "ex2_6") return ex2_6();
    throw std::invalid_argument("unknown example: " + name +
                                " (try two_disks, ex1_9, cq_def, ex2_6)");
}

}  // namespace gregus
