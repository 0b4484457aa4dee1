#include "gregus/maps.hpp"

#include <algorithm>
#include <cmath>

#include "gregus/parallel.hpp"

namespace gregus {

namespace {

double pow_int(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double eval_terms(const std::vector<Term>& terms, const Point& x) {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff * pow_int(x.x(), t.px) * pow_int(x.y(), t.py);
    return s;
}

}  // namespace

PiecewiseMap::PiecewiseMap(int dim, std::vector<Piece> pieces, std::string name)
    : dim_(dim), pieces_(std::move(pieces)), name_(std::move(name)) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("map dimension must be 1 or 2");
    if (pieces_.empty()) throw std::invalid_argument("map needs at least one piece");
    for (const auto& pc : pieces_) {
        if (static_cast<int>(pc.expr.size()) != dim_)
            throw std::invalid_argument("piece arity differs from dimension");
        if (!pc.guard_all && pc.guard.dim() != dim_)
            throw std::invalid_argument("guard dimension mismatch");
        for (const auto& coord : pc.expr)
            for (const auto& t : coord)
                if (t.px < 0 || t.py < 0 || t.px + t.py > 4)
                    throw std::invalid_argument("polynomial total degree exceeds 4");
    }
}

PiecewiseMap PiecewiseMap::identity(int dim) {
    Piece pc;
    pc.guard_all = true;
    if (dim == 1) {
        pc.expr = {{Term{1.0, 1, 0}}};
    } else {
        pc.expr = {{Term{1.0, 1, 0}}, {Term{1.0, 0, 1}}};
    }
    return PiecewiseMap(dim, {pc}, "identity");
}

PiecewiseMap PiecewiseMap::constant(const Point& value) {
    Piece pc;
    pc.guard_all = true;
    pc.expr.resize(static_cast<size_t>(value.dim));
    for (int i = 0; i < value.dim; ++i) pc.expr[static_cast<size_t>(i)] = {Term{value[i], 0, 0}};
    return PiecewiseMap(value.dim, {pc}, "constant");
}

int PiecewiseMap::piece_index(const Point& x) const {
    // Guard membership is exact (tol 0) so half-open breakpoints route to
    // exactly one piece; the membership tolerance is only for the domain.
    for (size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& pc = pieces_[i];
        if (pc.guard_all || pc.guard.contains(x, 0.0)) return static_cast<int>(i);
    }
    return -1;
}

Point PiecewiseMap::eval(const Point& x) const {
    int idx = piece_index(x);
    if (idx < 0) throw std::domain_error("point outside every guard of map " + name_);
    const Piece& pc = pieces_[static_cast<size_t>(idx)];
    Point out = x.dim == 1 ? Point(0.0) : Point(0.0, 0.0);
    for (int c = 0; c < dim_; ++c) out[c] = eval_terms(pc.expr[static_cast<size_t>(c)], x);
    return out;
}

std::vector<Point> PiecewiseMap::guard_boundary_points(const DomainSet& E, double pitch) const {
    std::vector<Point> out;
    for (const auto& pc : pieces_) {
        if (pc.guard_all) continue;
        switch (pc.guard.kind) {
            case PrimitiveKind::interval:
                for (double e : {pc.guard.lo, pc.guard.hi}) {
                    Point p(e);
                    if (E.contains(p)) out.push_back(p);
                }
                break;
            case PrimitiveKind::disk: {
                long n = std::max<long>(8, std::lround(2.0 * M_PI * pc.guard.radius / pitch));
                for (long k = 0; k < n; ++k) {
                    double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
                    Point p(pc.guard.center.x() + pc.guard.radius * std::cos(a),
                            pc.guard.center.y() + pc.guard.radius * std::sin(a));
                    if (E.contains(p)) out.push_back(p);
                }
                break;
            }
            case PrimitiveKind::polygon:
                for (const auto& v : pc.guard.vertices)
                    if (E.contains(v)) out.push_back(v);
                break;
        }
    }
    return out;
}

namespace {

// Shared sample pool for the affinity identities: cell-centered grid plus
// seeded randoms. Random draws live in [lo, hi) per axis, so degenerate
// boundary points (where the paper's own case analyses stop) enter only
// through explicit probes, not through the bulk sampler.
std::vector<Point> affinity_samples(const DomainSet& E, const SampleSpec& spec) {
    std::vector<Point> xs = E.cell_centered_points(spec.pitch(E.dim()));
    int extra = spec.random_points > 0 ? spec.random_points : 1000;
    auto rnd = E.random_points(extra, spec.seed);
    xs.insert(xs.end(), rnd.begin(), rnd.end());
    return xs;
}

std::vector<double> lambda_samples(int n, uint64_t seed) {
    std::vector<double> ls;
    ls.reserve(static_cast<size_t>(2 * n));
    for (int j = 0; j < n; ++j)
        ls.push_back((static_cast<double>(j) + 0.5) / static_cast<double>(n));
    Rng rng(seed ^ 0xA5A5A5A5ull);
    for (int j = 0; j < n; ++j) {
        double l = rng.uniform();
        if (l > 0.0 && l < 1.0) ls.push_back(l);
    }
    return ls;
}

}  // namespace

AffinityVerdict check_affinity(const PiecewiseMap& m, const DomainSet& E, const Point& q,
                               AffinityKind kind, const SampleSpec& spec, double tol) {
    if (!E.contains(q)) throw std::invalid_argument("q is not in E");

    AffinityVerdict v;
    Point tq = m.eval(q);
    if (kind == AffinityKind::q_affine) {
        // Necessary condition first: a q-affine map fixes q.
        v.qfix_error = distance(tq, q);
        if (v.qfix_error > tol) {
            v.holds = false;
            v.witness_x = q;
            v.witness_lambda = 1.0;
            v.error = v.qfix_error;
            return v;
        }
    }

    std::vector<Point> xs = affinity_samples(E, spec);
    std::vector<double> ls = lambda_samples(21, spec.seed);

    const std::ptrdiff_t nx = static_cast<std::ptrdiff_t>(xs.size());
    const std::ptrdiff_t nl = static_cast<std::ptrdiff_t>(ls.size());

    struct Cand {
        double err = -1.0;
        Point x, y;
        double lambda = 0.0;
    };
    auto better = [](const Cand& a, const Cand& b) {
        if (a.err != b.err) return a.err > b.err;
        if (!(a.x == b.x)) return lex_less(a.x, b.x);
        return a.lambda < b.lambda;
    };

    Cand worst;
    if (kind == AffinityKind::affine) {
        // Pairs (x, y) from a coarser stride to keep the triple loop sane.
        std::vector<Point> ys;
        for (size_t i = 0; i < xs.size(); i += 16) ys.push_back(xs[i]);
        const std::ptrdiff_t ny = static_cast<std::ptrdiff_t>(ys.size());
        worst = reduce_best(
            nx * ny, Cand{},
            [&](std::ptrdiff_t flat) {
                const Point& x = xs[static_cast<size_t>(flat / ny)];
                const Point& y = ys[static_cast<size_t>(flat % ny)];
                Cand c;
                c.x = x;
                c.y = y;
                Point tx = m.eval(x), ty = m.eval(y);
                for (std::ptrdiff_t j = 0; j < nl; ++j) {
                    double l = ls[static_cast<size_t>(j)];
                    Point mix = lerp(y, x, l);
                    if (!E.contains(mix)) continue;  // vacuous off the segment hull
                    double e = distance(m.eval(mix), lerp(ty, tx, l));
                    if (e > c.err) {
                        c.err = e;
                        c.lambda = l;
                    }
                }
                return c;
            },
            better);
    } else {
        worst = reduce_best(
            nx, Cand{},
            [&](std::ptrdiff_t i) {
                const Point& x = xs[static_cast<size_t>(i)];
                Cand c;
                c.x = x;
                Point tx = m.eval(x);
                for (std::ptrdiff_t j = 0; j < nl; ++j) {
                    double l = ls[static_cast<size_t>(j)];
                    Point mix = lerp(q, x, l);
                    if (!E.contains(mix)) continue;
                    Point rhs = kind == AffinityKind::q_affine ? lerp(q, tx, l) : lerp(tq, tx, l);
                    double e = distance(m.eval(mix), rhs);
                    if (e > c.err) {
                        c.err = e;
                        c.lambda = l;
                    }
                }
                return c;
            },
            better);
    }

    if (worst.err > tol) {
        v.holds = false;
        v.witness_x = worst.x;
        v.witness_y = worst.y;
        v.witness_lambda = worst.lambda;
        v.error = worst.err;
    }
    return v;
}

ImageVerdict image_check(const PiecewiseMap& m, const DomainSet& E, const PiecewiseMap& target,
                         const SampleSpec& spec) {
    double pitch = spec.pitch(E.dim());

    std::vector<Point> domain_samples = E.grid_points(pitch);
    {
        auto bd = E.boundary_points(pitch);
        for (const auto& p : bd)
            if (E.contains(p)) domain_samples.push_back(p);
    }

    std::vector<Point> image;
    image.reserve(domain_samples.size());
    for (const auto& p : domain_samples) image.push_back(target.eval(p));
    std::sort(image.begin(), image.end(),
              [](const Point& a, const Point& b) { return lex_less(a, b); });

    double allowed = 2.0 * pitch;

    auto nearest_gap = [&](const Point& w) {
        // 1D: binary search on the sorted image; 2D: linear scan with an
        // early-out on the sorted x coordinate.
        double best = std::numeric_limits<double>::infinity();
        if (E.dim() == 1) {
            auto it = std::lower_bound(image.begin(), image.end(), w,
                                       [](const Point& a, const Point& b) { return lex_less(a, b); });
            if (it != image.end()) best = std::min(best, distance(*it, w));
            if (it != image.begin()) best = std::min(best, distance(*std::prev(it), w));
            return best;
        }
        for (const auto& im : image) {
            double dx = std::abs(im.x() - w.x());
            if (dx > best) continue;
            best = std::min(best, distance(im, w));
        }
        return best;
    };

    struct Cand {
        double gap = -1.0;
        Point x;
    };
    Cand worst = reduce_best(
        static_cast<std::ptrdiff_t>(domain_samples.size()), Cand{},
        [&](std::ptrdiff_t i) {
            const Point& x = domain_samples[static_cast<size_t>(i)];
            return Cand{nearest_gap(m.eval(x)), x};
        },
        [](const Cand& a, const Cand& b) {
            if (a.gap != b.gap) return a.gap > b.gap;
            return lex_less(a.x, b.x);
        });

    ImageVerdict v;
    if (worst.gap > allowed) {
        v.holds = false;
        v.witness_x = worst.x;
        v.distance = worst.gap;
    }
    return v;
}

void validate_piecewise_map(const PiecewiseMap& m, const DomainSet& E, const SampleSpec& spec) {
    if (m.dim() != E.dim()) throw std::invalid_argument("map/domain dimension mismatch");

    // Coarser validation grid: this runs at load time on every map.
    double pitch = spec.pitch(E.dim()) * (E.dim() == 1 ? 10.0 : 2.0);
    std::vector<Point> samples = E.grid_points(pitch);
    {
        auto bd = E.boundary_points(pitch);
        for (const auto& p : bd)
            if (E.contains(p)) samples.push_back(p);
        auto gb = m.guard_boundary_points(E, pitch);
        samples.insert(samples.end(), gb.begin(), gb.end());
    }

    for (const auto& p : samples) {
        int active = 0;
        for (const auto& pc : m.pieces())
            if (pc.guard_all || pc.guard.contains(p, 0.0)) ++active;
        if (active == 0)
            throw std::invalid_argument("map " + m.name() + ": guards do not cover x=" +
                                        std::to_string(p.x()));
        if (active > 1)
            throw std::invalid_argument("map " + m.name() + ": guards overlap at x=" +
                                        std::to_string(p.x()));
        Point img = m.eval(p);
        if (!E.contains(img))
            throw std::invalid_argument("map " + m.name() + ": not a self-map, image of x=" +
                                        std::to_string(p.x()) + " leaves the domain");
    }
}

}  // namespace gregus
