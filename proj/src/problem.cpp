#include "gregus/problem.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gregus {

using nlohmann::json;
using nlohmann::ordered_json;

Schedule ScheduleConfig::make() const {
    if (rule == "harmonic") return Schedule::harmonic(length);
    if (rule == "geometric") return Schedule::geometric(ratio, length);
    throw ParseError("schedule.rule must be \"harmonic\" or \"geometric\"");
}

namespace {

double number_at(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return parse_real(v.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    throw ParseError(where + ": expected a number or a numeric string");
}

Point point_at(const json& v, int dim, const std::string& where) {
    if (dim == 1) {
        if (v.is_array()) {
            if (v.size() != 1) throw ParseError(where + ": expected one coordinate");
            return Point(number_at(v[0], where));
        }
        return Point(number_at(v, where));
    }
    if (!v.is_array() || v.size() != 2)
        throw ParseError(where + ": expected [x, y]");
    return Point(number_at(v[0], where + "[0]"), number_at(v[1], where + "[1]"));
}

Primitive primitive_at(const json& v, int dim, const std::string& where) {
    if (!v.is_object()) throw ParseError(where + ": expected an object");
    std::string type = v.value("type", "");
    if (type == "interval") {
        if (dim != 1) throw ParseError(where + ": interval primitive in a 2D problem");
        Primitive pr = Primitive::make_interval(number_at(v.at("lo"), where + ".lo"),
                                                number_at(v.at("hi"), where + ".hi"));
        pr.lo_closed = v.value("lo_closed", true);
        pr.hi_closed = v.value("hi_closed", true);
        if (pr.lo > pr.hi) throw ParseError(where + ": lo > hi");
        return pr;
    }
    if (type == "disk") {
        if (dim != 2) throw ParseError(where + ": disk primitive in a 1D problem");
        return Primitive::make_disk(point_at(v.at("center"), 2, where + ".center"),
                                    number_at(v.at("radius"), where + ".radius"));
    }
    if (type == "polygon") {
        if (dim != 2) throw ParseError(where + ": polygon primitive in a 1D problem");
        std::vector<Point> vs;
        for (size_t i = 0; i < v.at("vertices").size(); ++i)
            vs.push_back(point_at(v.at("vertices")[i], 2,
                                  where + ".vertices[" + std::to_string(i) + "]"));
        return Primitive::make_polygon(std::move(vs));
    }
    throw ParseError(where + ".type: expected interval | disk | polygon");
}

std::vector<std::vector<Term>> expr_at(const json& v, int dim, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        throw ParseError(where + ": expected " + std::to_string(dim) +
                         " coordinate expression(s)");
    std::vector<std::vector<Term>> expr;
    for (int c = 0; c < dim; ++c) {
        const json& coord = v[static_cast<size_t>(c)];
        std::string cw = where + "[" + std::to_string(c) + "]";
        std::vector<Term> terms;
        if (!coord.is_array()) throw ParseError(cw + ": expected an array");
        bool coeff_list = true;
        for (const auto& e : coord)
            if (e.is_object()) coeff_list = false;
        if (coeff_list) {
            // Plain coefficient list c0 + c1*x + ... (1D convenience form).
            if (dim != 1) throw ParseError(cw + ": coefficient lists are 1D only");
            if (coord.size() > 5) throw ParseError(cw + ": degree exceeds 4");
            for (size_t i = 0; i < coord.size(); ++i) {
                double cf = number_at(coord[i], cw + "[" + std::to_string(i) + "]");
                if (cf != 0.0 || i == 0) terms.push_back(Term{cf, static_cast<int>(i), 0});
            }
        } else {
            for (size_t i = 0; i < coord.size(); ++i) {
                const json& t = coord[i];
                std::string tw = cw + "[" + std::to_string(i) + "]";
                if (!t.is_object()) throw ParseError(tw + ": expected {c, p}");
                Term term;
                term.coeff = number_at(t.at("c"), tw + ".c");
                const json& p = t.at("p");
                if (!p.is_array() || p.empty() || p.size() > 2)
                    throw ParseError(tw + ".p: expected [px] or [px, py]");
                term.px = p[0].get<int>();
                term.py = p.size() > 1 ? p[1].get<int>() : 0;
                terms.push_back(term);
            }
        }
        expr.push_back(std::move(terms));
    }
    return expr;
}

PiecewiseMap map_at(const json& v, int dim, const std::string& name, const std::string& where) {
    if (!v.is_array() || v.empty())
        throw ParseError(where + ": expected a nonempty piece list");
    std::vector<Piece> pieces;
    for (size_t i = 0; i < v.size(); ++i) {
        const json& pj = v[i];
        std::string pw = where + "[" + std::to_string(i) + "]";
        if (!pj.is_object()) throw ParseError(pw + ": expected {guard?, poly}");
        Piece pc;
        if (pj.contains("guard")) {
            pc.guard_all = false;
            pc.guard = primitive_at(pj.at("guard"), dim, pw + ".guard");
        }
        pc.expr = expr_at(pj.at("poly"), dim, pw + ".poly");
        pieces.push_back(std::move(pc));
    }
    return PiecewiseMap(dim, std::move(pieces), name);
}

ordered_json primitive_json(const Primitive& pr) {
    ordered_json j;
    switch (pr.kind) {
        case PrimitiveKind::interval:
            j["type"] = "interval";
            j["lo"] = pr.lo;
            j["hi"] = pr.hi;
            j["lo_closed"] = pr.lo_closed;
            j["hi_closed"] = pr.hi_closed;
            break;
        case PrimitiveKind::disk:
            j["type"] = "disk";
            j["center"] = {pr.center.x(), pr.center.y()};
            j["radius"] = pr.radius;
            break;
        case PrimitiveKind::polygon: {
            j["type"] = "polygon";
            ordered_json vs = ordered_json::array();
            for (const auto& v : pr.vertices) vs.push_back({v.x(), v.y()});
            j["vertices"] = vs;
            break;
        }
    }
    return j;
}

ordered_json point_json(const Point& p) {
    if (p.dim == 1) return ordered_json(p.x());
    return ordered_json::array({p.x(), p.y()});
}

ordered_json map_json(const PiecewiseMap& m) {
    ordered_json pieces = ordered_json::array();
    for (const auto& pc : m.pieces()) {
        ordered_json pj;
        if (!pc.guard_all) pj["guard"] = primitive_json(pc.guard);
        ordered_json coords = ordered_json::array();
        for (const auto& coord : pc.expr) {
            ordered_json terms = ordered_json::array();
            for (const auto& t : coord)
                terms.push_back(ordered_json{{"c", t.coeff}, {"p", {t.px, t.py}}});
            coords.push_back(terms);
        }
        pj["poly"] = coords;
        pieces.push_back(pj);
    }
    return pieces;
}

}  // namespace

ordered_json Problem::to_json() const {
    ordered_json j;
    j["name"] = name;
    j["space"] = {{"dimension", domain.dim()}};
    ordered_json prims = ordered_json::array();
    for (const auto& pr : domain.primitives()) prims.push_back(primitive_json(pr));
    j["domain"] = prims;
    j["q"] = point_json(q);
    j["maps"] = {{"A", map_json(A)}, {"B", map_json(B)}, {"S", map_json(S)}, {"T", map_json(T)}};
    j["constants"] = {{"c1", constants.c1}, {"c2", constants.c2}, {"c3", constants.c3},
                      {"strict", constants.strict}};
    j["sampling"] = {{"grid", sampling.geometry.pitch1d},
                     {"grid2d", sampling.geometry.pitch2d},
                     {"segment_samples", sampling.geometry.segment_samples},
                     {"pair_grid", sampling.sweep.pair_pitch1d},
                     {"pair_grid2d", sampling.sweep.pair_pitch2d},
                     {"pairs", sampling.sweep.random_pairs},
                     {"seed", sampling.sweep.seed},
                     {"k_samples", sampling.k_samples}};
    j["schedule"] = {{"rule", schedule.rule}, {"ratio", schedule.ratio}, {"length", schedule.length}};
    j["tolerances"] = {{"membership", tol.membership},   {"coincidence", tol.coincidence},
                       {"inequality", tol.inequality},   {"inner", tol.inner1d},
                       {"inner2d", tol.inner2d},         {"fixed_point", tol.fixed_point},
                       {"affinity", tol.affinity}};
    if (u) j["u"] = point_json(*u);
    return j;
}

std::string Problem::digest() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(to_json().dump())));
    return std::string(buf);
}

Problem parse_problem_json(const json& doc, const std::string& name) {
    if (!doc.is_object()) throw ParseError("problem document must be a JSON object");

    Problem p;
    p.name = doc.value("name", name.empty() ? std::string("problem") : name);

    int dim = 1;
    if (doc.contains("space")) dim = doc.at("space").value("dimension", 1);
    if (dim != 1 && dim != 2) throw ParseError("space.dimension must be 1 or 2");

    if (!doc.contains("domain")) throw ParseError("missing field: domain");
    std::vector<Primitive> prims;
    const json& dj = doc.at("domain");
    if (!dj.is_array() || dj.empty()) throw ParseError("domain: expected a primitive list");
    for (size_t i = 0; i < dj.size(); ++i)
        prims.push_back(primitive_at(dj[i], dim, "domain[" + std::to_string(i) + "]"));
    try {
        p.domain = DomainSet(dim, std::move(prims));
    } catch (const std::exception& e) {
        throw ParseError(std::string("domain: ") + e.what());
    }

    if (!doc.contains("q")) throw ParseError("missing field: q");
    p.q = point_at(doc.at("q"), dim, "q");
    if (!p.domain.contains(p.q)) throw ParseError("q: star-center lies outside the domain");

    // Maps with alias resolution ("identity", or the name of another map).
    // Absent B defaults to A; absent A, S, T default to the identity.
    const json maps = doc.value("maps", json::object());
    std::function<PiecewiseMap(const std::string&, int)> resolve =
        [&](const std::string& mname, int hops) -> PiecewiseMap {
        if (hops > 4) throw ParseError("maps." + mname + ": alias cycle");
        if (mname == "identity") return PiecewiseMap::identity(dim);
        if (!maps.contains(mname)) {
            if (mname == "B") return resolve("A", hops + 1);
            return PiecewiseMap::identity(dim);
        }
        const json& v = maps.at(mname);
        if (v.is_string()) {
            std::string alias = v.get<std::string>();
            if (alias != "identity" && alias != "A" && alias != "B" && alias != "S" &&
                alias != "T")
                throw ParseError("maps." + mname + ": unresolved alias \"" + alias + "\"");
            return resolve(alias, hops + 1);
        }
        return map_at(v, dim, mname, "maps." + mname);
    };
    auto named = [](PiecewiseMap m, const char* n) {
        return PiecewiseMap(m.dim(), m.pieces(), n);
    };
    p.A = named(resolve("A", 0), "A");
    p.B = named(resolve("B", 0), "B");
    p.S = named(resolve("S", 0), "S");
    p.T = named(resolve("T", 0), "T");

    if (doc.contains("constants")) {
        const json& cj = doc.at("constants");
        p.constants.c1 = number_at(cj.value("c1", json(1.0)), "constants.c1");
        p.constants.c2 = number_at(cj.value("c2", json(0.0)), "constants.c2");
        p.constants.c3 = number_at(cj.value("c3", json(0.0)), "constants.c3");
        p.constants.strict = cj.value("strict", false);
        try {
            p.constants.validate();
        } catch (const std::exception& e) {
            throw ParseError(std::string("constants: ") + e.what());
        }
    }

    if (doc.contains("sampling")) {
        const json& sj = doc.at("sampling");
        if (sj.contains("grid")) p.sampling.geometry.pitch1d = number_at(sj.at("grid"), "sampling.grid");
        if (sj.contains("grid2d"))
            p.sampling.geometry.pitch2d = number_at(sj.at("grid2d"), "sampling.grid2d");
        if (sj.contains("segment_samples"))
            p.sampling.geometry.segment_samples = sj.at("segment_samples").get<int>();
        if (sj.contains("pair_grid"))
            p.sampling.sweep.pair_pitch1d = number_at(sj.at("pair_grid"), "sampling.pair_grid");
        if (sj.contains("pair_grid2d"))
            p.sampling.sweep.pair_pitch2d = number_at(sj.at("pair_grid2d"), "sampling.pair_grid2d");
        if (sj.contains("pairs")) p.sampling.sweep.random_pairs = sj.at("pairs").get<long>();
        if (sj.contains("seed")) {
            p.sampling.sweep.seed = sj.at("seed").get<uint64_t>();
            p.sampling.geometry.seed = p.sampling.sweep.seed;
        }
        if (sj.contains("k_samples")) p.sampling.k_samples = sj.at("k_samples").get<int>();
    }

    if (doc.contains("schedule")) {
        const json& sj = doc.at("schedule");
        p.schedule.rule = sj.value("rule", "harmonic");
        if (sj.contains("ratio")) p.schedule.ratio = number_at(sj.at("ratio"), "schedule.ratio");
        p.schedule.length = sj.value("length", 12);
        try {
            p.schedule.make();
        } catch (const std::exception& e) {
            throw ParseError(std::string("schedule: ") + e.what());
        }
    }

    if (doc.contains("tolerances")) {
        const json& tj = doc.at("tolerances");
        auto set = [&](const char* key, double& slot) {
            if (tj.contains(key)) slot = number_at(tj.at(key), std::string("tolerances.") + key);
        };
        set("membership", p.tol.membership);
        set("coincidence", p.tol.coincidence);
        set("inequality", p.tol.inequality);
        set("inner", p.tol.inner1d);
        set("inner2d", p.tol.inner2d);
        set("fixed_point", p.tol.fixed_point);
        set("affinity", p.tol.affinity);
    }

    if (doc.contains("u")) p.u = point_at(doc.at("u"), dim, "u");

    // Load-time validation: guard coverage / disjointness and the self-map
    // property, sampled.
    for (const auto* m : {&p.A, &p.B, &p.S, &p.T}) {
        try {
            validate_piecewise_map(*m, p.domain, p.sampling.geometry);
        } catch (const std::exception& e) {
            throw ParseError(std::string("maps.") + m->name() + ": " + e.what());
        }
    }
    return p;
}

Problem parse_problem_text(const std::string& text, const std::string& name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what());
    }
    return parse_problem_json(doc, name);
}

Problem parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string base = path;
    size_t slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    return parse_problem_text(buf.str(), base);
}

}  // namespace gregus
