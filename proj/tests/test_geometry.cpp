#include "doctest.h"

#include "gqe/galois.hpp"
#include "gqe/geometry.hpp"
#include "gqe/quadric.hpp"

using namespace gqe;

namespace {

// 4x4 grid: 16 points, 8 lines of 4 points
Geometry make_grid(int n) {
    std::vector<std::vector<int>> lines;
    for (int r = 0; r < n; ++r) {
        std::vector<int> row;
        for (int c = 0; c < n; ++c) row.push_back(r * n + c);
        lines.push_back(row);
    }
    for (int c = 0; c < n; ++c) {
        std::vector<int> col;
        for (int r = 0; r < n; ++r) col.push_back(r * n + c);
        lines.push_back(col);
    }
    return build_geometry(std::move(lines), n * n, "grid");
}

const QuadricModel& q43() {
    static QuadricModel qm = build_parabolic(Field::make(3, 1));
    return qm;
}

}  // namespace

TEST_CASE("build_geometry basics and errors") {
    Geometry g = make_grid(3);
    CHECK(g.points() == 9);
    CHECK(g.lines() == 6);
    auto rep = validate_gq(g);
    CHECK(rep.is_gq);
    CHECK(rep.s == 2);
    CHECK(rep.t == 1);
    CHECK_FALSE(rep.thick);
    // two lines sharing two points
    CHECK_THROWS(build_geometry({{0, 1, 2}, {0, 1, 3}}, 4));
    // malformed ids
    CHECK_THROWS(build_geometry({{0, 5}}, 3));
    CHECK_THROWS(build_geometry({{1, 1, 2}}, 3));
}

TEST_CASE("Q(4,3) order and counts") {
    const auto& qm = q43();
    CHECK(qm.geom.points() == 40);
    CHECK(qm.geom.lines() == 40);
    auto rep = validate_gq(qm.geom);
    CHECK(rep.is_gq);
    CHECK(rep.thick);
    CHECK(rep.s == 3);
    CHECK(rep.t == 3);
    // count identity (1+s)(1+st), (1+t)(1+st)
    CHECK(qm.geom.points() == (1 + rep.s) * (1 + rep.s * rep.t));
    CHECK(qm.geom.lines() == (1 + rep.t) * (1 + rep.s * rep.t));
}

TEST_CASE("validate_gq reports violations") {
    // triangle: not a GQ
    Geometry g = build_geometry({{0, 1}, {1, 2}, {0, 2}}, 3);
    auto rep = validate_gq(g);
    CHECK_FALSE(rep.is_gq);
    CHECK_FALSE(rep.witnesses.empty());
}

TEST_CASE("perp operators on Q(4,3)") {
    const Geometry& g = q43().geom;
    std::array<int, 1> x{0};
    auto xs = perp(g, x, PerpMode::PERP);
    CHECK((int)xs.size() == 1 + 3 * 4);  // 1 + s(t+1)
    int y = -1;
    for (int cand = 1; cand < g.points(); ++cand)
        if (!g.collinear(0, cand)) {
            y = cand;
            break;
        }
    std::array<int, 2> pair{0, y};
    auto tr = perp(g, pair, PerpMode::PERP);
    CHECK((int)tr.size() == 4);  // t + 1
    auto sp = perp(g, pair, PerpMode::DOUBLE_PERP);
    CHECK(sp.size() == 2);  // points of Q(4,q) are antiregular for q odd
    // cl of a collinear pair is the whole point set
    int z = -1;
    for (int cand : g.line_points(0))
        if (cand != g.line_points(0)[0]) z = cand;
    std::array<int, 2> coll{g.line_points(0)[0], z};
    auto cl = perp(g, coll, PerpMode::CL);
    CHECK((int)cl.size() == g.points());
}

TEST_CASE("line regulus") {
    const Geometry& g = q43().geom;
    int U = 0, V = -1;
    Bitset onU(g.points());
    for (int p : g.line_points(U)) onU.set(p);
    for (int l = 1; l < g.lines() && V < 0; ++l) {
        bool meets = false;
        for (int p : g.line_points(l))
            if (onU.test(p)) meets = true;
        if (!meets) V = l;
    }
    auto [both, span] = line_regulus(g, U, V);
    CHECK(both.size() == 4);
    CHECK(span.size() == 4);  // all lines of Q(4,q) are regular
    CHECK(std::find(span.begin(), span.end(), U) != span.end());
    CHECK(std::find(span.begin(), span.end(), V) != span.end());
    CHECK_THROWS(line_regulus(g, U, U));
    // grid: two opposite lines span the grid
    Geometry grid = make_grid(4);
    auto [b2, s2] = line_regulus(grid, 0, 1);
    CHECK(b2.size() == 4);
    CHECK(s2.size() == 4);
}

TEST_CASE("hull") {
    const Geometry& g = q43().geom;
    // two collinear points -> the joining line
    const auto& l0 = g.line_points(0);
    std::array<int, 2> two{l0[0], l0[1]};
    auto h = hull(g, two);
    CHECK(h.points == l0);
    CHECK(h.lines == std::vector<int>{0});
    // all points -> everything
    std::vector<int> all(g.points());
    for (int i = 0; i < g.points(); ++i) all[i] = i;
    auto whole = hull(g, all);
    CHECK((int)whole.points.size() == g.points());
    CHECK((int)whole.lines.size() == g.lines());
}

TEST_CASE("hyperplane classification") {
    const Geometry& g = q43().geom;
    // type B: a point perp
    std::array<int, 1> pt{7};
    auto xp = perp(g, pt, PerpMode::PERP);
    auto repB = classify_hyperplane(g, subgeometry_from_points(g, xp));
    CHECK(repB.type == HyperplaneType::B);
    CHECK(repB.center == 7);
    // type A: elliptic ovoid
    auto ovoid = elliptic_ovoid(q43());
    CHECK((int)ovoid.size() == 10);
    auto repA = classify_hyperplane(g, subgeometry_from_points(g, ovoid));
    CHECK(repA.type == HyperplaneType::A);
    // not a hyperplane: a single line's points
    auto repN = classify_hyperplane(g, subgeometry_from_points(g, g.line_points(0)));
    CHECK(repN.type == HyperplaneType::NOT_HYPERPLANE);
}

TEST_CASE("morphism validation") {
    const Geometry& g = q43().geom;
    Morphism id;
    id.src = &g;
    id.dst = &g;
    id.pmap.resize(g.points());
    id.lmap.resize(g.lines());
    for (int i = 0; i < g.points(); ++i) id.pmap[i] = i;
    for (int i = 0; i < g.lines(); ++i) id.lmap[i] = i;
    auto rep = validate_morphism(id);
    CHECK(rep.is_morphism);
    CHECK(rep.is_cover);
    CHECK(rep.theta == 1);
    CHECK(rep.surjective_points);
    // composition of covers is a morphism
    auto comp = compose(id, id);
    CHECK(validate_morphism(comp).is_morphism);
    // break an incidence
    Morphism bad = id;
    std::swap(bad.pmap[0], bad.pmap[39]);
    CHECK_FALSE(validate_morphism(bad).is_morphism);
}

TEST_CASE("spg validation: a GQ is an SPG with alpha 1") {
    const Geometry& g = q43().geom;
    auto rep = validate_spg(g);
    CHECK(rep.is_spg);
    CHECK(rep.alpha == 1);
    CHECK(rep.mu == 4);  // t* + 1
    CHECK(rep.is_partial_quadrangle);
    CHECK(rep.is_partial_geometry);
    CHECK(rep.is_gq);
    // grid: non-collinear pairs have mu = 2
    Geometry grid = make_grid(4);
    auto rg = validate_spg(grid);
    CHECK(rg.is_spg);
    CHECK(rg.alpha == 1);
    CHECK(rg.mu == 2);
}

TEST_CASE("hull idempotence and monotonicity on samples") {
    const Geometry& g = q43().geom;
    std::vector<int> seed{0, 9, 17};
    auto h1 = hull(g, seed);
    auto h2 = hull(g, h1.points);
    CHECK(h1.points == h2.points);
    seed.push_back(23);
    auto h3 = hull(g, seed);
    for (int p : h1.points) CHECK(h3.has_point(p));
}
