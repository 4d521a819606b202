#pragma once

#include <array>
#include <unordered_map>

#include "gqe/galois.hpp"
#include "gqe/geometry.hpp"

namespace gqe {

using Vec4 = std::array<int, 4>;

// Projective 3-space helper: points and planes as normalized 4-vectors,
// lines as sorted point-id lists.
struct PG3 {
    FieldPtr field;
    std::vector<Vec4> pts;                       // all points, normalized
    std::unordered_map<uint64_t, int> pt_index;
    std::vector<Vec4> planes;                    // dual coordinates, normalized
    std::unordered_map<uint64_t, int> plane_index;

    int npoints() const { return (int)pts.size(); }
    Vec4 normalize(Vec4 v) const;
    uint64_t key(const Vec4& v) const;
    int point(const Vec4& v) const;
    int plane(const Vec4& dual) const;
    bool on_plane(int pt, int pl) const;
    std::vector<int> line_points(int a, int b) const;  // all q+1 points of the line
    int third_plane_coord(int a, int b, int c) const;  // plane through 3 noncollinear pts
    int line_meet_plane(int a, int b, int pl) const;   // point, -1 if line in plane
};

PG3 build_pg3(const FieldPtr& f);

// Tits quadrangle T2(O) for an oval O in a plane of PG(3,q).
struct TitsModel {
    PG3 pg;
    int delta = -1;                 // the oval's plane
    std::vector<int> oval;          // point ids in pg
    std::vector<int> tangent_line_of;  // per oval index: representative pair? stored as plane-trace
    // GQ point ids: [0, A) affine points; [A, A+T) tangent planes; A+T = infinity
    std::vector<int> gq_pt_affine;      // gq affine point -> pg point
    std::vector<int> gq_pt_plane;       // gq tangent-plane point -> pg plane
    std::vector<int> affine_of_pg;      // pg point -> gq id or -1
    std::vector<int> gqpt_of_plane;     // pg plane -> gq id or -1
    int infty = -1;                     // gq id of the point (infinity)
    // GQ line ids: [0, S) secant pg-lines (meeting O once, not in delta), then oval points
    std::vector<std::vector<int>> gq_line_pgpts;  // per type (a) line: its pg point ids
    std::unordered_map<uint64_t, int> line_key_index;
    int first_oval_line = 0;  // type (b) lines start here; oval point i -> line first_oval_line + i
    Geometry geom;

    int line_of_pg_pair(int a, int b) const;  // gq line id of the pg line through a, b (-1)
};

// oval: point ids of q+1 points of one plane, no 3 collinear; validated.
TitsModel build_tits_t2(const FieldPtr& f, const std::vector<Vec4>& oval_coords);

// Standard conic {(0,1,t,t^2)} u {(0,0,0,1)} in the plane x0 = 0.
std::vector<Vec4> standard_conic(const FieldPtr& f);

struct CounterexampleResult {
    TitsModel model;          // Delta = T2(conic) over GF(3)
    Morphism phi;             // Delta -> Delta
    Subgeometry thin_subgq;   // the 16-point, 8-line grid G
};

// The q = 3 morphism collapsing T2(O) onto a thin hyperplane subGQ.
CounterexampleResult build_counterexample_morphism();

// Exhaustive feasibility certificate for morphisms with image inside a thin
// hyperplane grid.  For each exterior point the traces of its lines on the
// grid form a pairwise non-collinear quadruple; a morphism fixing the grid
// (up to a grid automorphism) needs a grid point collinear with all four.
struct GridRetractionProbe {
    bool traces_pairwise_noncollinear = false;
    bool every_diagonal_uncoverable = false;  // no grid point covers any such quadruple
    int exterior_points = 0;
    int diagonals_checked = 0;
};

GridRetractionProbe grid_retraction_probe(const Geometry& g, const Subgeometry& grid);

}  // namespace gqe
