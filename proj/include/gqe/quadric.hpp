#pragma once

#include <array>
#include <unordered_map>

#include "gqe/galois.hpp"
#include "gqe/geometry.hpp"
#include "gqe/permgroup.hpp"

namespace gqe {

using Vec6 = std::array<int, 6>;

// Orthogonal quadrangle model: points are the singular projective points of a
// fixed quadratic form, lines the totally singular lines.
// Parabolic (dim 4): x0^2 + x1*x2 + x3*x4      -> Q(4,q), order (q, q)
// Elliptic  (dim 5): n(x0,x1) + x2*x3 + x4*x5  -> Q(5,q), order (q, q^2)
class QuadricModel {
public:
    FieldPtr field;
    int pgdim = 4;                      // projective dimension (4 or 5)
    int na = 0, nb = 0;                 // n(x,y) = x^2 + a*x*y + b*y^2 for dim 5
    std::vector<Vec6> coords;           // normalized representative per point
    std::vector<std::pair<int, int>> line_span;
    Geometry geom;

    int ncoords() const { return pgdim + 1; }
    int qform(const Vec6& x) const;
    int bform(const Vec6& x, const Vec6& y) const;
    Vec6 normalize(Vec6 x) const;
    int point_index(const Vec6& x) const;  // -1 if not a point of the quadric

    // Point permutation of the semilinear map v -> frob^k(v) * M.
    GroupElement apply_matrix(const std::vector<Vec6>& rows, int frob_k = 0) const;

    std::unordered_map<uint64_t, int> index_;
    uint64_t key(const Vec6& x) const;
};

QuadricModel build_parabolic(const FieldPtr& f);
QuadricModel build_elliptic(const FieldPtr& f);

// The q symmetries about a line of Q(4,q) (Siegel maps fixing every line
// that meets it).
std::vector<GroupElement> line_symmetries_quadric(const QuadricModel& qm, int line);

// Generators of the full automorphism group of Q(4,q): orthogonal group plus
// field automorphisms.  The order is certified against the stabilizer-chain
// product h * q^4 (q^4 - 1)(q^2 - 1) and flag transitivity.
GenSet orthogonal_generators(const QuadricModel& qm);

// Nondegenerate hyperplane section of Q(5,q): a full Q(4,q) subquadrangle.
Subgeometry parabolic_section(const QuadricModel& q5);

// An elliptic-quadric ovoid of Q(4,q) (nondegenerate elliptic hyperplane
// section), as a sorted point set.
std::vector<int> elliptic_ovoid(const QuadricModel& q4);

}  // namespace gqe
