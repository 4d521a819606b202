#pragma once

#include "gqe/coset.hpp"
#include "gqe/subtension.hpp"

namespace gqe {

// Affine quadrangle: the parent minus a hyperplane subquadrangle.  Lines keep
// their s points outside Q.
struct AffineGeometry {
    const Geometry* parent = nullptr;
    Geometry geom;
    std::vector<int> pt_to_parent, line_to_parent;
    std::vector<int> pt_from_parent, line_from_parent;
};

AffineGeometry build_affine(const Geometry& g, const Subgeometry& Q);

// Ovoid geometry: points are the subtended ovoids, lines the rosettes,
// together with the natural projection pi : A -> E.
struct OvoidGeometry {
    Geometry geom;
    std::vector<std::vector<int>> ovoids;          // E point -> sorted parent ids
    std::vector<int> rosette_base;                 // E line -> base point in parent
    std::unordered_map<uint64_t, int> ovoid_index; // hash of ids -> E point
    Morphism pi;                                   // from the affine geometry
    int theta = 0;
};

OvoidGeometry build_ovoid_geometry(const Geometry& g, const Subgeometry& Q,
                                   const AffineGeometry& A);

struct T3Report {
    bool hypotheses_hold = false;
    int expected_s = -1, expected_t = -1, expected_alpha = -1, expected_mu = -1;
    SpgReport measured;
    bool match = false;
};

T3Report check_t3_parameters(const Geometry& E, int s, int t, int tprime, int theta);

// Automorphism of E given as permutations of its points and lines.
struct EAut {
    std::vector<int> pmap, lmap;
};

// Cover gamma = (restriction of a Gamma automorphism stabilizing Q) followed
// by pi.
Morphism cover_from_automorphism(const AffineGeometry& A, const OvoidGeometry& E,
                                 const GroupElement& g);

// gamma = alpha o pi with alpha an automorphism of E; throws when
// well-definedness across fibers fails.
EAut lower_decompose(const AffineGeometry& A, const OvoidGeometry& E, const Morphism& gamma);

// The base automorphism of Q induced by a cover: point map on Q via the
// rosette base correspondence, extended to lines.
struct BaseAut {
    std::vector<int> pmap;  // indexed by position in Q.points
    std::vector<int> lmap;  // indexed by position in Q.lines
};

BaseAut derive_base_automorphism(const Geometry& g, const Subgeometry& Q, const AffineGeometry& A,
                                 const OvoidGeometry& E, const Morphism& gamma);

enum class ExtensionChoice { FIRST, SECOND };

// Subtension bookkeeping for one hyperplane subquadrangle.
struct SubtensionTable {
    std::unordered_map<uint64_t, std::vector<int>> subtenders;  // ovoid key -> points
    std::vector<uint64_t> key_of_point;  // exterior parent point -> ovoid key
    std::vector<int> ovoid_of_point;     // parent point -> ovoid index or -1
    std::vector<std::vector<int>> ovoids;
};

SubtensionTable build_subtension_table(const Geometry& g, const Subgeometry& Q);

// Extends a base automorphism of Q (fixing [infty]) to the whole geometry by
// subtension-correspondence propagation; the result is verified.
GroupElement extend_base_automorphism(const Geometry& g, const Subgeometry& Q,
                                      const SubtensionTable& table, const BaseAut& alpha,
                                      ExtensionChoice choice);

// The involution fixing Q pointwise and swapping every doubly-subtending pair.
GroupElement swap_involution(const Geometry& g, const Subgeometry& Q,
                             const SubtensionTable& table);

// Rigidity: any automorphism fixing Q pointwise and one exterior point is the
// identity; certified by checking the propagation is everywhere forced.
bool extension_rigidity_holds(const Geometry& g, const Subgeometry& Q,
                              const SubtensionTable& table);

struct T8Report {
    uint64_t line_stab_measured = 0;  // |Aut(Q(4,q))_U|
    uint64_t line_stab_formula = 0;   // h s^4 (s-1)(s^2-1)
    uint64_t aut_a_formula = 0;       // (s-1)^2 (s+1) s^4 h delta / 2
    uint64_t aut_e_formula = 0;       // aut_a / 2
    bool sigma_sq_one = false;
    bool identity_2e_equals_a = false;      // |Aut(A)| = 2|Aut(E)|
    bool identity_e_vs_line_stab = false;   // sigma^2=1: Aut(E) = Aut(Q)_L size;
                                            // else 2|Aut(E)| = |Aut(Q)_L|
};

T8Report t8_order_audit(int p, int h, int sigma_k, const GenSet* autq4 /* may be null */);

}  // namespace gqe
