#pragma once

#include "gqe/galois.hpp"
#include "gqe/geometry.hpp"
#include "gqe/permgroup.hpp"

namespace gqe {

// Element of the group G = {(alpha, c, beta) : alpha, beta in F_q^2, c in F_q}
// with (a,c,b)(a',c',b') = (a+a', c+c'+b.a'^T, b+b').  Fields hold raw field
// element indices.
struct GElem {
    uint8_t a1 = 0, a2 = 0, c = 0, b1 = 0, b2 = 0;
    bool operator==(const GElem& o) const {
        return a1 == o.a1 && a2 == o.a2 && c == o.c && b1 == o.b1 && b2 == o.b2;
    }
};

struct FamilyCheck {
    bool ok = true;
    std::string witness;
};

// Kantor-Knuth coset model.  The Kantor family A(t) = {(a, a A_t a^T, a K_t)}
// with A_t = diag(t, -m t^sigma) lives in the group G of order q^5 and yields
// a generalized quadrangle of order (q^2, q); the geometry stored here is its
// point-line dual, of order (q, q^2), whose distinguished line [infty]
// corresponds to the base point of the coset geometry.
class CosetModel {
public:
    FieldPtr f;
    int sigma_k = 0;
    int m = 0;  // nonsquare
    int q = 0;
    Geometry geom;

    // t slots: 0..q-1 are the field elements in canonical order, slot q is
    // infinity.
    int slot_count() const { return q + 1; }
    int infty_slot() const { return q; }
    int slot_elem(int ts) const { return f->element_of_rank(ts); }
    int elem_slot(int e) const { return f->canon_rank(e); }
    int clan_second(int ts) const { return mt_[ts]; }  // -m t^sigma for finite slots

    // group arithmetic
    uint32_t encode(const GElem& g) const;
    GElem decode(uint32_t x) const;
    GElem mul(const GElem& x, const GElem& y) const;
    GElem invert(const GElem& x) const;
    GElem family_elem(int ts, int x1, int x2) const;  // the A(t) element over alpha

    // geometry ids; points are the dualized K-lines, lines the dualized
    // K-points
    int num_points() const { return (q + 1) * q * q * q + q + 1; }
    int num_lines() const { return q * q * q * q * q + (q + 1) * q * q + 1; }
    int point_coset(int ts, const GElem& g) const;     // Gamma point: coset g A(t)
    int point_symbol(int ts) const;                    // Gamma point on [infty]
    int line_elem(const GElem& g) const;               // Gamma line: group element
    int line_star(int ts, const GElem& g) const;       // Gamma line: coset g A*(t)
    int line_infty() const;                            // the line [infty]

    struct PointInfo {
        bool symbol = false;
        int ts = 0;
        GElem rep;  // canonical coset representative (unused for symbols)
    };
    PointInfo point_info(int pid) const;
    struct LineInfo {
        int kind = 0;  // 0 element, 1 star coset, 2 [infty]
        int ts = 0;
        GElem rep;
    };
    LineInfo line_info(int lid) const;

    std::vector<int> mt_;  // -m t^sigma per finite slot
};

// K1/K2 for the family data (standalone so corrupted clans can be probed).
FamilyCheck check_kantor_conditions(const FieldPtr& f, int sigma_k, int m);

// m < 0 selects the canonical nonsquare.  Throws when K1/K2 fail or the
// geometry does not validate.
CosetModel build_kantor_knuth(const FieldPtr& f, int sigma_k, int m = -1);

// Automorphism of the dual pair realized as x -> h * A(x) on the group,
// together with the induced slot map; this covers left translations, the
// family-preserving group automorphisms, and their composites.
struct CosetMap {
    std::vector<uint32_t> emap;
    std::vector<int> tmap;
};

CosetMap map_identity(const CosetModel& cm);
CosetMap map_compose(const CosetModel& cm, const CosetMap& a, const CosetMap& b);
CosetMap map_inverse(const CosetModel& cm, const CosetMap& a);
CosetMap map_left_mult(const CosetModel& cm, const GElem& h);
// t -> t + r (fixes the infinity slot)
CosetMap map_psi(const CosetModel& cm, int r_elem);
// (alpha, c, beta) -> (alpha D, lambda c, lambda beta D^-1), D = diag(d1, d2)
CosetMap map_phi_diag(const CosetModel& cm, int d1, int d2, int lambda);
// inversion t -> 1/(4t), swapping slots 0 and infinity
CosetMap map_rho(const CosetModel& cm);
// semilinear lift of x -> x^p
CosetMap map_frobenius(const CosetModel& cm);
// kernel scalar (alpha, c, beta) -> (alpha, lambda c, lambda beta); lambda
// must lie in the fixed field of sigma
CosetMap map_kernel_scalar(const CosetModel& cm, int lambda);
// coordinate swap, defined when sigma^2 = id (and for sigma = id)
std::optional<CosetMap> map_weyl_swap(const CosetModel& cm);
// any automorphism moving the symbol point of slot ts to the infinity slot
CosetMap mover_to_infty_slot(const CosetModel& cm, int ts);

int apply_point(const CosetModel& cm, const CosetMap& m, int pid);
int apply_line(const CosetModel& cm, const CosetMap& m, int lid);
GroupElement coset_map_to_perm(const CosetModel& cm, const CosetMap& m, bool verify = true);

// The q symmetries about a line meeting [infty] (including [infty] itself).
// Other lines are not axes of symmetry in this model.
std::vector<GroupElement> line_symmetries_coset(const CosetModel& cm, int line_id);

// Translation group about a point of [infty]: order q^4 = s^2 t, fixing the
// point linewise and regular on the points not collinear with it.
GenSet translation_group(const CosetModel& cm, int symbol_point);

// The kernel group G(u,v) of the translation quadrangle: scalar maps by the
// multiplicative group of the fixed field of sigma, conjugated to (u, v).
// u must be a symbol point, v a point not collinear with u.
std::vector<GroupElement> kernel_homologies(const CosetModel& cm, int u, int v);

// The two canonical Q(4,q) subquadrangles cut out by the coordinate axes of
// alpha/beta space; both contain [infty].
Subgeometry canonical_subgq(const CosetModel& cm, int axis);

// Structured translation elements fixing an affine point e (collinear with
// the symbol point e'); used to cut out translation-ovoid certificates
// without materializing the whole translation group.
struct TransCandidate {
    GElem h;    // left factor in the conjugated frame
    int r = 0;  // psi shift in the conjugated frame
};
struct TransCandidateSet {
    CosetMap to_frame;    // moves e' to the infinity slot
    CosetMap from_frame;  // inverse
    std::vector<TransCandidate> cands;  // q^3 elements fixing e
};
TransCandidateSet translation_candidates_fixing(const CosetModel& cm, int e_point);
int trans_apply_point(const CosetModel& cm, const TransCandidateSet& s, const TransCandidate& c,
                      int pid);

}  // namespace gqe
