#pragma once

#include <map>

#include "gqe/coset.hpp"
#include "gqe/quadric.hpp"

namespace gqe {

// An order-q subquadrangle of a Kantor-Knuth geometry found by the census.
struct SubGqHandle {
    Subgeometry sub;
    bool has_infty = false;
    int multiplicity = 0;  // subtension multiplicity of the sampled ovoid
    int cls = 0;           // 1 doubly subtended, 2 simply subtended, 0 unknown
};

struct CensusResult {
    std::vector<SubGqHandle> subgqs;
    int grid_count = 0;
    int n_doubly = 0, n_simply = 0;
    int escaped_hulls = 0;
};

// All order-q subquadrangles of the Kantor-Knuth geometry containing [infty]:
// hulls of grids on [infty] extended by one exterior point.
CensusResult enumerate_order_q_subgqs(const CosetModel& cm);

// x^perp n Q for exterior x, validated as an ovoid of Q (one point per line).
std::vector<int> subtended_ovoid(const Geometry& g, const Subgeometry& Q, int x);

// All exterior points subtending the given ovoid.
std::vector<int> subtension_subtenders(const Geometry& g, const Subgeometry& Q,
                                       const std::vector<int>& ovoid);

struct RosetteData {
    int base = -1;                          // the point L n Q
    std::vector<std::vector<int>> ovoids;   // deduplicated, sorted sets
};

RosetteData rosette(const Geometry& g, const Subgeometry& Q, int L);

struct TranslationCert {
    std::vector<int> ovoid;
    int e = -1;      // subtending point
    int omega = -1;  // special point (= ovoid n [infty])
    int group_order = 0;
    bool fixes_omega_linewise = false;
    bool sharply_transitive = false;
    bool valid() const { return fixes_omega_linewise && sharply_transitive; }
    // certified group, as point permutations of the parent geometry restricted
    // to Q's point set positions
    std::vector<std::vector<int>> parent_perms;
};

TranslationCert translation_ovoid_certificate(const CosetModel& cm, const Subgeometry& Q, int e);

// Group generated by the symmetries about every line of Q(4,q) meeting U.
std::vector<GroupElement> lu_group_quadric(const QuadricModel& qm, int U);

struct SpecialLineReport {
    int special_point = -1;
    std::vector<std::pair<int, uint64_t>> per_line;  // (line through u, |O^{L_U}|)
    std::map<uint64_t, int> class_sizes;             // orbit size -> line count
    std::vector<int> u1_lines, u2_lines;             // small-orbit and large-orbit classes
    bool only_two_sizes = false;
    bool u1_even = false;
};

SpecialLineReport special_line_analysis(const QuadricModel& qm, const std::vector<int>& ovoid,
                                        int u);

// Setwise stabilizer of an ovoid inside Aut(Q(4,q)), computed through the
// stabilizer of its special point.
struct OvoidStabilizer {
    uint64_t order = 0;
    std::vector<GroupElement> gens;
};

OvoidStabilizer ovoid_stabilizer(const QuadricModel& qm, const GenSet& autq,
                                 const std::vector<int>& ovoid, int special_pt);

// Elements of the group fixing u and v linewise (equivalently fixing
// {u,v} u {u,v}^perp pointwise).
std::vector<GroupElement> linewise_stabilizer(const Geometry& g, const GenSet& gs, int u, int v,
                                              uint64_t cap = 100000);

}  // namespace gqe
