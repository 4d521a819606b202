#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gqe/common.hpp"

namespace gqe {

// Immutable point-line incidence structure with dense bitset collinearity.
// Safe for shared read-only access once built.
class Geometry {
public:
    Geometry() = default;

    int points() const { return P_; }
    int lines() const { return L_; }
    const std::vector<int>& line_points(int l) const { return line_pts_[l]; }
    const std::vector<int>& point_lines(int p) const { return pt_lines_[p]; }
    const BitMatrix& collinearity() const { return collin_; }
    bool collinear(int a, int b) const { return collin_.test(a, b); }
    const std::string& model_tag() const { return tag_; }

    bool incident(int p, int l) const {
        const auto& v = line_pts_[l];
        return std::binary_search(v.begin(), v.end(), p);
    }
    // Line joining two distinct collinear points, -1 if none.
    int line_through(int a, int b) const;
    // Unique point of line l collinear with z, for z not on l (GQ axiom (b)).
    // Returns -1 if there is no such point or it is not unique.
    int projection(int z, int l) const;

    void collinearity_row(int p, Bitset& out) const { collin_.row_to(p, out); }

    friend Geometry build_geometry(std::vector<std::vector<int>> lines, int point_count,
                                   std::string model_tag);

private:
    int P_ = 0, L_ = 0;
    std::vector<std::vector<int>> line_pts_;
    std::vector<std::vector<int>> pt_lines_;
    // per point: neighbors sorted, and the joining line per neighbor
    std::vector<std::vector<int>> nbr_;
    std::vector<std::vector<int>> nbr_line_;
    BitMatrix collin_;
    std::string tag_;
};

Geometry build_geometry(std::vector<std::vector<int>> lines, int point_count,
                        std::string model_tag = "");

struct Witness {
    std::string what;
    long long a = -1, b = -1;
};

constexpr int kWitnessCap = 16;

struct OrderReport {
    bool is_gq = false;
    bool thick = false;
    bool regular = false;  // constant degrees
    int s = -1, t = -1;
    bool exhaustive = true;
    uint64_t pairs_checked = 0;
    std::vector<Witness> witnesses;
};

struct ValidateOpts {
    // axiom (b) is checked exhaustively when P*L is at most this, else sampled
    uint64_t exhaustive_pair_limit = 500000000ull;
    bool force_exhaustive = false;
    uint64_t sample_pairs = 2000000;
    uint64_t seed = 1;
};

OrderReport validate_gq(const Geometry& g, const ValidateOpts& opts = {});

enum class PerpMode { PERP, DOUBLE_PERP, CL };

std::vector<int> perp(const Geometry& g, std::span<const int> pts, PerpMode mode);

// {U,V}^perp (lines meeting both) and {U,V}^perp-perp for non-concurrent U, V.
std::pair<std::vector<int>, std::vector<int>> line_regulus(const Geometry& g, int U, int V);

struct Subgeometry {
    const Geometry* parent = nullptr;
    std::vector<int> points;  // sorted
    std::vector<int> lines;   // sorted
    bool full = false;

    bool has_point(int p) const { return std::binary_search(points.begin(), points.end(), p); }
    bool has_line(int l) const { return std::binary_search(lines.begin(), lines.end(), l); }
};

// Smallest point set containing the seed and closed under adjoining full
// joining lines of collinear members, together with all lines fully inside.
Subgeometry hull(const Geometry& g, std::span<const int> seed);

Subgeometry subgeometry_from_points(const Geometry& g, std::vector<int> pts);

struct InducedGeometry {
    Geometry geom;
    std::vector<int> pt_to_parent, line_to_parent;
    std::vector<int> pt_from_parent, line_from_parent;  // -1 where absent
};

InducedGeometry induce(const Subgeometry& sub);

enum class HyperplaneType { A, B, C, NOT_HYPERPLANE };

struct HyperplaneReport {
    HyperplaneType type = HyperplaneType::NOT_HYPERPLANE;
    bool thin = false;    // set for type C of thin order
    int center = -1;      // the point x for type B
    std::vector<Witness> witnesses;
};

HyperplaneReport classify_hyperplane(const Geometry& g, const Subgeometry& h);

struct Morphism {
    const Geometry* src = nullptr;
    const Geometry* dst = nullptr;
    std::vector<int> pmap, lmap;
};

struct MorphReport {
    bool is_morphism = false;
    bool is_cover = false;
    int theta = 0;  // constant fiber size, 0 when fibers are non-constant
    bool point_fibers_constant = false, line_fibers_constant = false;
    bool surjective_points = false, surjective_lines = false;
    std::vector<Witness> witnesses;
};

MorphReport validate_morphism(const Morphism& m);

Morphism compose(const Morphism& f, const Morphism& g);  // apply f, then g

struct SpgReport {
    bool is_spg = false;
    int s = -1, t = -1, alpha = -1, mu = -1;
    bool is_partial_quadrangle = false;
    bool is_partial_geometry = false;
    bool is_gq = false;
    bool zero_mu_pair = false;      // some non-collinear pair with no common neighbor
    bool nonconstant_mu = false;    // distinct positive values observed
    std::vector<Witness> witnesses;
};

SpgReport validate_spg(const Geometry& g);

}  // namespace gqe
