#pragma once

#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "gqe/geometry.hpp"

namespace gqe {

// Automorphism of a fixed geometry: permutation of point ids with the line
// permutation carried along.  Composition is left-to-right: x^(a*b) = (x^a)^b.
struct GroupElement {
    std::vector<int32_t> p, l;
    bool is_identity() const {
        for (size_t i = 0; i < p.size(); ++i)
            if (p[i] != (int32_t)i) return false;
        return true;
    }
};

GroupElement identity_element(const Geometry& g);
// Derives the line permutation from the point permutation; verifies that the
// map is an automorphism (throws otherwise) unless verify is false.
GroupElement make_automorphism(const Geometry& g, std::vector<int32_t> pperm, bool verify = true);
GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);

std::vector<int32_t> compose_pp(const std::vector<int32_t>& a, const std::vector<int32_t>& b);
std::vector<int32_t> inverse_pp(const std::vector<int32_t>& a);

// Schreier-Sims stabilizer chain over the point domain.  A base prefix may be
// prescribed (used for pointwise stabilizers); prescribed points are kept in
// the base even when their orbit is trivial.
class StabChain {
public:
    StabChain(int npoints, const std::vector<std::vector<int32_t>>& gens,
              std::vector<int> base_prefix = {});

    uint64_t order() const;
    uint64_t order_from_level(size_t lvl) const;
    const std::vector<int>& base() const { return base_; }
    size_t levels() const { return base_.size(); }
    int orbit_size(size_t lvl) const { return (int)orbs_[lvl].pts.size(); }
    bool contains(const std::vector<int32_t>& pperm) const;
    // Point permutations of the subgroup fixing base[0..lvl-1]; throws if the
    // subgroup is larger than cap.
    std::vector<std::vector<int32_t>> subgroup_elements(size_t lvl, uint64_t cap) const;
    // Strong generators of the subgroup fixing base[0..lvl-1].
    std::vector<std::vector<int32_t>> level_generators(size_t lvl) const;

private:
    struct Orbit {
        std::vector<int32_t> pos;            // point -> position or -1
        std::vector<int> pts;                // BFS order, pts[0] = base point
        std::vector<std::pair<int, int>> back;  // (generator id, parent point)
    };
    int n_;
    std::vector<std::vector<int32_t>> gens_, invs_;
    std::vector<std::vector<int>> level_gens_;
    std::vector<int> base_;
    std::vector<Orbit> orbs_;
    size_t prefix_len_;

    void rebuild_orbit(size_t lvl);
    void path_gens(size_t lvl, int pt, std::vector<int>& out) const;
    std::vector<int32_t> sift(std::vector<int32_t> w, size_t from, size_t* reached) const;
    bool check_level(size_t lvl);
    void add_base_point(int pt);
    void run();
};

// Generating set with lazy chain; the public group handle.
class GenSet {
public:
    GenSet() = default;
    GenSet(const Geometry* geo, std::vector<GroupElement> gens)
        : geo_(geo), gens_(std::move(gens)) {}

    const Geometry* geometry() const { return geo_; }
    const std::vector<GroupElement>& generators() const { return gens_; }
    void add_generator(GroupElement g) {
        gens_.push_back(std::move(g));
        chain_.reset();
    }

    uint64_t order() const;
    bool contains(const GroupElement& g) const;
    uint64_t pointwise_stabilizer_order(std::span<const int> pts) const;
    // All elements; throws if the group is larger than cap.
    std::vector<GroupElement> elements(uint64_t cap) const;
    // Elements of the pointwise stabilizer of pts (cap-guarded).
    std::vector<GroupElement> pointwise_stabilizer_elements(std::span<const int> pts,
                                                            uint64_t cap) const;
    const StabChain& chain() const;

private:
    const Geometry* geo_ = nullptr;
    std::vector<GroupElement> gens_;
    mutable std::shared_ptr<StabChain> chain_;
};

std::vector<int> orbit_of_point(const std::vector<GroupElement>& gens, int seed);
std::vector<int> orbit_of_line(const std::vector<GroupElement>& gens, int seed);

struct SetOrbit {
    uint64_t size = 0;
    bool truncated = false;
    std::vector<std::vector<int>> sets;  // filled when keep_sets
};

// Orbit of a point set under the generators, deduplicated by 128-bit hashing.
SetOrbit orbit_of_set(int npoints, const std::vector<GroupElement>& gens,
                      std::span<const int> set, uint64_t cap, bool keep_sets);

// Generators of the setwise stabilizer, built from Schreier elements of the
// set orbit and verified to reach order() / orbit size.
std::vector<GroupElement> set_stabilizer_generators(const GenSet& gs, std::span<const int> set,
                                                    uint64_t orbit_cap = 4000000);

// Restriction of a group to an induced subgeometry stabilized by every
// generator.  kernel_order receives the order of the elementwise stabilizer.
GenSet induced_action(const GenSet& gs, const InducedGeometry& ind, uint64_t* kernel_order);

}  // namespace gqe
