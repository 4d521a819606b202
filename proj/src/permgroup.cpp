#include "gqe/permgroup.hpp"

#include <deque>
#include <random>

namespace gqe {

GroupElement identity_element(const Geometry& g) {
    GroupElement e;
    e.p.resize(g.points());
    e.l.resize(g.lines());
    for (int i = 0; i < g.points(); ++i) e.p[i] = i;
    for (int i = 0; i < g.lines(); ++i) e.l[i] = i;
    return e;
}

GroupElement make_automorphism(const Geometry& g, std::vector<int32_t> pperm, bool verify) {
    require((int)pperm.size() == g.points(), "point permutation has wrong size");
    GroupElement e;
    e.p = std::move(pperm);
    e.l.assign(g.lines(), -1);
    for (int l = 0; l < g.lines(); ++l) {
        const auto& lp = g.line_points(l);
        require(lp.size() >= 2, "line with fewer than two points");
        int img = g.line_through(e.p[lp[0]], e.p[lp[1]]);
        require(img >= 0, "point map does not send line " + std::to_string(l) + " to a line");
        e.l[l] = img;
    }
    if (verify) {
        std::vector<uint8_t> seen(g.points(), 0);
        for (int32_t v : e.p) {
            require(v >= 0 && v < g.points() && !seen[v], "point map is not a bijection");
            seen[v] = 1;
        }
        for (int l = 0; l < g.lines(); ++l)
            for (int p : g.line_points(l))
                require(g.incident(e.p[p], e.l[l]), "incidence not preserved");
    }
    return e;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
    GroupElement c;
    c.p = compose_pp(a.p, b.p);
    c.l.resize(a.l.size());
    for (size_t i = 0; i < a.l.size(); ++i) c.l[i] = b.l[a.l[i]];
    return c;
}

GroupElement inverse(const GroupElement& a) {
    GroupElement c;
    c.p = inverse_pp(a.p);
    c.l.resize(a.l.size());
    for (size_t i = 0; i < a.l.size(); ++i) c.l[a.l[i]] = (int32_t)i;
    return c;
}

std::vector<int32_t> compose_pp(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    std::vector<int32_t> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
    return c;
}

std::vector<int32_t> inverse_pp(const std::vector<int32_t>& a) {
    std::vector<int32_t> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[a[i]] = (int32_t)i;
    return c;
}

namespace {

bool pp_is_identity(const std::vector<int32_t>& p) {
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != (int32_t)i) return false;
    return true;
}

int first_moved(const std::vector<int32_t>& p) {
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != (int32_t)i) return (int)i;
    return -1;
}

}  // namespace

StabChain::StabChain(int npoints, const std::vector<std::vector<int32_t>>& gens,
                     std::vector<int> base_prefix)
    : n_(npoints), prefix_len_(base_prefix.size()) {
    for (const auto& g : gens) {
        require((int)g.size() == n_, "generator degree mismatch");
        if (pp_is_identity(g)) continue;
        gens_.push_back(g);
        invs_.push_back(inverse_pp(g));
    }
    for (int b : base_prefix) add_base_point(b);
    // ensure every generator moves some base point
    for (const auto& g : gens_) {
        bool moves = false;
        for (int b : base_) {
            if (g[b] != b) {
                moves = true;
                break;
            }
        }
        if (!moves) {
            int m = first_moved(g);
            if (m >= 0) add_base_point(m);
        }
    }
    if (base_.empty() && !gens_.empty()) add_base_point(first_moved(gens_[0]));
    run();
}

void StabChain::add_base_point(int pt) {
    base_.push_back(pt);
    level_gens_.emplace_back();
    orbs_.emplace_back();
    size_t lvl = base_.size() - 1;
    // generators fixing all earlier base points belong to this level
    for (size_t gi = 0; gi < gens_.size(); ++gi) {
        bool fixes = true;
        for (size_t j = 0; j < lvl; ++j)
            if (gens_[gi][base_[j]] != base_[j]) {
                fixes = false;
                break;
            }
        if (fixes) level_gens_[lvl].push_back((int)gi);
    }
}

void StabChain::rebuild_orbit(size_t lvl) {
    Orbit& o = orbs_[lvl];
    o.pos.assign(n_, -1);
    o.pts.clear();
    o.back.clear();
    o.pts.push_back(base_[lvl]);
    o.back.push_back({-1, -1});
    o.pos[base_[lvl]] = 0;
    for (size_t qi = 0; qi < o.pts.size(); ++qi) {
        int pt = o.pts[qi];
        for (int gi : level_gens_[lvl]) {
            int im = gens_[gi][pt];
            if (o.pos[im] < 0) {
                o.pos[im] = (int32_t)o.pts.size();
                o.pts.push_back(im);
                o.back.push_back({gi, pt});
            }
        }
    }
}

void StabChain::path_gens(size_t lvl, int pt, std::vector<int>& out) const {
    // generator ids along the tree path base -> pt, in application order
    out.clear();
    const Orbit& o = orbs_[lvl];
    int cur = pt;
    while (cur != base_[lvl]) {
        auto [gi, par] = o.back[o.pos[cur]];
        out.push_back(gi);
        cur = par;
    }
    std::reverse(out.begin(), out.end());
}

std::vector<int32_t> StabChain::sift(std::vector<int32_t> w, size_t from, size_t* reached) const {
    std::vector<int> path;
    for (size_t lvl = from; lvl < base_.size(); ++lvl) {
        int im = w[base_[lvl]];
        if (orbs_[lvl].pos[im] < 0) {
            if (reached) *reached = lvl;
            return w;
        }
        path_gens(lvl, im, path);
        // w := w * u_im^{-1}
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            const auto& inv = invs_[*it];
            for (auto& v : w) v = inv[v];
        }
    }
    if (reached) *reached = base_.size();
    return w;
}

bool StabChain::check_level(size_t lvl) {
    rebuild_orbit(lvl);
    const Orbit& o = orbs_[lvl];
    std::vector<int> path;
    for (size_t qi = 0; qi < o.pts.size(); ++qi) {
        int pt = o.pts[qi];
        // u_pt as a permutation
        std::vector<int32_t> u(n_);
        for (int i = 0; i < n_; ++i) u[i] = i;
        path_gens(lvl, pt, path);
        for (int gi : path) {
            const auto& g = gens_[gi];
            for (auto& v : u) v = g[v];
        }
        for (int gi : level_gens_[lvl]) {
            // schreier generator u_pt * g * u_{pt^g}^{-1}
            std::vector<int32_t> s = compose_pp(u, gens_[gi]);
            int im = gens_[gi][pt];
            path_gens(lvl, im, path);
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                const auto& inv = invs_[*it];
                for (auto& v : s) v = inv[v];
            }
            if (pp_is_identity(s)) continue;
            size_t reach = 0;
            std::vector<int32_t> res = sift(std::move(s), lvl + 1, &reach);
            if (pp_is_identity(res)) continue;
            // new strong generator for levels lvl+1 .. reach
            if (reach == base_.size()) {
                int m = first_moved(res);
                add_base_point(m);
            }
            int gid = (int)gens_.size();
            gens_.push_back(res);
            invs_.push_back(inverse_pp(res));
            for (size_t k = lvl + 1; k <= std::min(reach, base_.size() - 1); ++k)
                level_gens_[k].push_back(gid);
            // level 0..lvl membership: res fixes base[0..lvl], so also register
            // at any earlier level whose prefix it fixes (it does: sift residue)
            return false;
        }
    }
    return true;
}

void StabChain::run() {
    if (gens_.empty()) return;
    for (size_t l = 0; l < base_.size(); ++l) rebuild_orbit(l);
    size_t i = base_.size();
    while (i > 0) {
        --i;
        if (!check_level(i)) {
            // a generator was added at some deeper level; re-verify from the bottom
            i = base_.size();
        }
    }
}

uint64_t StabChain::order() const { return order_from_level(0); }

uint64_t StabChain::order_from_level(size_t lvl) const {
    uint64_t o = 1;
    for (size_t i = lvl; i < orbs_.size(); ++i) o = mul_check(o, (uint64_t)orbs_[i].pts.size());
    return o;
}

bool StabChain::contains(const std::vector<int32_t>& pperm) const {
    if (base_.empty()) return pp_is_identity(pperm);
    size_t reach;
    auto res = sift(pperm, 0, &reach);
    return reach == base_.size() && pp_is_identity(res);
}

std::vector<std::vector<int32_t>> StabChain::subgroup_elements(size_t lvl, uint64_t cap) const {
    require(order_from_level(lvl) <= cap, "subgroup too large to enumerate");
    std::vector<std::vector<int32_t>> elems;
    std::unordered_set<uint64_t> seen;
    std::vector<int32_t> id(n_);
    for (int i = 0; i < n_; ++i) id[i] = i;
    auto key = [](const std::vector<int32_t>& v) {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int32_t x : v) h = mix64(h ^ (uint64_t)(uint32_t)x);
        return h;
    };
    elems.push_back(id);
    seen.insert(key(id));
    std::vector<int> gids = lvl < level_gens_.size() ? level_gens_[lvl] : std::vector<int>{};
    // strong generating property: level_gens_[lvl] generates the stabilizer
    for (size_t qi = 0; qi < elems.size(); ++qi) {
        for (int gi : gids) {
            auto nx = compose_pp(elems[qi], gens_[gi]);
            if (seen.insert(key(nx)).second) {
                elems.push_back(std::move(nx));
                require(elems.size() <= cap, "subgroup enumeration exceeded cap");
            }
        }
    }
    return elems;
}

std::vector<std::vector<int32_t>> StabChain::level_generators(size_t lvl) const {
    std::vector<std::vector<int32_t>> out;
    if (lvl >= level_gens_.size()) return out;
    for (int gi : level_gens_[lvl]) out.push_back(gens_[gi]);
    return out;
}

const StabChain& GenSet::chain() const {
    if (!chain_) {
        std::vector<std::vector<int32_t>> pp;
        pp.reserve(gens_.size());
        for (const auto& g : gens_) pp.push_back(g.p);
        chain_ = std::make_shared<StabChain>(geo_->points(), pp);
    }
    return *chain_;
}

uint64_t GenSet::order() const { return gens_.empty() ? 1 : chain().order(); }

bool GenSet::contains(const GroupElement& g) const {
    if (gens_.empty()) return g.is_identity();
    return chain().contains(g.p);
}

uint64_t GenSet::pointwise_stabilizer_order(std::span<const int> pts) const {
    if (gens_.empty()) return 1;
    std::vector<std::vector<int32_t>> pp;
    for (const auto& g : gens_) pp.push_back(g.p);
    StabChain c(geo_->points(), pp, std::vector<int>(pts.begin(), pts.end()));
    return c.order_from_level(pts.size());
}

std::vector<GroupElement> GenSet::elements(uint64_t cap) const {
    std::vector<GroupElement> out;
    if (gens_.empty()) {
        out.push_back(identity_element(*geo_));
        return out;
    }
    require(order() <= cap, "group too large to enumerate");
    std::unordered_set<uint64_t> seen;
    auto key = [](const std::vector<int32_t>& v) {
        uint64_t h = 0x243f6a8885a308d3ULL;
        for (int32_t x : v) h = mix64(h ^ (uint64_t)(uint32_t)x);
        return h;
    };
    out.push_back(identity_element(*geo_));
    seen.insert(key(out[0].p));
    for (size_t qi = 0; qi < out.size(); ++qi)
        for (const auto& g : gens_) {
            GroupElement nx = compose(out[qi], g);
            if (seen.insert(key(nx.p)).second) out.push_back(std::move(nx));
        }
    return out;
}

std::vector<GroupElement> GenSet::pointwise_stabilizer_elements(std::span<const int> pts,
                                                                uint64_t cap) const {
    std::vector<GroupElement> out;
    if (gens_.empty()) {
        out.push_back(identity_element(*geo_));
        return out;
    }
    std::vector<std::vector<int32_t>> pp;
    for (const auto& g : gens_) pp.push_back(g.p);
    StabChain c(geo_->points(), pp, std::vector<int>(pts.begin(), pts.end()));
    auto elems = c.subgroup_elements(pts.size(), cap);
    out.reserve(elems.size());
    for (auto& e : elems) out.push_back(make_automorphism(*geo_, std::move(e), false));
    return out;
}

std::vector<int> orbit_of_point(const std::vector<GroupElement>& gens, int seed) {
    std::vector<int> orb{seed};
    std::unordered_set<int> seen{seed};
    for (size_t qi = 0; qi < orb.size(); ++qi)
        for (const auto& g : gens) {
            int im = g.p[orb[qi]];
            if (seen.insert(im).second) orb.push_back(im);
        }
    std::sort(orb.begin(), orb.end());
    return orb;
}

std::vector<int> orbit_of_line(const std::vector<GroupElement>& gens, int seed) {
    std::vector<int> orb{seed};
    std::unordered_set<int> seen{seed};
    for (size_t qi = 0; qi < orb.size(); ++qi)
        for (const auto& g : gens) {
            int im = g.l[orb[qi]];
            if (seen.insert(im).second) orb.push_back(im);
        }
    std::sort(orb.begin(), orb.end());
    return orb;
}

namespace {

struct Key128 {
    uint64_t a, b;
    bool operator==(const Key128& o) const { return a == o.a && b == o.b; }
};
struct Key128Hash {
    size_t operator()(const Key128& k) const { return k.a; }
};

Key128 bitset_key(const Bitset& s) {
    uint64_t h1 = 0x0123456789abcdefULL, h2 = 0xfedcba9876543210ULL;
    const uint64_t* w = s.data();
    for (int i = 0; i < s.words(); ++i) {
        h1 = mix64(h1 ^ w[i]);
        h2 = mix64(h2 + (w[i] * 0x9e3779b97f4a7c15ULL) + (uint64_t)i);
    }
    return {h1, h2};
}

}  // namespace

SetOrbit orbit_of_set(int npoints, const std::vector<GroupElement>& gens,
                      std::span<const int> set, uint64_t cap, bool keep_sets) {
    SetOrbit result;
    Bitset start(npoints);
    for (int p : set) start.set(p);
    std::unordered_set<Key128, Key128Hash> seen;
    std::deque<Bitset> frontier;
    seen.insert(bitset_key(start));
    if (keep_sets) result.sets.push_back(start.to_vector());
    frontier.push_back(std::move(start));
    result.size = 1;
    while (!frontier.empty()) {
        Bitset cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : gens) {
            Bitset img(npoints);
            cur.for_each([&](int x) { img.set(g.p[x]); });
            auto k = bitset_key(img);
            if (seen.insert(k).second) {
                ++result.size;
                if (result.size > cap) {
                    result.truncated = true;
                    return result;
                }
                if (keep_sets) result.sets.push_back(img.to_vector());
                frontier.push_back(std::move(img));
            }
        }
    }
    return result;
}

std::vector<GroupElement> set_stabilizer_generators(const GenSet& gs, std::span<const int> set,
                                                    uint64_t orbit_cap) {
    const Geometry& geo = *gs.geometry();
    int n = geo.points();
    const auto& gens = gs.generators();
    // BFS with backpointers over the set orbit
    struct Node {
        int parent;
        int gen;
    };
    Bitset start(n);
    for (int p : set) start.set(p);
    std::unordered_map<Key128, int, Key128Hash> index;
    std::vector<Node> nodes;
    std::vector<Bitset> sets;
    index[bitset_key(start)] = 0;
    nodes.push_back({-1, -1});
    sets.push_back(start);
    for (size_t qi = 0; qi < sets.size(); ++qi) {
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            Bitset img(n);
            sets[qi].for_each([&](int x) { img.set(gens[gi].p[x]); });
            auto k = bitset_key(img);
            auto [it, fresh] = index.try_emplace(k, (int)sets.size());
            if (fresh) {
                require(sets.size() < orbit_cap, "set orbit exceeded cap");
                nodes.push_back({(int)qi, (int)gi});
                sets.push_back(std::move(img));
            }
        }
    }
    uint64_t orbit_size = sets.size();
    uint64_t target = gs.order() / orbit_size;
    require(gs.order() % orbit_size == 0, "orbit size does not divide group order");
    // transversal permutation for node i (maps start set to sets[i])
    auto transversal = [&](int i) {
        std::vector<int> path;
        while (nodes[i].parent >= 0) {
            path.push_back(nodes[i].gen);
            i = nodes[i].parent;
        }
        std::reverse(path.begin(), path.end());
        std::vector<int32_t> u(n);
        for (int x = 0; x < n; ++x) u[x] = x;
        for (int gi : path) u = compose_pp(u, gens[gi].p);
        return u;
    };
    std::mt19937_64 rng(12345);
    std::vector<GroupElement> stab_gens;
    GenSet probe(&geo, {});
    for (int round = 0; round < 256; ++round) {
        if (!stab_gens.empty()) {
            probe = GenSet(&geo, stab_gens);
            if (probe.order() == target) break;
        }
        int i = (int)(rng() % sets.size());
        int gi = (int)(rng() % gens.size());
        Bitset img(n);
        sets[i].for_each([&](int x) { img.set(gens[gi].p[x]); });
        int j = index.at(bitset_key(img));
        auto s = compose_pp(compose_pp(transversal(i), gens[gi].p), inverse_pp(transversal(j)));
        if (pp_is_identity(s)) continue;
        stab_gens.push_back(make_automorphism(geo, std::move(s), false));
    }
    GenSet final_check(&geo, stab_gens);
    require(final_check.order() == target, "set stabilizer generators incomplete");
    // sanity: generators stabilize the set
    for (const auto& g : stab_gens) {
        Bitset img(n);
        start.for_each([&](int x) { img.set(g.p[x]); });
        require(img == start, "schreier element moves the set");
    }
    return stab_gens;
}

GenSet induced_action(const GenSet& gs, const InducedGeometry& ind, uint64_t* kernel_order) {
    const Geometry& sub = ind.geom;
    std::vector<GroupElement> rgens;
    for (const auto& g : gs.generators()) {
        std::vector<int32_t> rp(sub.points());
        for (int i = 0; i < sub.points(); ++i) {
            int im = ind.pt_from_parent[g.p[ind.pt_to_parent[i]]];
            require(im >= 0, "generator does not stabilize the subgeometry");
            rp[i] = im;
        }
        rgens.push_back(make_automorphism(sub, std::move(rp)));
    }
    if (kernel_order) {
        *kernel_order = gs.pointwise_stabilizer_order(ind.pt_to_parent);
        GenSet out(&sub, rgens);
        require(mul_check(out.order(), *kernel_order) == gs.order(),
                "induced action order mismatch");
        return out;
    }
    return GenSet(&sub, rgens);
}

}  // namespace gqe
