#include "gqe/geometry.hpp"

#include <atomic>
#include <mutex>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace gqe {

int worker_count() {
    static int n = [] {
        if (const char* e = std::getenv("GQE_WORKERS")) {
            int v = std::atoi(e);
            if (v >= 1 && v <= 64) return v;
        }
        int hc = (int)std::thread::hardware_concurrency();
        return std::clamp(hc, 1, 8);
    }();
    return n;
}

void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& f) {
    int nw = worker_count();
    if (n <= 0) return;
    if (nw <= 1 || n < 1024) {
        f(0, n);
        return;
    }
    std::vector<std::thread> ths;
    int64_t chunk = (n + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
        int64_t b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        ths.emplace_back([&f, b, e] { f(b, e); });
    }
    for (auto& t : ths) t.join();
}

Geometry build_geometry(std::vector<std::vector<int>> lines, int point_count,
                        std::string model_tag) {
    Geometry g;
    g.P_ = point_count;
    g.L_ = (int)lines.size();
    g.tag_ = std::move(model_tag);
    g.line_pts_ = std::move(lines);
    g.pt_lines_.assign(g.P_, {});
    g.collin_ = BitMatrix(g.P_, g.P_);
    for (int l = 0; l < g.L_; ++l) {
        auto& lp = g.line_pts_[l];
        std::sort(lp.begin(), lp.end());
        for (size_t i = 0; i < lp.size(); ++i) {
            require(lp[i] >= 0 && lp[i] < g.P_, "line " + std::to_string(l) + ": point id out of range");
            require(i == 0 || lp[i] != lp[i - 1],
                    "line " + std::to_string(l) + ": repeated point id");
        }
        for (int p : lp) g.pt_lines_[p].push_back(l);
    }
    // collinearity, rejecting any pair on two lines
    for (int l = 0; l < g.L_; ++l) {
        const auto& lp = g.line_pts_[l];
        for (size_t i = 0; i < lp.size(); ++i)
            for (size_t j = i + 1; j < lp.size(); ++j) {
                if (g.collin_.test(lp[i], lp[j]))
                    fail("points " + std::to_string(lp[i]) + "," + std::to_string(lp[j]) +
                         " lie on two lines");
                g.collin_.set(lp[i], lp[j]);
                g.collin_.set(lp[j], lp[i]);
            }
    }
    for (int p = 0; p < g.P_; ++p) g.collin_.set(p, p);
    for (int p = 0; p < g.P_; ++p) std::sort(g.pt_lines_[p].begin(), g.pt_lines_[p].end());
    // neighbor -> line lookup tables
    g.nbr_.assign(g.P_, {});
    g.nbr_line_.assign(g.P_, {});
    for (int p = 0; p < g.P_; ++p) {
        std::vector<std::pair<int, int>> nl;
        for (int l : g.pt_lines_[p])
            for (int r : g.line_pts_[l])
                if (r != p) nl.push_back({r, l});
        std::sort(nl.begin(), nl.end());
        g.nbr_[p].reserve(nl.size());
        g.nbr_line_[p].reserve(nl.size());
        for (auto& [r, l] : nl) {
            g.nbr_[p].push_back(r);
            g.nbr_line_[p].push_back(l);
        }
    }
    return g;
}

int Geometry::line_through(int a, int b) const {
    const auto& nb = nbr_[a];
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return -1;
    return nbr_line_[a][it - nb.begin()];
}

int Geometry::projection(int z, int l) const {
    int found = -1;
    for (int p : line_pts_[l]) {
        if (p == z) return -1;  // z on l
        if (collin_.test(z, p)) {
            if (found >= 0) return -1;
            found = p;
        }
    }
    return found;
}

OrderReport validate_gq(const Geometry& g, const ValidateOpts& opts) {
    OrderReport rep;
    auto witness = [&](const std::string& w, long long a, long long b) {
        if ((int)rep.witnesses.size() < kWitnessCap) rep.witnesses.push_back({w, a, b});
    };
    if (g.points() == 0 || g.lines() == 0) {
        witness("empty geometry", -1, -1);
        return rep;
    }
    // axiom (a): constant degrees
    size_t spts = g.line_points(0).size();
    size_t tlines = g.point_lines(0).size();
    rep.regular = true;
    for (int l = 0; l < g.lines(); ++l)
        if (g.line_points(l).size() != spts) {
            rep.regular = false;
            witness("line size varies", l, (long long)g.line_points(l).size());
        }
    for (int p = 0; p < g.points(); ++p)
        if (g.point_lines(p).size() != tlines) {
            rep.regular = false;
            witness("point degree varies", p, (long long)g.point_lines(p).size());
        }
    if (!rep.regular) return rep;
    rep.s = (int)spts - 1;
    rep.t = (int)tlines - 1;

    // axiom (b): each non-incident (x, L) has exactly one collinear point on L
    uint64_t total = (uint64_t)g.points() * (uint64_t)g.lines();
    bool exhaustive = opts.force_exhaustive || total <= opts.exhaustive_pair_limit;
    rep.exhaustive = exhaustive;
    std::atomic<uint64_t> checked{0};
    std::atomic<bool> ok{true};
    std::mutex wmx;
    auto check_pair = [&](int x, int l) {
        int cnt = 0;
        for (int y : g.line_points(l)) {
            if (y == x) return;  // incident, skip
            if (g.collinear(x, y)) ++cnt;
        }
        checked.fetch_add(1, std::memory_order_relaxed);
        if (cnt != 1) {
            ok.store(false);
            std::lock_guard<std::mutex> lk(wmx);
            if ((int)rep.witnesses.size() < kWitnessCap)
                rep.witnesses.push_back({"axiom (b) count " + std::to_string(cnt), x, l});
        }
    };
    if (exhaustive) {
        parallel_chunks(g.points(), [&](int64_t b, int64_t e) {
            for (int x = (int)b; x < (int)e; ++x)
                for (int l = 0; l < g.lines(); ++l) check_pair(x, l);
        });
    } else {
        std::mt19937_64 rng(opts.seed);
        for (uint64_t i = 0; i < opts.sample_pairs; ++i)
            check_pair((int)(rng() % g.points()), (int)(rng() % g.lines()));
    }
    rep.pairs_checked = checked.load();
    if (!ok.load()) return rep;
    rep.is_gq = true;
    rep.thick = rep.s >= 2 && rep.t >= 2;
    return rep;
}

std::vector<int> perp(const Geometry& g, std::span<const int> pts, PerpMode mode) {
    require(!pts.empty(), "perp of empty set");
    auto perp_of = [&](std::span<const int> set) {
        Bitset acc(g.points());
        g.collinearity_row(set[0], acc);
        Bitset row(g.points());
        for (size_t i = 1; i < set.size(); ++i) {
            g.collinearity_row(set[i], row);
            acc.and_with(row);
        }
        return acc;
    };
    if (mode == PerpMode::PERP) return perp_of(pts).to_vector();
    if (mode == PerpMode::DOUBLE_PERP) {
        auto first = perp_of(pts).to_vector();
        if (first.empty()) {
            std::vector<int> all(g.points());
            for (int i = 0; i < g.points(); ++i) all[i] = i;
            return all;  // empty intersection: perp of empty set is everything
        }
        return perp_of(first).to_vector();
    }
    // CL: { w : w_perp meets {u,v}^perp-perp }
    require(pts.size() == 2 && pts[0] != pts[1], "cl(u,v) needs two distinct points");
    auto hyperbolic = perp(g, pts, PerpMode::DOUBLE_PERP);
    Bitset span(g.points());
    for (int x : hyperbolic) span.set(x);
    std::vector<int> out;
    Bitset row(g.points());
    for (int w = 0; w < g.points(); ++w) {
        g.collinearity_row(w, row);
        row.and_with(span);
        if (row.count() > 0) out.push_back(w);
    }
    return out;
}

std::pair<std::vector<int>, std::vector<int>> line_regulus(const Geometry& g, int U, int V) {
    require(U != V, "line regulus needs distinct lines");
    Bitset onU(g.points()), onV(g.points());
    for (int p : g.line_points(U)) onU.set(p);
    for (int p : g.line_points(V)) {
        require(!onU.test(p), "line regulus needs non-concurrent lines");
        onV.set(p);
    }
    auto meets = [&](int w, const Bitset& set) {
        for (int p : g.line_points(w))
            if (set.test(p)) return true;
        return false;
    };
    // candidates: lines through points of U
    std::vector<int> both;
    std::unordered_set<int> seen;
    for (int p : g.line_points(U))
        for (int w : g.point_lines(p))
            if (w != U && meets(w, onV) && seen.insert(w).second) both.push_back(w);
    std::sort(both.begin(), both.end());
    // perp-perp: lines meeting every member of `both`
    std::vector<Bitset> masks;
    masks.reserve(both.size());
    for (int w : both) {
        Bitset m(g.points());
        for (int p : g.line_points(w)) m.set(p);
        masks.push_back(std::move(m));
    }
    std::vector<int> span;
    if (!both.empty()) {
        std::unordered_set<int> cand;
        for (int p : g.line_points(both[0]))
            for (int w : g.point_lines(p))
                if (w != both[0]) cand.insert(w);
        for (int w : cand) {
            bool all = true;
            for (auto& m : masks)
                if (!meets(w, m)) {
                    all = false;
                    break;
                }
            if (all) span.push_back(w);
        }
        std::sort(span.begin(), span.end());
    }
    return {both, span};
}

Subgeometry hull(const Geometry& g, std::span<const int> seed) {
    require(!seed.empty(), "hull of empty seed");
    Bitset in(g.points());
    std::vector<int> queue;
    for (int p : seed)
        if (!in.test(p)) {
            in.set(p);
            queue.push_back(p);
        }
    Bitset line_done(g.lines());
    size_t qi = 0;
    auto add_line = [&](int l) {
        if (line_done.test(l)) return;
        line_done.set(l);
        for (int r : g.line_points(l))
            if (!in.test(r)) {
                in.set(r);
                queue.push_back(r);
            }
    };
    while (qi < queue.size()) {
        int p = queue[qi++];
        for (int l : g.point_lines(p)) {
            if (line_done.test(l)) continue;
            int cnt = 0;
            for (int r : g.line_points(l))
                if (in.test(r) && ++cnt >= 2) break;
            if (cnt >= 2) add_line(l);
        }
    }
    return subgeometry_from_points(g, in.to_vector());
}

Subgeometry subgeometry_from_points(const Geometry& g, std::vector<int> pts) {
    Subgeometry sub;
    sub.parent = &g;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    sub.points = std::move(pts);
    Bitset in(g.points());
    for (int p : sub.points) in.set(p);
    Bitset seen(g.lines());
    for (int p : sub.points)
        for (int l : g.point_lines(p)) {
            if (seen.test(l)) continue;
            seen.set(l);
            bool all = true;
            for (int r : g.line_points(l))
                if (!in.test(r)) {
                    all = false;
                    break;
                }
            if (all) sub.lines.push_back(l);
        }
    std::sort(sub.lines.begin(), sub.lines.end());
    sub.full = true;  // lines kept only when fully inside
    return sub;
}

InducedGeometry induce(const Subgeometry& sub) {
    const Geometry& g = *sub.parent;
    InducedGeometry out;
    out.pt_to_parent = sub.points;
    out.line_to_parent = sub.lines;
    out.pt_from_parent.assign(g.points(), -1);
    out.line_from_parent.assign(g.lines(), -1);
    for (size_t i = 0; i < sub.points.size(); ++i) out.pt_from_parent[sub.points[i]] = (int)i;
    for (size_t i = 0; i < sub.lines.size(); ++i) out.line_from_parent[sub.lines[i]] = (int)i;
    std::vector<std::vector<int>> lines(sub.lines.size());
    for (size_t i = 0; i < sub.lines.size(); ++i)
        for (int p : g.line_points(sub.lines[i])) lines[i].push_back(out.pt_from_parent[p]);
    out.geom = build_geometry(std::move(lines), (int)sub.points.size(), g.model_tag() + "/sub");
    return out;
}

HyperplaneReport classify_hyperplane(const Geometry& g, const Subgeometry& h) {
    HyperplaneReport rep;
    Bitset in(g.points());
    for (int p : h.points) in.set(p);
    Bitset lin(g.lines());
    for (int l : h.lines) lin.set(l);
    for (int l = 0; l < g.lines(); ++l) {
        int cnt = 0;
        for (int p : g.line_points(l))
            if (in.test(p)) ++cnt;
        bool inside = cnt == (int)g.line_points(l).size();
        if (inside != lin.test(l) || (!inside && cnt != 1)) {
            if ((int)rep.witnesses.size() < kWitnessCap)
                rep.witnesses.push_back({"line meets hyperplane in " + std::to_string(cnt), l, -1});
            rep.type = HyperplaneType::NOT_HYPERPLANE;
            if (rep.witnesses.size() >= kWitnessCap) return rep;
        }
    }
    if (!rep.witnesses.empty()) return rep;
    if (h.lines.empty()) {
        rep.type = HyperplaneType::A;
        return rep;
    }
    // type B: all lines concurrent at x and points = x^perp
    int x = -1;
    {
        const auto& l0 = g.line_points(h.lines[0]);
        for (int cand : l0) {
            bool on_all = true;
            for (int l : h.lines)
                if (!g.incident(cand, l)) {
                    on_all = false;
                    break;
                }
            if (on_all) {
                x = cand;
                break;
            }
        }
    }
    if (x >= 0) {
        std::vector<int> xp = perp(g, std::span<const int>(&x, 1), PerpMode::PERP);
        if (xp == h.points) {
            rep.type = HyperplaneType::B;
            rep.center = x;
            return rep;
        }
    }
    rep.type = HyperplaneType::C;
    // thin when some parameter of the subGQ is 1
    int sub_s = (int)g.line_points(h.lines[0]).size() - 1;
    int sub_t = -1;
    {
        Bitset in_l(g.lines());
        for (int l : h.lines) in_l.set(l);
        for (int l : g.point_lines(h.points[0]))
            if (in_l.test(l)) ++sub_t;
    }
    rep.thin = sub_s < 2 || sub_t < 2;
    return rep;
}

MorphReport validate_morphism(const Morphism& m) {
    MorphReport rep;
    const Geometry& A = *m.src;
    const Geometry& B = *m.dst;
    require((int)m.pmap.size() == A.points() && (int)m.lmap.size() == A.lines(),
            "morphism maps must be total");
    auto witness = [&](const std::string& w, long long a, long long b) {
        if ((int)rep.witnesses.size() < kWitnessCap) rep.witnesses.push_back({w, a, b});
    };
    bool inc_ok = true;
    for (int l = 0; l < A.lines() && (int)rep.witnesses.size() < kWitnessCap; ++l) {
        int lb = m.lmap[l];
        if (lb < 0 || lb >= B.lines()) {
            witness("line image out of range", l, lb);
            inc_ok = false;
            continue;
        }
        for (int p : A.line_points(l)) {
            int pb = m.pmap[p];
            if (pb < 0 || pb >= B.points() || !B.incident(pb, lb)) {
                witness("incidence not preserved", p, l);
                inc_ok = false;
            }
        }
    }
    rep.is_morphism = inc_ok;
    if (!inc_ok) return rep;
    // local bijectivity
    bool local = true;
    for (int p = 0; p < A.points() && local; ++p) {
        std::vector<int> imgs;
        for (int l : A.point_lines(p)) imgs.push_back(m.lmap[l]);
        std::sort(imgs.begin(), imgs.end());
        bool dup = std::adjacent_find(imgs.begin(), imgs.end()) != imgs.end();
        if (dup || imgs.size() != B.point_lines(m.pmap[p]).size()) {
            witness("pencil not bijective", p, -1);
            local = false;
        }
    }
    for (int l = 0; l < A.lines() && local; ++l) {
        std::vector<int> imgs;
        for (int p : A.line_points(l)) imgs.push_back(m.pmap[p]);
        std::sort(imgs.begin(), imgs.end());
        bool dup = std::adjacent_find(imgs.begin(), imgs.end()) != imgs.end();
        if (dup || imgs.size() != B.line_points(m.lmap[l]).size()) {
            witness("point row not bijective", l, -1);
            local = false;
        }
    }
    rep.is_cover = local;
    // fibers
    std::vector<int> pf(B.points(), 0), lf(B.lines(), 0);
    for (int p = 0; p < A.points(); ++p) ++pf[m.pmap[p]];
    for (int l = 0; l < A.lines(); ++l) ++lf[m.lmap[l]];
    auto fiber_const = [](const std::vector<int>& f, int& val) {
        int v = -1;
        for (int x : f) {
            if (x == 0) continue;
            if (v < 0)
                v = x;
            else if (v != x)
                return false;
        }
        val = v < 0 ? 0 : v;
        return true;
    };
    int pv = 0, lv = 0;
    rep.surjective_points = std::all_of(pf.begin(), pf.end(), [](int x) { return x > 0; });
    rep.surjective_lines = std::all_of(lf.begin(), lf.end(), [](int x) { return x > 0; });
    rep.point_fibers_constant = fiber_const(pf, pv) && rep.surjective_points;
    rep.line_fibers_constant = fiber_const(lf, lv) && rep.surjective_lines;
    if (rep.point_fibers_constant && rep.line_fibers_constant && pv == lv) rep.theta = pv;
    return rep;
}

Morphism compose(const Morphism& f, const Morphism& g) {
    require(f.dst == g.src, "morphisms not composable");
    Morphism h;
    h.src = f.src;
    h.dst = g.dst;
    h.pmap.resize(f.pmap.size());
    h.lmap.resize(f.lmap.size());
    for (size_t i = 0; i < f.pmap.size(); ++i) h.pmap[i] = g.pmap[f.pmap[i]];
    for (size_t i = 0; i < f.lmap.size(); ++i) h.lmap[i] = g.lmap[f.lmap[i]];
    return h;
}

SpgReport validate_spg(const Geometry& g) {
    SpgReport rep;
    auto witness = [&](const std::string& w, long long a, long long b) {
        if ((int)rep.witnesses.size() < kWitnessCap) rep.witnesses.push_back({w, a, b});
    };
    if (g.points() == 0 || g.lines() == 0) {
        witness("empty geometry", -1, -1);
        return rep;
    }
    size_t spts = g.line_points(0).size();
    size_t tlines = g.point_lines(0).size();
    for (int l = 0; l < g.lines(); ++l)
        if (g.line_points(l).size() != spts) {
            witness("line size varies", l, -1);
            return rep;
        }
    for (int p = 0; p < g.points(); ++p)
        if (g.point_lines(p).size() != tlines) {
            witness("point degree varies", p, -1);
            return rep;
        }
    rep.s = (int)spts - 1;
    rep.t = (int)tlines - 1;
    if (rep.s < 1 || rep.t < 1) {
        witness("parameters below SPG minimum", rep.s, rep.t);
        return rep;
    }
    // two lines share at most one point: follows from build_geometry's pair check
    // axiom (iii): 0 or alpha points of L collinear with x, over non-incident (x, L)
    std::atomic<int> alpha{-2};  // -2 unset, -1 conflict
    std::mutex wmx;
    parallel_chunks(g.lines(), [&](int64_t b, int64_t e) {
        for (int l = (int)b; l < (int)e; ++l) {
            Bitset online(g.points());
            for (int p : g.line_points(l)) online.set(p);
            for (int x = 0; x < g.points(); ++x) {
                if (online.test(x)) continue;
                int c = 0;
                for (int p : g.line_points(l))
                    if (g.collinear(x, p)) ++c;
                if (c == 0) continue;
                int cur = alpha.load();
                while (cur == -2 && !alpha.compare_exchange_weak(cur, c)) {
                }
                if (cur >= 0 && cur != c) {
                    alpha.store(-1);
                    std::lock_guard<std::mutex> lk(wmx);
                    witness("axiom (iii): " + std::to_string(c) + " vs " + std::to_string(cur), x, l);
                }
            }
        }
    });
    if (alpha.load() == -1) return rep;
    rep.alpha = std::max(alpha.load(), 0);
    // axiom (iv): constant mu > 0 over non-collinear pairs
    std::atomic<int> mu{-2};
    std::atomic<bool> zero_pair{false}, nonconst{false};
    parallel_chunks(g.points(), [&](int64_t b, int64_t e) {
        for (int x = (int)b; x < (int)e; ++x)
            for (int y = x + 1; y < g.points(); ++y) {
                if (g.collinear(x, y)) continue;
                int c = g.collinearity().and_popcount(x, y);
                if (c == 0) {
                    zero_pair.store(true);
                    std::lock_guard<std::mutex> lk(wmx);
                    witness("axiom (iv): no common neighbour", x, y);
                    continue;
                }
                int cur = mu.load();
                while (cur == -2 && !mu.compare_exchange_weak(cur, c)) {
                }
                if (cur >= 0 && cur != c) {
                    nonconst.store(true);
                    std::lock_guard<std::mutex> lk(wmx);
                    witness("axiom (iv): mu " + std::to_string(c) + " vs " + std::to_string(cur), x, y);
                }
            }
    });
    rep.zero_mu_pair = zero_pair.load();
    rep.nonconstant_mu = nonconst.load();
    if (rep.zero_mu_pair || rep.nonconstant_mu) return rep;
    rep.mu = std::max(mu.load(), 0);
    if (rep.alpha < 1 || rep.mu < 1) {
        witness("degenerate alpha or mu", rep.alpha, rep.mu);
        return rep;
    }
    rep.is_spg = true;
    rep.is_partial_quadrangle = rep.alpha == 1;
    rep.is_partial_geometry = rep.mu == (rep.t + 1) * rep.alpha;
    rep.is_gq = rep.is_partial_quadrangle && rep.is_partial_geometry;
    return rep;
}

}  // namespace gqe
