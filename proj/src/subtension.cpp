#include "gqe/subtension.hpp"

#include <mutex>
#include <unordered_map>

namespace gqe {

namespace {

Bitset point_mask(const Geometry& g, std::span<const int> pts) {
    Bitset b(g.points());
    for (int p : pts) b.set(p);
    return b;
}

}  // namespace

CensusResult enumerate_order_q_subgqs(const CosetModel& cm) {
    const Geometry& g = cm.geom;
    int q = cm.q;
    int infty = cm.line_infty();
    int sub_points = (1 + q) * (1 + q * q);
    CensusResult out;

    // Grids on [infty] are in bijection with pairs (U through symbol 0,
    // V through symbol 1): each grid has one second-ruling line per symbol.
    int s0 = cm.point_symbol(0), s1 = cm.point_symbol(1);
    std::vector<int> U0, V1;
    for (int l : g.point_lines(s0))
        if (l != infty) U0.push_back(l);
    for (int l : g.point_lines(s1))
        if (l != infty) V1.push_back(l);

    struct Grid {
        std::vector<int> pts;
    };
    std::vector<Grid> grids;
    grids.reserve(U0.size() * V1.size());
    for (int U : U0)
        for (int V : V1) {
            // ruling through [infty]: for each point u of U, the line joining
            // u to its V-neighbour; those q+1 lines carry the grid points
            Grid gr;
            Bitset pts(g.points());
            bool ok = true;
            for (int u : g.line_points(U)) {
                int z = -1;
                for (int w : g.line_points(V))
                    if (g.collinear(u, w)) {
                        z = w;
                        break;
                    }
                if (z < 0) {
                    ok = false;
                    break;
                }
                int l = u == z ? -1 : g.line_through(u, z);
                if (l < 0) {
                    ok = false;
                    break;
                }
                for (int p : g.line_points(l)) pts.set(p);
            }
            require(ok, "grid construction failed (line meeting [infty] not regular?)");
            gr.pts = pts.to_vector();
            require((int)gr.pts.size() == (q + 1) * (q + 1), "grid has wrong point count");
            grids.push_back(std::move(gr));
        }
    out.grid_count = (int)grids.size();

    // hull each grid with one exterior point at a time until the point set is
    // exhausted; dedupe subGQ candidates globally
    std::mutex mx;
    std::unordered_map<uint64_t, int> seen;
    std::atomic<int> escaped{0};
    parallel_chunks((int64_t)grids.size(), [&](int64_t b, int64_t e) {
        std::vector<int> seed;
        for (int64_t gi = b; gi < e; ++gi) {
            Bitset covered = point_mask(g, grids[gi].pts);
            for (int x = 0; x < g.points(); ++x) {
                if (covered.test(x)) continue;
                seed = grids[gi].pts;
                seed.push_back(x);
                Subgeometry h = hull(g, seed);
                if ((int)h.points.size() == g.points()) {
                    escaped.fetch_add(1);
                    covered.set(x);
                    continue;
                }
                require((int)h.points.size() == sub_points,
                        "hull closed to unexpected size " + std::to_string(h.points.size()));
                for (int p : h.points) covered.set(p);
                uint64_t key = hash_ids(h.points);
                std::lock_guard<std::mutex> lk(mx);
                if (!seen.count(key)) {
                    seen[key] = (int)out.subgqs.size();
                    SubGqHandle sh;
                    sh.sub = std::move(h);
                    sh.has_infty = sh.sub.has_line(infty);
                    out.subgqs.push_back(std::move(sh));
                }
            }
            require(covered.count() == g.points(), "grid coverage did not partition the points");
        }
    });
    out.escaped_hulls = escaped.load();

    // classify by subtension multiplicity of one sampled ovoid
    parallel_chunks((int64_t)out.subgqs.size(), [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            SubGqHandle& sh = out.subgqs[i];
            int x = 0;
            while (sh.sub.has_point(x)) ++x;
            auto ov = subtended_ovoid(g, sh.sub, x);
            auto subs = subtension_subtenders(g, sh.sub, ov);
            sh.multiplicity = (int)subs.size();
            sh.cls = sh.multiplicity == 2 ? 1 : sh.multiplicity == 1 ? 2 : 0;
        }
    });
    for (const auto& sh : out.subgqs) {
        if (sh.cls == 1) ++out.n_doubly;
        if (sh.cls == 2) ++out.n_simply;
    }
    return out;
}

std::vector<int> subtended_ovoid(const Geometry& g, const Subgeometry& Q, int x) {
    require(!Q.has_point(x), "subtending point lies inside the subquadrangle");
    std::vector<int> ov;
    for (int p : Q.points)
        if (g.collinear(x, p)) ov.push_back(p);
    // validate: exactly one point per line of Q
    Bitset mask = point_mask(g, ov);
    for (int l : Q.lines) {
        int c = 0;
        for (int p : g.line_points(l))
            if (mask.test(p)) ++c;
        require(c == 1, "subtended set is not an ovoid (line count " + std::to_string(c) + ")");
    }
    return ov;
}

std::vector<int> subtension_subtenders(const Geometry& g, const Subgeometry& Q,
                                       const std::vector<int>& ovoid) {
    require(ovoid.size() >= 2, "ovoid too small");
    Bitset qmask = point_mask(g, Q.points);
    Bitset omask = point_mask(g, ovoid);
    // candidates: common perp of two ovoid points, outside Q
    int a = ovoid[0], b = ovoid[1];
    std::vector<int> out;
    Bitset row_a(g.points()), row_b(g.points());
    g.collinearity_row(a, row_a);
    g.collinearity_row(b, row_b);
    row_a.and_with(row_b);
    Bitset tmp(g.points());
    row_a.for_each([&](int y) {
        if (qmask.test(y)) return;
        g.collinearity_row(y, tmp);
        tmp.and_with(qmask);
        if (tmp == omask) out.push_back(y);
    });
    return out;
}

RosetteData rosette(const Geometry& g, const Subgeometry& Q, int L) {
    require(!Q.has_line(L), "rosette line must not belong to the subquadrangle");
    RosetteData out;
    std::vector<int> ext;
    for (int p : g.line_points(L)) {
        if (Q.has_point(p)) {
            require(out.base < 0, "line meets the subquadrangle twice (structure violation)");
            out.base = p;
        } else {
            ext.push_back(p);
        }
    }
    require(out.base >= 0, "line misses the subquadrangle (structure violation)");
    std::map<uint64_t, std::vector<int>> dedup;
    for (int x : ext) {
        auto ov = subtended_ovoid(g, Q, x);
        dedup.emplace(hash_ids(ov), std::move(ov));
    }
    for (auto& [k, v] : dedup) out.ovoids.push_back(std::move(v));
    return out;
}

TranslationCert translation_ovoid_certificate(const CosetModel& cm, const Subgeometry& Q, int e) {
    const Geometry& g = cm.geom;
    TranslationCert cert;
    cert.e = e;
    cert.ovoid = subtended_ovoid(g, Q, e);
    for (int p : cert.ovoid)
        if (cm.point_info(p).symbol) cert.omega = p;
    require(cert.omega >= 0, "ovoid misses [infty] (is [infty] a line of Q?)");

    auto cands = translation_candidates_fixing(cm, e);
    Bitset qmask = point_mask(g, Q.points);
    // keep the candidates stabilizing Q; record their action on Q's points
    for (const auto& c : cands.cands) {
        std::vector<int> img(Q.points.size());
        bool stab = true;
        for (size_t i = 0; i < Q.points.size() && stab; ++i) {
            int y = trans_apply_point(cm, cands, c, Q.points[i]);
            if (!qmask.test(y)) stab = false;
            img[i] = y;
        }
        if (stab) cert.parent_perms.push_back(std::move(img));
    }
    cert.group_order = (int)cert.parent_perms.size();

    // checks: fixes omega linewise; sharply transitive on ovoid minus omega
    Bitset omask = point_mask(g, cert.ovoid);
    std::unordered_map<int, int> qpos;
    for (size_t i = 0; i < Q.points.size(); ++i) qpos[Q.points[i]] = (int)i;
    cert.fixes_omega_linewise = true;
    for (const auto& perm : cert.parent_perms) {
        if (perm[qpos[cert.omega]] != cert.omega) cert.fixes_omega_linewise = false;
        for (int l : g.point_lines(cert.omega)) {
            if (!Q.has_line(l)) continue;
            Bitset in(g.points()), outb(g.points());
            for (int p : g.line_points(l)) {
                in.set(p);
                outb.set(perm[qpos[p]]);
            }
            if (!(in == outb)) cert.fixes_omega_linewise = false;
        }
    }
    // orbit of the first non-omega ovoid point
    int x0 = cert.ovoid[0] == cert.omega ? cert.ovoid[1] : cert.ovoid[0];
    std::unordered_set<int> orbit;
    bool semiregular = true;
    for (const auto& perm : cert.parent_perms) {
        int y = perm[qpos[x0]];
        if (y == x0) {
            // only the identity may fix x0
            bool is_id = true;
            for (size_t i = 0; i < perm.size(); ++i)
                if (perm[i] != Q.points[i]) is_id = false;
            if (!is_id) semiregular = false;
        }
        orbit.insert(y);
    }
    bool covers = orbit.size() == cert.ovoid.size() - 1;
    for (int y : orbit)
        if (!omask.test(y) || y == cert.omega) covers = false;
    cert.sharply_transitive =
        semiregular && covers && cert.group_order == (int)cert.ovoid.size() - 1;
    return cert;
}

std::vector<GroupElement> lu_group_quadric(const QuadricModel& qm, int U) {
    const Geometry& g = qm.geom;
    std::vector<GroupElement> gens;
    Bitset onU(g.points());
    for (int p : g.line_points(U)) onU.set(p);
    for (int l = 0; l < g.lines(); ++l) {
        bool meets = false;
        for (int p : g.line_points(l))
            if (onU.test(p)) meets = true;
        if (!meets) continue;
        auto syms = line_symmetries_quadric(qm, l);
        // additive basis: lambda = p^i
        for (int i = 0, pw = 1; i < qm.field->h(); ++i, pw *= qm.field->p())
            gens.push_back(syms[pw]);
    }
    return gens;
}

SpecialLineReport special_line_analysis(const QuadricModel& qm, const std::vector<int>& ovoid,
                                        int u) {
    SpecialLineReport rep;
    rep.special_point = u;
    require(std::binary_search(ovoid.begin(), ovoid.end(), u), "special point not on the ovoid");
    const Geometry& g = qm.geom;
    for (int U : g.point_lines(u)) {
        auto gens = lu_group_quadric(qm, U);
        SetOrbit orb = orbit_of_set(g.points(), gens, ovoid, 1u << 24, false);
        rep.per_line.push_back({U, orb.size});
        rep.class_sizes[orb.size]++;
    }
    rep.only_two_sizes = rep.class_sizes.size() == 2;
    if (!rep.class_sizes.empty()) {
        uint64_t small = rep.class_sizes.begin()->first;
        for (auto& [line, sz] : rep.per_line)
            (sz == small ? rep.u1_lines : rep.u2_lines).push_back(line);
        rep.u1_even = rep.u1_lines.size() % 2 == 0;
    }
    return rep;
}

OvoidStabilizer ovoid_stabilizer(const QuadricModel& qm, const GenSet& autq,
                                 const std::vector<int>& ovoid, int special_pt) {
    // generators of the point stabilizer of the special point, then the
    // setwise stabilizer of the ovoid inside it
    std::vector<std::vector<int32_t>> pp;
    for (const auto& g : autq.generators()) pp.push_back(g.p);
    StabChain chain(autq.geometry()->points(), pp, {special_pt});
    std::vector<GroupElement> ugens;
    for (auto& lp : chain.level_generators(1))
        ugens.push_back(make_automorphism(qm.geom, std::move(lp), false));
    GenSet aut_u(&qm.geom, std::move(ugens));
    require(mul_check(aut_u.order(), chain.orbit_size(0)) == autq.order(),
            "point stabilizer order mismatch");
    OvoidStabilizer out;
    out.gens = set_stabilizer_generators(aut_u, ovoid);
    out.order = GenSet(&qm.geom, out.gens).order();
    return out;
}

std::vector<GroupElement> linewise_stabilizer(const Geometry& g, const GenSet& gs, int u, int v,
                                              uint64_t cap) {
    require(!g.collinear(u, v), "linewise stabilizer needs non-collinear points");
    std::vector<int> fix{u, v};
    std::array<int, 2> pair{u, v};
    auto perp_uv = perp(g, pair, PerpMode::PERP);
    fix.insert(fix.end(), perp_uv.begin(), perp_uv.end());
    return gs.pointwise_stabilizer_elements(fix, cap);
}

}  // namespace gqe
