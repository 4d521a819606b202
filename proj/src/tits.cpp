#include "gqe/tits.hpp"

#include <set>

namespace gqe {

Vec4 PG3::normalize(Vec4 v) const {
    const Field& f = *field;
    for (int i = 0; i < 4; ++i)
        if (v[i] != 0) {
            int s = f.inv(v[i]);
            for (int j = 0; j < 4; ++j) v[j] = f.mul(v[j], s);
            return v;
        }
    fail("zero vector has no projective class");
}

uint64_t PG3::key(const Vec4& v) const {
    uint64_t k = 0;
    for (int i = 0; i < 4; ++i) k = k * (uint64_t)field->q() + (uint64_t)v[i];
    return k;
}

int PG3::point(const Vec4& v) const {
    auto it = pt_index.find(key(normalize(v)));
    return it == pt_index.end() ? -1 : it->second;
}

int PG3::plane(const Vec4& dual) const {
    auto it = plane_index.find(key(normalize(dual)));
    return it == plane_index.end() ? -1 : it->second;
}

bool PG3::on_plane(int pt, int pl) const {
    const Field& f = *field;
    int s = 0;
    for (int i = 0; i < 4; ++i) s = f.add(s, f.mul(pts[pt][i], planes[pl][i]));
    return s == 0;
}

std::vector<int> PG3::line_points(int a, int b) const {
    const Field& f = *field;
    std::vector<int> out{a};
    for (int lam = 0; lam < f.q(); ++lam) {
        Vec4 v{};
        for (int i = 0; i < 4; ++i) v[i] = f.add(pts[b][i], f.mul(lam, pts[a][i]));
        out.push_back(point(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

int PG3::third_plane_coord(int a, int b, int c) const {
    for (int pl = 0; pl < (int)planes.size(); ++pl)
        if (on_plane(a, pl) && on_plane(b, pl) && on_plane(c, pl)) return pl;
    return -1;
}

int PG3::line_meet_plane(int a, int b, int pl) const {
    auto lp = line_points(a, b);
    int hit = -1;
    int cnt = 0;
    for (int p : lp)
        if (on_plane(p, pl)) {
            hit = p;
            ++cnt;
        }
    if (cnt > 1) return -1;  // line inside the plane
    return hit;
}

PG3 build_pg3(const FieldPtr& f) {
    PG3 pg;
    pg.field = f;
    int q = f->q();
    auto enumerate = [&](auto&& cb) {
        Vec4 v{};
        for (int lead = 0; lead < 4; ++lead) {
            long long total = 1;
            for (int i = 0; i < 3 - lead; ++i) total *= q;
            for (long long idx = 0; idx < total; ++idx) {
                v.fill(0);
                v[lead] = 1;
                long long t = idx;
                for (int i = lead + 1; i < 4; ++i) {
                    v[i] = (int)(t % q);
                    t /= q;
                }
                cb(v);
            }
        }
    };
    enumerate([&](const Vec4& v) {
        pg.pt_index[pg.key(v)] = (int)pg.pts.size();
        pg.pts.push_back(v);
    });
    enumerate([&](const Vec4& v) {
        pg.plane_index[pg.key(v)] = (int)pg.planes.size();
        pg.planes.push_back(v);
    });
    return pg;
}

std::vector<Vec4> standard_conic(const FieldPtr& f) {
    std::vector<Vec4> out;
    for (int t = 0; t < f->q(); ++t) out.push_back(Vec4{0, 1, t, f->mul(t, t)});
    out.push_back(Vec4{0, 0, 0, 1});
    return out;
}

int TitsModel::line_of_pg_pair(int a, int b) const {
    auto lp = pg.line_points(a, b);
    auto it = line_key_index.find(hash_ids(lp));
    return it == line_key_index.end() ? -1 : it->second;
}

TitsModel build_tits_t2(const FieldPtr& f, const std::vector<Vec4>& oval_coords) {
    TitsModel tm;
    tm.pg = build_pg3(f);
    PG3& pg = tm.pg;
    int q = f->q();
    require((int)oval_coords.size() == q + 1, "oval must have q+1 points");
    for (const auto& v : oval_coords) {
        int id = pg.point(v);
        require(id >= 0, "oval coordinate is not a point");
        tm.oval.push_back(id);
    }
    {
        std::set<int> dd(tm.oval.begin(), tm.oval.end());
        require((int)dd.size() == q + 1, "oval points not distinct");
    }
    // common plane
    tm.delta = pg.third_plane_coord(tm.oval[0], tm.oval[1], tm.oval[2]);
    require(tm.delta >= 0, "first three oval points are collinear");
    for (int p : tm.oval) require(pg.on_plane(p, tm.delta), "oval points are not coplanar");
    // no three collinear
    for (size_t i = 0; i < tm.oval.size(); ++i)
        for (size_t j = i + 1; j < tm.oval.size(); ++j) {
            auto lp = pg.line_points(tm.oval[i], tm.oval[j]);
            int cnt = 0;
            for (int p : lp)
                if (std::find(tm.oval.begin(), tm.oval.end(), p) != tm.oval.end()) ++cnt;
            require(cnt == 2, "three oval points are collinear (not an oval)");
        }
    // tangent line per oval point: the unique line of delta meeting the oval once
    std::vector<std::vector<int>> tangents(tm.oval.size());
    for (size_t i = 0; i < tm.oval.size(); ++i) {
        for (int x = 0; x < pg.npoints(); ++x) {
            if (x == tm.oval[i] || !pg.on_plane(x, tm.delta)) continue;
            auto lp = pg.line_points(tm.oval[i], x);
            int cnt = 0;
            for (int p : lp)
                if (std::find(tm.oval.begin(), tm.oval.end(), p) != tm.oval.end()) ++cnt;
            if (cnt == 1) {
                tangents[i] = lp;
                break;
            }
        }
        require(!tangents[i].empty(), "no tangent line found (q even oval?)");
    }
    // GQ points
    tm.affine_of_pg.assign(pg.npoints(), -1);
    for (int x = 0; x < pg.npoints(); ++x)
        if (!pg.on_plane(x, tm.delta)) {
            tm.affine_of_pg[x] = (int)tm.gq_pt_affine.size();
            tm.gq_pt_affine.push_back(x);
        }
    int nA = (int)tm.gq_pt_affine.size();
    tm.gqpt_of_plane.assign(pg.planes.size(), -1);
    for (size_t i = 0; i < tm.oval.size(); ++i) {
        // planes containing the tangent line, other than delta
        const auto& t = tangents[i];
        for (int pl = 0; pl < (int)pg.planes.size(); ++pl) {
            if (pl == tm.delta) continue;
            bool contains = pg.on_plane(t[0], pl) && pg.on_plane(t[1], pl);
            if (contains) {
                tm.gqpt_of_plane[pl] = nA + (int)tm.gq_pt_plane.size();
                tm.gq_pt_plane.push_back(pl);
            }
        }
    }
    tm.infty = nA + (int)tm.gq_pt_plane.size();
    int P = tm.infty + 1;
    // GQ lines of type (a): pg lines through an oval point, not in delta
    std::vector<std::vector<int>> gq_lines;
    for (size_t i = 0; i < tm.oval.size(); ++i)
        for (int x = 0; x < pg.npoints(); ++x) {
            if (pg.on_plane(x, tm.delta)) continue;
            auto lp = pg.line_points(tm.oval[i], x);
            uint64_t k = hash_ids(lp);
            if (tm.line_key_index.count(k)) continue;
            tm.line_key_index[k] = (int)tm.gq_line_pgpts.size();
            tm.gq_line_pgpts.push_back(lp);
            // incident GQ points: affine points of the line + its tangent plane
            std::vector<int> inc;
            for (int p : lp)
                if (tm.affine_of_pg[p] >= 0) inc.push_back(tm.affine_of_pg[p]);
            int tpl = pg.third_plane_coord(tangents[i][0], tangents[i][1], x);
            require(tpl >= 0 && tm.gqpt_of_plane[tpl] >= 0, "tangent plane of a line not found");
            inc.push_back(tm.gqpt_of_plane[tpl]);
            gq_lines.push_back(std::move(inc));
        }
    tm.first_oval_line = (int)gq_lines.size();
    // type (b): oval points as lines
    for (size_t i = 0; i < tm.oval.size(); ++i) {
        std::vector<int> inc{tm.infty};
        for (size_t pl = 0; pl < tm.gq_pt_plane.size(); ++pl) {
            int plane = tm.gq_pt_plane[pl];
            if (pg.on_plane(tangents[i][0], plane) && pg.on_plane(tangents[i][1], plane))
                inc.push_back(nA + (int)pl);
        }
        gq_lines.push_back(std::move(inc));
    }
    tm.geom = build_geometry(std::move(gq_lines), P, "tits");
    return tm;
}

CounterexampleResult build_counterexample_morphism() {
    auto f = Field::make(3, 1);
    CounterexampleResult out;
    out.model = build_tits_t2(f, standard_conic(f));
    TitsModel& tm = out.model;
    PG3& pg = tm.pg;
    // conic labels: a1, a2 span the secant in zeta; a3, a4 get collapsed
    int a1 = tm.oval[0];   // (0,1,0,0)
    int a2 = tm.oval[3];   // (0,0,0,1)
    int a3 = tm.oval[1];   // (0,1,1,1)
    int a4 = tm.oval[2];   // (0,1,2,1)
    // r = a1a3 n a2a4
    int r = -1;
    {
        auto l13 = pg.line_points(a1, a3);
        auto l24 = pg.line_points(a2, a4);
        for (int p : l13)
            if (std::find(l24.begin(), l24.end(), p) != l24.end()) r = p;
    }
    require(r >= 0, "diagonal point not found");
    // zeta: first plane through a1, a2 distinct from delta
    int zeta = -1;
    for (int pl = 0; pl < (int)pg.planes.size(); ++pl)
        if (pl != tm.delta && pg.on_plane(a1, pl) && pg.on_plane(a2, pl)) {
            zeta = pl;
            break;
        }
    require(zeta >= 0, "no plane through a1, a2");
    // tangent line points per oval id
    auto tangent_of = [&](int a) {
        for (int x = 0; x < pg.npoints(); ++x) {
            if (x == a || !pg.on_plane(x, tm.delta)) continue;
            auto lp = pg.line_points(a, x);
            int cnt = 0;
            for (int p : lp)
                if (std::find(tm.oval.begin(), tm.oval.end(), p) != tm.oval.end()) ++cnt;
            if (cnt == 1) return lp;
        }
        fail("tangent not found");
    };
    auto t1 = tangent_of(a1), t2 = tangent_of(a2), t3 = tangent_of(a3), t4 = tangent_of(a4);

    const Geometry& g = tm.geom;
    // the thin subGQ G: affine points of zeta, tangent planes containing t1 or
    // t2, and the point at infinity
    std::vector<int> Gpts;
    for (int x = 0; x < pg.npoints(); ++x)
        if (tm.affine_of_pg[x] >= 0 && pg.on_plane(x, zeta)) Gpts.push_back(tm.affine_of_pg[x]);
    for (size_t i = 0; i < tm.gq_pt_plane.size(); ++i) {
        int pl = tm.gq_pt_plane[i];
        bool c1 = pg.on_plane(t1[0], pl) && pg.on_plane(t1[1], pl);
        bool c2 = pg.on_plane(t2[0], pl) && pg.on_plane(t2[1], pl);
        if (c1 || c2) Gpts.push_back((int)tm.gq_pt_affine.size() + (int)i);
    }
    Gpts.push_back(tm.infty);
    out.thin_subgq = subgeometry_from_points(g, Gpts);

    // phi per the note's case analysis, extended by the same central
    // projection to the lines through a1, a2 that leave zeta
    Morphism phi;
    phi.src = &g;
    phi.dst = &g;
    phi.pmap.assign(g.points(), -1);
    phi.lmap.assign(g.lines(), -1);
    auto project_pt = [&](int m) {  // rm n zeta
        int w = pg.line_meet_plane(r, m, zeta);
        require(w >= 0, "projection undefined");
        return w;
    };
    // points
    for (int x = 0; x < pg.npoints(); ++x) {
        int gid = tm.affine_of_pg[x];
        if (gid < 0) continue;
        if (pg.on_plane(x, zeta))
            phi.pmap[gid] = gid;  // element of G
        else {
            int w = project_pt(x);
            require(tm.affine_of_pg[w] >= 0, "projection left the affine part");
            phi.pmap[gid] = tm.affine_of_pg[w];
        }
    }
    for (size_t i = 0; i < tm.gq_pt_plane.size(); ++i) {
        int gid = (int)tm.gq_pt_affine.size() + (int)i;
        int pl = tm.gq_pt_plane[i];
        bool c1 = pg.on_plane(t1[0], pl) && pg.on_plane(t1[1], pl);
        bool c2 = pg.on_plane(t2[0], pl) && pg.on_plane(t2[1], pl);
        if (c1 || c2) {
            phi.pmap[gid] = gid;  // element of G
            continue;
        }
        bool c3 = pg.on_plane(t3[0], pl) && pg.on_plane(t3[1], pl);
        // "plane t_target phi(ell)" for ell an affine point of the plane
        const auto& ttgt = c3 ? t1 : t2;
        int ell = -1;
        for (int x = 0; x < pg.npoints() && ell < 0; ++x)
            if (tm.affine_of_pg[x] >= 0 && pg.on_plane(x, pl)) ell = x;
        int img_pl = pg.third_plane_coord(ttgt[0], ttgt[1], project_pt(ell));
        require(img_pl >= 0 && tm.gqpt_of_plane[img_pl] >= 0, "image plane is not a GQ point");
        phi.pmap[gid] = tm.gqpt_of_plane[img_pl];
    }
    phi.pmap[tm.infty] = tm.infty;
    // lines of type (a)
    for (int l = 0; l < tm.first_oval_line; ++l) {
        const auto& pgpts = tm.gq_line_pgpts[l];
        // the oval point of the line
        int apt = -1;
        for (int p : pgpts)
            if (std::find(tm.oval.begin(), tm.oval.end(), p) != tm.oval.end()) apt = p;
        bool in_zeta = true;
        for (int p : pgpts)
            if (!pg.on_plane(p, zeta)) in_zeta = false;
        if (in_zeta) {
            phi.lmap[l] = l;  // line of G
            continue;
        }
        // rR n zeta: project two non-r points of R and join
        int m1 = -1, m2 = -1;
        for (int p : pgpts) {
            if (p == r) continue;
            if (m1 < 0)
                m1 = p;
            else if (m2 < 0 && project_pt(p) != project_pt(m1))
                m2 = p;
        }
        require(m2 >= 0, "degenerate line projection");
        int img = tm.line_of_pg_pair(project_pt(m1), project_pt(m2));
        require(img >= 0, "projected line is not a GQ line");
        phi.lmap[l] = img;
        (void)apt;
    }
    // lines of type (b): a1, a2 fixed; a3 -> a1, a4 -> a2
    auto oval_line_id = [&](int a) {
        for (size_t i = 0; i < tm.oval.size(); ++i)
            if (tm.oval[i] == a) return tm.first_oval_line + (int)i;
        fail("oval line not found");
    };
    phi.lmap[oval_line_id(a1)] = oval_line_id(a1);
    phi.lmap[oval_line_id(a2)] = oval_line_id(a2);
    phi.lmap[oval_line_id(a3)] = oval_line_id(a1);
    phi.lmap[oval_line_id(a4)] = oval_line_id(a2);
    out.phi = std::move(phi);
    return out;
}

GridRetractionProbe grid_retraction_probe(const Geometry& g, const Subgeometry& grid) {
    GridRetractionProbe probe;
    Bitset in(g.points());
    for (int p : grid.points) in.set(p);
    probe.traces_pairwise_noncollinear = true;
    for (int x = 0; x < g.points(); ++x) {
        if (in.test(x)) continue;
        ++probe.exterior_points;
        std::vector<int> traces;
        for (int l : g.point_lines(x)) {
            int tr = -1, cnt = 0;
            for (int p : g.line_points(l))
                if (in.test(p)) {
                    tr = p;
                    ++cnt;
                }
            if (cnt != 1) {
                probe.traces_pairwise_noncollinear = false;
                continue;
            }
            traces.push_back(tr);
        }
        for (size_t i = 0; i < traces.size(); ++i)
            for (size_t j = i + 1; j < traces.size(); ++j)
                if (g.collinear(traces[i], traces[j])) probe.traces_pairwise_noncollinear = false;
    }
    // grid-internal: can any grid point cover a pairwise non-collinear
    // quadruple of grid points?  Enumerate all such quadruples.
    int deg = (int)g.point_lines(grid.points.empty() ? 0 : 0).size();
    (void)deg;
    const auto& gp = grid.points;
    bool uncoverable = true;
    int count = 0;
    int n = (int)gp.size();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (g.collinear(gp[a], gp[b])) continue;
            for (int c = b + 1; c < n; ++c) {
                if (g.collinear(gp[a], gp[c]) || g.collinear(gp[b], gp[c])) continue;
                for (int d = c + 1; d < n; ++d) {
                    if (g.collinear(gp[a], gp[d]) || g.collinear(gp[b], gp[d]) ||
                        g.collinear(gp[c], gp[d]))
                        continue;
                    ++count;
                    for (int z : gp) {
                        bool covers = true;
                        for (int w : {gp[a], gp[b], gp[c], gp[d]})
                            if (z != w && !g.collinear(z, w)) {
                                covers = false;
                                break;
                            }
                        if (covers) uncoverable = false;
                    }
                }
            }
        }
    probe.diagonals_checked = count;
    probe.every_diagonal_uncoverable = uncoverable;
    return probe;
}

}  // namespace gqe
