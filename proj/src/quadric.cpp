#include "gqe/quadric.hpp"

#include <set>

namespace gqe {

namespace {

// all normalized projective points of PG(d, q), first nonzero coordinate 1
template <class F>
void enumerate_pg(const Field& f, int d, F&& cb) {
    int n = d + 1;
    Vec6 v{};
    for (int lead = 0; lead < n; ++lead) {
        // coordinates before `lead` are 0, coordinate lead is 1
        int free = n - lead - 1;
        long long total = 1;
        for (int i = 0; i < free; ++i) total *= f.q();
        for (long long idx = 0; idx < total; ++idx) {
            v.fill(0);
            v[lead] = 1;
            long long t = idx;
            for (int i = lead + 1; i < n; ++i) {
                v[i] = (int)(t % f.q());
                t /= f.q();
            }
            cb(v);
        }
    }
}

}  // namespace

int QuadricModel::qform(const Vec6& x) const {
    const Field& f = *field;
    if (pgdim == 4) {
        int r = f.mul(x[0], x[0]);
        r = f.add(r, f.mul(x[1], x[2]));
        r = f.add(r, f.mul(x[3], x[4]));
        return r;
    }
    int n = f.add(f.mul(x[0], x[0]), f.add(f.mul(na, f.mul(x[0], x[1])), f.mul(nb, f.mul(x[1], x[1]))));
    n = f.add(n, f.mul(x[2], x[3]));
    n = f.add(n, f.mul(x[4], x[5]));
    return n;
}

int QuadricModel::bform(const Vec6& x, const Vec6& y) const {
    // polarization: B(x,y) = Q(x+y) - Q(x) - Q(y)
    const Field& f = *field;
    Vec6 s{};
    for (int i = 0; i < ncoords(); ++i) s[i] = f.add(x[i], y[i]);
    return f.sub(f.sub(qform(s), qform(x)), qform(y));
}

Vec6 QuadricModel::normalize(Vec6 x) const {
    const Field& f = *field;
    for (int i = 0; i < ncoords(); ++i) {
        if (x[i] != 0) {
            int s = f.inv(x[i]);
            for (int j = 0; j < ncoords(); ++j) x[j] = f.mul(x[j], s);
            return x;
        }
    }
    fail("zero vector has no projective class");
}

uint64_t QuadricModel::key(const Vec6& x) const {
    uint64_t k = 0;
    for (int i = 0; i < ncoords(); ++i) k = k * (uint64_t)field->q() + (uint64_t)x[i];
    return k;
}

int QuadricModel::point_index(const Vec6& x) const {
    auto it = index_.find(key(normalize(x)));
    return it == index_.end() ? -1 : it->second;
}

GroupElement QuadricModel::apply_matrix(const std::vector<Vec6>& rows, int frob_k) const {
    const Field& f = *field;
    int n = ncoords();
    std::vector<int32_t> pp(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) {
        Vec6 img{};
        for (int r = 0; r < n; ++r) {
            int c = f.frob_k(coords[i][r], frob_k);
            if (c == 0) continue;
            for (int j = 0; j < n; ++j) img[j] = f.add(img[j], f.mul(c, rows[r][j]));
        }
        int id = point_index(img);
        require(id >= 0, "matrix does not preserve the quadric");
        pp[i] = id;
    }
    return make_automorphism(geom, std::move(pp));
}

namespace {

QuadricModel build_quadric(const FieldPtr& f, int pgdim) {
    QuadricModel qm;
    qm.field = f;
    qm.pgdim = pgdim;
    if (pgdim == 5) {
        // deterministic irreducible n(x,y) = x^2 + a xy + b y^2
        bool found = false;
        for (int ar = 0; ar < f->q() && !found; ++ar)
            for (int br = 0; br < f->q() && !found; ++br) {
                int a = f->element_of_rank(ar), b = f->element_of_rank(br);
                bool irred = true;
                for (int t = 0; t < f->q(); ++t)
                    if (f->add(f->mul(t, t), f->add(f->mul(a, t), b)) == 0) {
                        irred = false;
                        break;
                    }
                if (irred) {
                    qm.na = a;
                    qm.nb = b;
                    found = true;
                }
            }
        require(found, "no irreducible binary quadratic found");
    }
    enumerate_pg(*f, pgdim, [&](const Vec6& v) {
        if (qm.qform(v) == 0) {
            qm.index_[qm.key(v)] = (int)qm.coords.size();
            qm.coords.push_back(v);
        }
    });
    // totally singular lines: spans of singular pairs with B = 0
    std::set<std::vector<int>> lineset;
    int P = (int)qm.coords.size();
    for (int i = 0; i < P; ++i)
        for (int j = i + 1; j < P; ++j) {
            if (qm.bform(qm.coords[i], qm.coords[j]) != 0) continue;
            std::vector<int> pts{i, j};
            for (int lam = 1; lam < f->q(); ++lam) {
                Vec6 v{};
                for (int c = 0; c < qm.ncoords(); ++c)
                    v[c] = f->add(qm.coords[i][c], f->mul(lam, qm.coords[j][c]));
                int id = qm.point_index(v);
                require(id >= 0, "span of singular perp pair left the quadric");
                pts.push_back(id);
            }
            std::sort(pts.begin(), pts.end());
            lineset.insert(pts);
        }
    std::vector<std::vector<int>> lines(lineset.begin(), lineset.end());
    qm.line_span.reserve(lines.size());
    for (const auto& lp : lines) qm.line_span.push_back({lp[0], lp[1]});
    qm.geom = build_geometry(std::move(lines), P,
                             pgdim == 4 ? "quadric/parabolic" : "quadric/elliptic");
    return qm;
}

}  // namespace

QuadricModel build_parabolic(const FieldPtr& f) { return build_quadric(f, 4); }
QuadricModel build_elliptic(const FieldPtr& f) { return build_quadric(f, 5); }

namespace {

// Siegel map for singular u, v in u^perp:
// x -> x + B(x,v) u - B(x,u) v - Q(v) B(x,u) u
GroupElement siegel(const QuadricModel& qm, const Vec6& u, const Vec6& v) {
    const Field& f = *qm.field;
    int n = qm.ncoords();
    std::vector<int32_t> pp(qm.coords.size());
    int qv = qm.qform(v);
    for (size_t i = 0; i < qm.coords.size(); ++i) {
        const Vec6& x = qm.coords[i];
        int bxv = qm.bform(x, v), bxu = qm.bform(x, u);
        Vec6 img = x;
        for (int c = 0; c < n; ++c) {
            int t = f.mul(bxv, u[c]);
            t = f.sub(t, f.mul(bxu, v[c]));
            t = f.sub(t, f.mul(qv, f.mul(bxu, u[c])));
            img[c] = f.add(img[c], t);
        }
        int id = qm.point_index(img);
        require(id >= 0, "siegel map left the quadric");
        pp[i] = id;
    }
    return make_automorphism(qm.geom, std::move(pp));
}

Vec6 scale(const Field& f, const Vec6& v, int lam) {
    Vec6 o{};
    for (int i = 0; i < 6; ++i) o[i] = f.mul(v[i], lam);
    return o;
}

}  // namespace

std::vector<GroupElement> line_symmetries_quadric(const QuadricModel& qm, int line) {
    require(qm.pgdim == 4, "line symmetries implemented for the parabolic model");
    const Field& f = *qm.field;
    auto [i, j] = qm.line_span[line];
    const Vec6& u = qm.coords[i];
    const Vec6& v = qm.coords[j];
    std::vector<GroupElement> out;
    out.reserve(f.q());
    out.push_back(identity_element(qm.geom));
    for (int lam = 1; lam < f.q(); ++lam) out.push_back(siegel(qm, u, scale(f, v, lam)));
    // contract: every element fixes each point of the line and each line meeting it
    for (const auto& g : out) {
        for (int p : qm.geom.line_points(line)) require(g.p[p] == p, "symmetry moves its axis");
        for (int p : qm.geom.line_points(line))
            for (int l2 : qm.geom.point_lines(p)) require(g.l[l2] == l2, "symmetry moves a concurrent line");
    }
    return out;
}

GenSet orthogonal_generators(const QuadricModel& qm) {
    require(qm.pgdim == 4, "orthogonal generators implemented for the parabolic model");
    const Field& f = *qm.field;
    int q = f.q();
    std::vector<GroupElement> gens;
    // additive basis of the field: elements with one coefficient set
    std::vector<int> basis_scalars;
    for (int i = 0, pw = 1; i < f.h(); ++i, pw *= f.p()) basis_scalars.push_back(pw);
    Vec6 e0{1, 0, 0, 0, 0, 0}, e1{0, 1, 0, 0, 0, 0}, e2{0, 0, 1, 0, 0, 0}, e3{0, 0, 0, 1, 0, 0},
        e4{0, 0, 0, 0, 1, 0};
    for (const Vec6& u : {e1, e2})
        for (const Vec6& v : {e0, e3, e4})
            for (int lam : basis_scalars) gens.push_back(siegel(qm, u, scale(f, v, lam)));
    for (const Vec6& u : {e3, e4})
        for (const Vec6& v : {e0})
            for (int lam : basis_scalars) gens.push_back(siegel(qm, u, scale(f, v, lam)));
    // torus: pick a generator of the multiplicative group
    int prim = 0;
    for (int a = 2; a < q; ++a) {
        int x = a, ord = 1;
        while (x != 1) {
            x = f.mul(x, a);
            ++ord;
        }
        if (ord == q - 1) {
            prim = a;
            break;
        }
    }
    require(prim != 0 || q == 2, "no primitive element found");
    auto mat = [&](std::initializer_list<std::initializer_list<int>> rows) {
        std::vector<Vec6> m;
        for (auto& r : rows) {
            Vec6 v{};
            int i = 0;
            for (int x : r) v[i++] = x;
            m.push_back(v);
        }
        return m;
    };
    int pi = prim, pinv = f.inv(prim);
    gens.push_back(qm.apply_matrix(
        mat({{1, 0, 0, 0, 0}, {0, pi, 0, 0, 0}, {0, 0, pinv, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}})));
    gens.push_back(qm.apply_matrix(
        mat({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, pi, 0}, {0, 0, 0, 0, pinv}})));
    // swaps and reflection
    gens.push_back(qm.apply_matrix(
        mat({{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}})));
    gens.push_back(qm.apply_matrix(
        mat({{1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}})));
    int neg = f.neg(1);
    gens.push_back(qm.apply_matrix(
        mat({{neg, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}})));
    if (f.h() > 1) {
        std::vector<Vec6> id5 = mat({{1, 0, 0, 0, 0},
                                     {0, 1, 0, 0, 0},
                                     {0, 0, 1, 0, 0},
                                     {0, 0, 0, 1, 0},
                                     {0, 0, 0, 0, 1}});
        gens.push_back(qm.apply_matrix(id5, 1));  // frobenius
    }
    GenSet gs(&qm.geom, gens);
    // certify completeness: order formula and flag transitivity
    uint64_t q4 = (uint64_t)q * q * q * q;
    uint64_t expect = (uint64_t)f.h() * q4 * (q4 - 1) * ((uint64_t)q * q - 1);
    require(gs.order() == expect, "orthogonal generator set has unexpected order");
    auto orb = orbit_of_point(gs.generators(), 0);
    require((int)orb.size() == qm.geom.points(), "orthogonal group not point transitive");
    return gs;
}

Subgeometry parabolic_section(const QuadricModel& q5) {
    require(q5.pgdim == 5, "parabolic section needs the elliptic model");
    const Field& f = *q5.field;
    // hyperplane w^perp for nonsingular w = e4 - e5: {x4 = x5}
    std::vector<int> pts;
    for (size_t i = 0; i < q5.coords.size(); ++i)
        if (q5.coords[i][4] == q5.coords[i][5]) pts.push_back((int)i);
    (void)f;
    return subgeometry_from_points(q5.geom, std::move(pts));
}

std::vector<int> elliptic_ovoid(const QuadricModel& q4) {
    require(q4.pgdim == 4, "elliptic ovoid lives in Q(4,q)");
    const Field& f = *q4.field;
    int q = f.q();
    // scan hyperplanes w^perp over nonsingular w until the section is an ovoid
    Vec6 w{};
    auto try_w = [&](const Vec6& cand) -> std::vector<int> {
        if (q4.qform(cand) == 0) return {};
        std::vector<int> pts;
        for (size_t i = 0; i < q4.coords.size(); ++i)
            if (q4.bform(q4.coords[i], cand) == 0) pts.push_back((int)i);
        if ((int)pts.size() != q * q + 1) return {};
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = a + 1; b < pts.size(); ++b)
                if (q4.geom.collinear(pts[a], pts[b])) return {};
        return pts;
    };
    for (int c0 = 0; c0 < q; ++c0)
        for (int c1 = 0; c1 < q; ++c1)
            for (int c3 = 0; c3 < q; ++c3) {
                w = Vec6{c0, c1, 1, c3, 1, 0};
                auto pts = try_w(w);
                if (!pts.empty()) return pts;
            }
    fail("no elliptic section found");
}

}  // namespace gqe
