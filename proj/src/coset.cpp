#include "gqe/coset.hpp"

#include <optional>
#include <unordered_set>

namespace gqe {

uint32_t CosetModel::encode(const GElem& g) const {
    return (((((uint32_t)g.a1 * q + g.a2) * q + g.c) * q + g.b1) * q + g.b2);
}

GElem CosetModel::decode(uint32_t x) const {
    GElem g;
    g.b2 = (uint8_t)(x % q);
    x /= q;
    g.b1 = (uint8_t)(x % q);
    x /= q;
    g.c = (uint8_t)(x % q);
    x /= q;
    g.a2 = (uint8_t)(x % q);
    x /= q;
    g.a1 = (uint8_t)(x % q);
    return g;
}

GElem CosetModel::mul(const GElem& x, const GElem& y) const {
    const Field& F = *f;
    GElem r;
    r.a1 = (uint8_t)F.add(x.a1, y.a1);
    r.a2 = (uint8_t)F.add(x.a2, y.a2);
    int dot = F.add(F.mul(x.b1, y.a1), F.mul(x.b2, y.a2));
    r.c = (uint8_t)F.add(F.add(x.c, y.c), dot);
    r.b1 = (uint8_t)F.add(x.b1, y.b1);
    r.b2 = (uint8_t)F.add(x.b2, y.b2);
    return r;
}

GElem CosetModel::invert(const GElem& x) const {
    const Field& F = *f;
    GElem r;
    r.a1 = (uint8_t)F.neg(x.a1);
    r.a2 = (uint8_t)F.neg(x.a2);
    int dot = F.add(F.mul(x.b1, x.a1), F.mul(x.b2, x.a2));
    r.c = (uint8_t)F.add(F.neg(x.c), dot);
    r.b1 = (uint8_t)F.neg(x.b1);
    r.b2 = (uint8_t)F.neg(x.b2);
    return r;
}

GElem CosetModel::family_elem(int ts, int x1, int x2) const {
    const Field& F = *f;
    GElem g;
    if (ts == infty_slot()) {
        g.b1 = (uint8_t)x1;
        g.b2 = (uint8_t)x2;
        return g;
    }
    int t = slot_elem(ts), mt = mt_[ts];
    g.a1 = (uint8_t)x1;
    g.a2 = (uint8_t)x2;
    g.c = (uint8_t)F.add(F.mul(t, F.mul(x1, x1)), F.mul(mt, F.mul(x2, x2)));
    g.b1 = (uint8_t)F.mul(F.add(t, t), x1);
    g.b2 = (uint8_t)F.mul(F.add(mt, mt), x2);
    return g;
}

int CosetModel::point_coset(int ts, const GElem& g) const {
    const Field& F = *f;
    int q3 = q * q * q;
    if (ts == infty_slot()) {
        // coset g A(infty) = {(alpha, c, *)}
        int w = (F.canon_rank(g.a1) * q + F.canon_rank(g.a2)) * q + F.canon_rank(g.c);
        return q * q3 + w;
    }
    int t = slot_elem(ts), mt = mt_[ts];
    // right-multiply by the family element over -alpha: representative with alpha = 0
    int qa = F.add(F.mul(t, F.mul(g.a1, g.a1)), F.mul(mt, F.mul(g.a2, g.a2)));
    int dot = F.add(F.mul(g.b1, g.a1), F.mul(g.b2, g.a2));
    int cs = F.sub(F.add(g.c, qa), dot);
    int k1 = F.sub(g.b1, F.mul(F.add(t, t), g.a1));
    int k2 = F.sub(g.b2, F.mul(F.add(mt, mt), g.a2));
    int w = (F.canon_rank(cs) * q + F.canon_rank(k1)) * q + F.canon_rank(k2);
    return ts * q3 + w;
}

int CosetModel::point_symbol(int ts) const { return (q + 1) * q * q * q + ts; }

int CosetModel::line_elem(const GElem& g) const {
    const Field& F = *f;
    return ((((F.canon_rank(g.a1) * q + F.canon_rank(g.a2)) * q + F.canon_rank(g.c)) * q +
             F.canon_rank(g.b1)) *
                q +
            F.canon_rank(g.b2));
}

int CosetModel::line_star(int ts, const GElem& g) const {
    const Field& F = *f;
    int q5 = q * q * q * q * q;
    if (ts == infty_slot()) {
        return q5 + q * q * q + F.canon_rank(g.a1) * q + F.canon_rank(g.a2);
    }
    int t = slot_elem(ts), mt = mt_[ts];
    int k1 = F.sub(g.b1, F.mul(F.add(t, t), g.a1));
    int k2 = F.sub(g.b2, F.mul(F.add(mt, mt), g.a2));
    return q5 + ts * q * q + F.canon_rank(k1) * q + F.canon_rank(k2);
}

int CosetModel::line_infty() const { return q * q * q * q * q + (q + 1) * q * q; }

CosetModel::PointInfo CosetModel::point_info(int pid) const {
    const Field& F = *f;
    PointInfo pi;
    int q3 = q * q * q;
    if (pid >= (q + 1) * q3) {
        pi.symbol = true;
        pi.ts = pid - (q + 1) * q3;
        return pi;
    }
    pi.ts = pid / q3;
    int w = pid % q3;
    int r2 = w % q;
    w /= q;
    int r1 = w % q;
    int r0 = w / q;
    if (pi.ts == infty_slot()) {
        pi.rep.a1 = (uint8_t)F.element_of_rank(r0);
        pi.rep.a2 = (uint8_t)F.element_of_rank(r1);
        pi.rep.c = (uint8_t)F.element_of_rank(r2);
    } else {
        pi.rep.c = (uint8_t)F.element_of_rank(r0);
        pi.rep.b1 = (uint8_t)F.element_of_rank(r1);
        pi.rep.b2 = (uint8_t)F.element_of_rank(r2);
    }
    return pi;
}

CosetModel::LineInfo CosetModel::line_info(int lid) const {
    const Field& F = *f;
    LineInfo li;
    int q5 = q * q * q * q * q;
    if (lid < q5) {
        li.kind = 0;
        int w = lid;
        int d4 = w % q;
        w /= q;
        int d3 = w % q;
        w /= q;
        int d2 = w % q;
        w /= q;
        int d1 = w % q;
        int d0 = w / q;
        li.rep.a1 = (uint8_t)F.element_of_rank(d0);
        li.rep.a2 = (uint8_t)F.element_of_rank(d1);
        li.rep.c = (uint8_t)F.element_of_rank(d2);
        li.rep.b1 = (uint8_t)F.element_of_rank(d3);
        li.rep.b2 = (uint8_t)F.element_of_rank(d4);
        return li;
    }
    if (lid == line_infty()) {
        li.kind = 2;
        return li;
    }
    li.kind = 1;
    int w = lid - q5;
    li.ts = w / (q * q);
    int r = w % (q * q);
    if (li.ts == infty_slot()) {
        li.rep.a1 = (uint8_t)F.element_of_rank(r / q);
        li.rep.a2 = (uint8_t)F.element_of_rank(r % q);
    } else {
        li.rep.b1 = (uint8_t)F.element_of_rank(r / q);
        li.rep.b2 = (uint8_t)F.element_of_rank(r % q);
    }
    return li;
}

FamilyCheck check_kantor_conditions(const FieldPtr& f, int sigma_k, int m) {
    FamilyCheck out;
    CosetModel cm;
    cm.f = f;
    cm.sigma_k = sigma_k;
    cm.m = m;
    cm.q = f->q();
    cm.mt_.resize(cm.q);
    for (int ts = 0; ts < cm.q; ++ts)
        cm.mt_[ts] = f->neg(f->mul(m, f->frob_k(cm.slot_elem(ts), sigma_k)));
    int q = cm.q;
    std::vector<std::unordered_set<uint32_t>> A(q + 1), Astar(q + 1);
    for (int ts = 0; ts <= q; ++ts)
        for (int x1 = 0; x1 < q; ++x1)
            for (int x2 = 0; x2 < q; ++x2) {
                GElem a = cm.family_elem(ts, x1, x2);
                A[ts].insert(cm.encode(a));
                for (int c = 0; c < q; ++c) {
                    GElem z = a;
                    z.c = (uint8_t)f->add(z.c, c);
                    Astar[ts].insert(cm.encode(z));
                }
            }
    // K2: A*(s) n A(t) = {e} for s != t
    for (int s = 0; s <= q && out.ok; ++s)
        for (int t = 0; t <= q && out.ok; ++t) {
            if (s == t) continue;
            for (uint32_t z : Astar[s])
                if (z != 0 && A[t].count(z)) {
                    out.ok = false;
                    out.witness = "K2 fails: A*(slot " + std::to_string(s) + ") meets A(slot " +
                                  std::to_string(t) + ")";
                    break;
                }
        }
    // K1: A(s) A(t) n A(r) = {e} for distinct r, s, t
    for (int r = 0; r <= q && out.ok; ++r)
        for (int s = 0; s <= q && out.ok; ++s)
            for (int t = 0; t <= q && out.ok; ++t) {
                if (r == s || r == t || s == t) continue;
                for (uint32_t ar : A[r]) {
                    if (ar == 0) continue;
                    GElem a = cm.decode(ar);
                    bool hit = false;
                    for (uint32_t xs : A[s]) {
                        GElem prod = cm.mul(cm.invert(cm.decode(xs)), a);
                        if (A[t].count(cm.encode(prod))) {
                            hit = true;
                            break;
                        }
                    }
                    if (hit) {
                        out.ok = false;
                        out.witness = "K1 fails at slots (" + std::to_string(r) + "," +
                                      std::to_string(s) + "," + std::to_string(t) + ")";
                        break;
                    }
                }
            }
    return out;
}

CosetModel build_kantor_knuth(const FieldPtr& f, int sigma_k, int m) {
    require(f->p() % 2 == 1, "Kantor-Knuth construction needs odd q");
    require(f->q() <= 13, "coset model limited to q <= 13");
    require(0 <= sigma_k && sigma_k < f->h(), "sigma exponent out of range");
    if (m < 0) m = find_nonsquare(*f);
    require(m > 0 && !f->is_square(m), "m must be a nonsquare");
    FamilyCheck fc = check_kantor_conditions(f, sigma_k, m);
    require(fc.ok, "Kantor conditions failed: " + fc.witness);

    CosetModel cm;
    cm.f = f;
    cm.sigma_k = sigma_k;
    cm.m = m;
    cm.q = f->q();
    cm.mt_.resize(cm.q);
    for (int ts = 0; ts < cm.q; ++ts)
        cm.mt_[ts] = f->neg(f->mul(m, f->frob_k(cm.slot_elem(ts), sigma_k)));

    int q = cm.q;
    int q3 = q * q * q, q5 = q3 * q * q;
    std::vector<std::vector<int>> lines(cm.num_lines());
    // element lines: the q+1 cosets through the element
    for (uint32_t raw = 0; raw < (uint32_t)q5; ++raw) {
        GElem g = cm.decode(raw);
        auto& lp = lines[cm.line_elem(g)];
        lp.reserve(q + 1);
        for (int ts = 0; ts <= q; ++ts) lp.push_back(cm.point_coset(ts, g));
    }
    // star lines: symbol + the q nested cosets
    const Field& F = *f;
    for (int ts = 0; ts < q; ++ts)
        for (int r1 = 0; r1 < q; ++r1)
            for (int r2 = 0; r2 < q; ++r2) {
                GElem rep;
                rep.b1 = (uint8_t)F.element_of_rank(r1);
                rep.b2 = (uint8_t)F.element_of_rank(r2);
                auto& lp = lines[cm.line_star(ts, rep)];
                lp.reserve(q + 1);
                lp.push_back(cm.point_symbol(ts));
                for (int c = 0; c < q; ++c)
                    lp.push_back(ts * q3 + (F.canon_rank(c) * q + r1) * q + r2);
            }
    for (int r1 = 0; r1 < q; ++r1)
        for (int r2 = 0; r2 < q; ++r2) {
            GElem rep;
            rep.a1 = (uint8_t)F.element_of_rank(r1);
            rep.a2 = (uint8_t)F.element_of_rank(r2);
            auto& lp = lines[cm.line_star(cm.infty_slot(), rep)];
            lp.reserve(q + 1);
            lp.push_back(cm.point_symbol(cm.infty_slot()));
            for (int c = 0; c < q; ++c)
                lp.push_back(q * q3 + (r1 * q + r2) * q + F.canon_rank(c));
        }
    {
        auto& lp = lines[cm.line_infty()];
        for (int ts = 0; ts <= q; ++ts) lp.push_back(cm.point_symbol(ts));
    }
    cm.geom = build_geometry(std::move(lines), cm.num_points(), "kantor-knuth");
    // structural order check; the exhaustive axiom run lives in the validators
    for (int p = 0; p < cm.geom.points(); ++p)
        require((int)cm.geom.point_lines(p).size() == q * q + 1, "point degree != q^2+1");
    ValidateOpts vo;
    vo.exhaustive_pair_limit = 0;  // sampled smoke check at build time
    vo.sample_pairs = 200000;
    auto rep = validate_gq(cm.geom, vo);
    require(rep.is_gq && rep.s == q && rep.t == q * q, "coset geometry failed GQ smoke check");
    return cm;
}

// ---------------------------------------------------------------------------
// automorphism machinery

namespace {

void verify_family_map(const CosetModel& cm, const CosetMap& mp) {
    // bijectivity and: image of A(t) lies in emap(e) * A(tmap[t])
    int q5 = cm.q * cm.q * cm.q * cm.q * cm.q;
    require((int)mp.emap.size() == q5 && (int)mp.tmap.size() == cm.q + 1, "malformed coset map");
    std::vector<uint8_t> seen(q5, 0);
    for (uint32_t v : mp.emap) {
        require(v < (uint32_t)q5 && !seen[v], "coset map is not a bijection");
        seen[v] = 1;
    }
    GElem h_inv = cm.invert(cm.decode(mp.emap[0]));
    for (int ts = 0; ts <= cm.q; ++ts) {
        int it = mp.tmap[ts];
        require(0 <= it && it <= cm.q, "slot map out of range");
        for (int x1 = 0; x1 < cm.q; ++x1)
            for (int x2 = 0; x2 < cm.q; ++x2) {
                GElem a = cm.family_elem(ts, x1, x2);
                GElem img = cm.mul(h_inv, cm.decode(mp.emap[cm.encode(a)]));
                // membership in A(tmap[ts]): determined by the alpha part
                bool ok;
                if (it == cm.infty_slot())
                    ok = img.a1 == 0 && img.a2 == 0 && img.c == 0;
                else
                    ok = img == cm.family_elem(it, img.a1, img.a2);
                require(ok, "map does not preserve the family at slot " + std::to_string(ts));
            }
    }
}

CosetMap make_map(const CosetModel& cm, const std::function<GElem(const GElem&)>& fn,
                  std::vector<int> tmap, bool verify = true) {
    CosetMap mp;
    int q5 = cm.q * cm.q * cm.q * cm.q * cm.q;
    mp.emap.resize(q5);
    for (uint32_t raw = 0; raw < (uint32_t)q5; ++raw) mp.emap[raw] = cm.encode(fn(cm.decode(raw)));
    mp.tmap = std::move(tmap);
    if (verify) verify_family_map(cm, mp);
    return mp;
}

std::vector<int> identity_tmap(const CosetModel& cm) {
    std::vector<int> t(cm.q + 1);
    for (int i = 0; i <= cm.q; ++i) t[i] = i;
    return t;
}

int sqrt_elem(const Field& f, int x) {
    for (int a = 0; a < f.q(); ++a)
        if (f.mul(a, a) == x) return a;
    return -1;
}

}  // namespace

CosetMap map_identity(const CosetModel& cm) {
    return make_map(
        cm, [](const GElem& g) { return g; }, identity_tmap(cm), false);
}

CosetMap map_compose(const CosetModel& cm, const CosetMap& a, const CosetMap& b) {
    CosetMap mp;
    mp.emap.resize(a.emap.size());
    for (size_t i = 0; i < a.emap.size(); ++i) mp.emap[i] = b.emap[a.emap[i]];
    mp.tmap.resize(cm.q + 1);
    for (int i = 0; i <= cm.q; ++i) mp.tmap[i] = b.tmap[a.tmap[i]];
    return mp;
}

CosetMap map_inverse(const CosetModel& cm, const CosetMap& a) {
    CosetMap mp;
    mp.emap.resize(a.emap.size());
    for (size_t i = 0; i < a.emap.size(); ++i) mp.emap[a.emap[i]] = (uint32_t)i;
    mp.tmap.resize(cm.q + 1);
    for (int i = 0; i <= cm.q; ++i) mp.tmap[a.tmap[i]] = i;
    return mp;
}

CosetMap map_left_mult(const CosetModel& cm, const GElem& h) {
    return make_map(
        cm, [&](const GElem& g) { return cm.mul(h, g); }, identity_tmap(cm), false);
}

CosetMap map_psi(const CosetModel& cm, int r_elem) {
    const Field& F = *cm.f;
    int mr = F.neg(F.mul(cm.m, F.frob_k(r_elem, cm.sigma_k)));
    std::vector<int> tmap(cm.q + 1);
    for (int ts = 0; ts < cm.q; ++ts) tmap[ts] = cm.elem_slot(F.add(cm.slot_elem(ts), r_elem));
    tmap[cm.q] = cm.q;
    return make_map(
        cm,
        [&, mr, r_elem](const GElem& g) {
            GElem o = g;
            int qa = F.add(F.mul(r_elem, F.mul(g.a1, g.a1)), F.mul(mr, F.mul(g.a2, g.a2)));
            o.c = (uint8_t)F.add(g.c, qa);
            o.b1 = (uint8_t)F.add(g.b1, F.mul(F.add(r_elem, r_elem), g.a1));
            o.b2 = (uint8_t)F.add(g.b2, F.mul(F.add(mr, mr), g.a2));
            return o;
        },
        std::move(tmap));
}

CosetMap map_phi_diag(const CosetModel& cm, int d1, int d2, int lambda) {
    const Field& F = *cm.f;
    require(d1 != 0 && d2 != 0 && lambda != 0, "singular diagonal map");
    int s1 = F.div(lambda, d1), s2 = F.div(lambda, d2);
    int scale = F.div(lambda, F.mul(d1, d1));
    std::vector<int> tmap(cm.q + 1);
    for (int ts = 0; ts < cm.q; ++ts) tmap[ts] = cm.elem_slot(F.mul(scale, cm.slot_elem(ts)));
    tmap[cm.q] = cm.q;
    return make_map(
        cm,
        [&, d1, d2, s1, s2, lambda](const GElem& g) {
            GElem o;
            o.a1 = (uint8_t)F.mul(g.a1, d1);
            o.a2 = (uint8_t)F.mul(g.a2, d2);
            o.c = (uint8_t)F.mul(g.c, lambda);
            o.b1 = (uint8_t)F.mul(g.b1, s1);
            o.b2 = (uint8_t)F.mul(g.b2, s2);
            return o;
        },
        std::move(tmap));
}

CosetMap map_rho(const CosetModel& cm) {
    const Field& F = *cm.f;
    int d2 = sqrt_elem(F, F.inv(F.mul(cm.m, cm.m)));
    require(d2 >= 0, "no square root of 1/m^2");
    // canonical pick between +-
    if (F.canon_rank(F.neg(d2)) < F.canon_rank(d2)) d2 = F.neg(d2);
    int four = F.add(F.add(1, 1), F.add(1, 1));
    std::vector<int> tmap(cm.q + 1);
    for (int ts = 0; ts < cm.q; ++ts) {
        int t = cm.slot_elem(ts);
        tmap[ts] = t == 0 ? cm.q : cm.elem_slot(F.inv(F.mul(four, t)));
    }
    tmap[cm.q] = cm.elem_slot(0);
    int d2inv = F.inv(d2);
    return make_map(
        cm,
        [&, d2, d2inv](const GElem& g) {
            GElem o;
            o.a1 = g.b1;
            o.a2 = (uint8_t)F.mul(g.b2, d2);
            int dot = F.add(F.mul(g.a1, g.b1), F.mul(g.a2, g.b2));
            o.c = (uint8_t)F.add(F.neg(g.c), dot);
            o.b1 = g.a1;
            o.b2 = (uint8_t)F.mul(g.a2, d2inv);
            return o;
        },
        std::move(tmap));
}

CosetMap map_frobenius(const CosetModel& cm) {
    const Field& F = *cm.f;
    int d2 = sqrt_elem(F, F.pow(cm.m, F.p() - 1));
    require(d2 >= 0, "no square root of m^(p-1)");
    if (F.canon_rank(F.neg(d2)) < F.canon_rank(d2)) d2 = F.neg(d2);
    int d2inv = F.inv(d2);
    std::vector<int> tmap(cm.q + 1);
    for (int ts = 0; ts < cm.q; ++ts) tmap[ts] = cm.elem_slot(F.frob(cm.slot_elem(ts)));
    tmap[cm.q] = cm.q;
    return make_map(
        cm,
        [&, d2, d2inv](const GElem& g) {
            GElem o;
            o.a1 = (uint8_t)F.frob(g.a1);
            o.a2 = (uint8_t)F.mul(F.frob(g.a2), d2);
            o.c = (uint8_t)F.frob(g.c);
            o.b1 = (uint8_t)F.frob(g.b1);
            o.b2 = (uint8_t)F.mul(F.frob(g.b2), d2inv);
            return o;
        },
        std::move(tmap));
}

CosetMap map_kernel_scalar(const CosetModel& cm, int lambda) {
    const Field& F = *cm.f;
    require(lambda != 0 && F.frob_k(lambda, cm.sigma_k) == lambda,
            "kernel scalar must lie in the fixed field of sigma");
    std::vector<int> tmap(cm.q + 1);
    for (int ts = 0; ts < cm.q; ++ts) tmap[ts] = cm.elem_slot(F.mul(lambda, cm.slot_elem(ts)));
    tmap[cm.q] = cm.q;
    return make_map(
        cm,
        [&, lambda](const GElem& g) {
            GElem o = g;
            o.c = (uint8_t)F.mul(g.c, lambda);
            o.b1 = (uint8_t)F.mul(g.b1, lambda);
            o.b2 = (uint8_t)F.mul(g.b2, lambda);
            return o;
        },
        std::move(tmap));
}

std::optional<CosetMap> map_weyl_swap(const CosetModel& cm) {
    const Field& F = *cm.f;
    // v^2 = m^-(1+sigma); exists iff sigma^2 = id
    int msig = F.frob_k(cm.m, cm.sigma_k);
    int v = sqrt_elem(F, F.inv(F.mul(cm.m, msig)));
    if (v < 0) return std::nullopt;
    int vinv = F.inv(v);
    std::vector<int> tmap(cm.q + 1);
    for (int ts = 0; ts < cm.q; ++ts) {
        int t = cm.slot_elem(ts);
        tmap[ts] = cm.elem_slot(F.neg(F.mul(cm.m, F.frob_k(t, cm.sigma_k))));
    }
    tmap[cm.q] = cm.q;
    CosetMap mp = make_map(
        cm,
        [&, v, vinv](const GElem& g) {
            GElem o;
            o.a1 = g.a2;
            o.a2 = (uint8_t)F.mul(g.a1, v);
            o.c = g.c;
            o.b1 = g.b2;
            o.b2 = (uint8_t)F.mul(g.b1, vinv);
            return o;
        },
        std::move(tmap));
    return mp;
}

CosetMap mover_to_infty_slot(const CosetModel& cm, int ts) {
    if (ts == cm.infty_slot()) return map_identity(cm);
    int t = cm.slot_elem(ts);
    CosetMap shift = map_psi(cm, cm.f->neg(t));  // t -> 0
    return map_compose(cm, shift, map_rho(cm));  // 0 -> infinity
}

int apply_point(const CosetModel& cm, const CosetMap& m, int pid) {
    auto pi = cm.point_info(pid);
    if (pi.symbol) return cm.point_symbol(m.tmap[pi.ts]);
    GElem img = cm.decode(m.emap[cm.encode(pi.rep)]);
    return cm.point_coset(m.tmap[pi.ts], img);
}

int apply_line(const CosetModel& cm, const CosetMap& m, int lid) {
    auto li = cm.line_info(lid);
    if (li.kind == 2) return cm.line_infty();
    GElem img = cm.decode(m.emap[cm.encode(li.rep)]);
    if (li.kind == 0) return cm.line_elem(img);
    return cm.line_star(m.tmap[li.ts], img);
}

GroupElement coset_map_to_perm(const CosetModel& cm, const CosetMap& m, bool verify) {
    GroupElement e;
    e.p.resize(cm.geom.points());
    e.l.resize(cm.geom.lines());
    for (int p = 0; p < cm.geom.points(); ++p) e.p[p] = apply_point(cm, m, p);
    for (int l = 0; l < cm.geom.lines(); ++l) e.l[l] = apply_line(cm, m, l);
    if (verify) {
        std::vector<uint8_t> seen(cm.geom.points(), 0);
        for (int32_t v : e.p) {
            require(v >= 0 && v < cm.geom.points() && !seen[v], "point map not bijective");
            seen[v] = 1;
        }
        for (int l = 0; l < cm.geom.lines(); ++l)
            for (int p : cm.geom.line_points(l))
                require(cm.geom.incident(e.p[p], e.l[l]), "coset map breaks incidence");
    }
    return e;
}

std::vector<GroupElement> line_symmetries_coset(const CosetModel& cm, int line_id) {
    auto li = cm.line_info(line_id);
    std::vector<GroupElement> out;
    if (li.kind == 2) {
        // [infty]: left multiplication by the center
        for (int c = 0; c < cm.q; ++c) {
            GElem z;
            z.c = (uint8_t)cm.f->element_of_rank(c);
            out.push_back(coset_map_to_perm(cm, map_left_mult(cm, z), false));
        }
        return out;
    }
    require(li.kind == 1, "line is not an axis of symmetry in the coset model");
    // conjugate the psi family to the star coset
    CosetMap mov = mover_to_infty_slot(cm, li.ts);
    int moved = apply_line(cm, mov, line_id);
    auto mi = cm.line_info(moved);
    require(mi.kind == 1 && mi.ts == cm.infty_slot(), "mover did not reach the infinity slot");
    CosetMap shift = map_left_mult(cm, cm.invert(mi.rep));
    CosetMap to_frame = map_compose(cm, mov, shift);
    CosetMap from_frame = map_inverse(cm, to_frame);
    for (int r = 0; r < cm.q; ++r) {
        CosetMap sym = map_psi(cm, cm.f->element_of_rank(r));
        CosetMap conj = map_compose(cm, map_compose(cm, to_frame, sym), from_frame);
        out.push_back(coset_map_to_perm(cm, conj, false));
    }
    // contract: fixes the axis pointwise and every concurrent line
    for (const auto& g : out)
        for (int p : cm.geom.line_points(line_id)) {
            require(g.p[p] == p, "symmetry moves a point of its axis");
            for (int l2 : cm.geom.point_lines(p))
                require(g.l[l2] == l2, "symmetry moves a concurrent line");
        }
    return out;
}

GenSet translation_group(const CosetModel& cm, int symbol_point) {
    auto pi = cm.point_info(symbol_point);
    require(pi.symbol, "translation point must lie on [infty]");
    CosetMap to_frame = mover_to_infty_slot(cm, pi.ts);
    CosetMap from_frame = map_inverse(cm, to_frame);
    std::vector<GroupElement> gens;
    auto push = [&](const CosetMap& g) {
        CosetMap conj = map_compose(cm, map_compose(cm, to_frame, g), from_frame);
        gens.push_back(coset_map_to_perm(cm, conj, false));
    };
    const Field& F = *cm.f;
    for (int i = 0, pw = 1; i < F.h(); ++i, pw *= F.p()) {
        GElem zc, zb1, zb2;
        zc.c = (uint8_t)pw;
        zb1.b1 = (uint8_t)pw;
        zb2.b2 = (uint8_t)pw;
        push(map_left_mult(cm, zc));
        push(map_left_mult(cm, zb1));
        push(map_left_mult(cm, zb2));
        push(map_psi(cm, pw));
    }
    return GenSet(&cm.geom, std::move(gens));
}

std::vector<GroupElement> kernel_homologies(const CosetModel& cm, int u, int v) {
    auto ui = cm.point_info(u);
    require(ui.symbol, "u must be a translation point on [infty]");
    auto vi = cm.point_info(v);
    require(!vi.symbol && vi.ts != ui.ts, "v must not be collinear with u");
    CosetMap step = mover_to_infty_slot(cm, ui.ts);
    {
        int v1 = apply_point(cm, step, v);
        auto i1 = cm.point_info(v1);
        require(!i1.symbol && i1.ts != cm.infty_slot(), "conjugation failed");
        CosetMap shift = map_psi(cm, cm.f->neg(cm.slot_elem(i1.ts)));
        step = map_compose(cm, step, shift);
        int v2 = apply_point(cm, step, v);
        auto i2 = cm.point_info(v2);
        require(cm.slot_elem(i2.ts) == 0, "shift failed");
        step = map_compose(cm, step, map_left_mult(cm, cm.invert(i2.rep)));
    }
    CosetMap back = map_inverse(cm, step);
    auto sub = fixed_subfield(FieldAut{cm.f, cm.sigma_k});
    std::vector<GroupElement> out;
    for (int lam : sub.fixed) {
        if (lam == 0 || lam == 1) continue;
        CosetMap k = map_kernel_scalar(cm, lam);
        out.push_back(coset_map_to_perm(cm, map_compose(cm, map_compose(cm, step, k), back), false));
    }
    // sanity on the defining pair
    for (const auto& g : out) {
        require(g.p[u] == u && g.p[v] == v, "kernel homology moves u or v");
        for (int l : cm.geom.point_lines(u)) require(g.l[l] == l, "kernel homology moves a line on u");
        for (int l : cm.geom.point_lines(v)) require(g.l[l] == l, "kernel homology moves a line on v");
    }
    return out;
}

Subgeometry canonical_subgq(const CosetModel& cm, int axis) {
    require(axis == 0 || axis == 1, "axis must be 0 or 1");
    std::vector<int> pts;
    for (int pid = 0; pid < cm.geom.points(); ++pid) {
        auto pi = cm.point_info(pid);
        if (pi.symbol) {
            pts.push_back(pid);
            continue;
        }
        if (pi.ts == cm.infty_slot()) {
            if ((axis == 0 ? pi.rep.a2 : pi.rep.a1) == 0) pts.push_back(pid);
        } else {
            if ((axis == 0 ? pi.rep.b2 : pi.rep.b1) == 0) pts.push_back(pid);
        }
    }
    return subgeometry_from_points(cm.geom, std::move(pts));
}

TransCandidateSet translation_candidates_fixing(const CosetModel& cm, int e_point) {
    auto ei = cm.point_info(e_point);
    require(!ei.symbol, "e must be an affine point");
    TransCandidateSet out;
    out.to_frame = mover_to_infty_slot(cm, ei.ts);
    out.from_frame = map_inverse(cm, out.to_frame);
    int w = apply_point(cm, out.to_frame, e_point);
    auto wi = cm.point_info(w);
    require(!wi.symbol && wi.ts == cm.infty_slot(), "candidate frame broken");
    GElem g = wi.rep;  // representative of the A(infty) coset holding the moved point
    const Field& F = *cm.f;
    for (int rr = 0; rr < cm.q; ++rr) {
        int r = F.element_of_rank(rr);
        CosetMap psi = map_psi(cm, r);
        GElem pg = cm.decode(psi.emap[cm.encode(g)]);
        GElem pg_inv = cm.invert(pg);
        for (int x1 = 0; x1 < cm.q; ++x1)
            for (int x2 = 0; x2 < cm.q; ++x2) {
                GElem a = cm.family_elem(cm.infty_slot(), x1, x2);
                GElem h = cm.mul(cm.mul(g, a), pg_inv);
                require(h.a1 == 0 && h.a2 == 0, "translation candidate left A*(infty)");
                out.cands.push_back({h, r});
            }
    }
    return out;
}

int trans_apply_point(const CosetModel& cm, const TransCandidateSet& s, const TransCandidate& c,
                      int pid) {
    const Field& F = *cm.f;
    int p1 = apply_point(cm, s.to_frame, pid);
    auto pi = cm.point_info(p1);
    int mr = F.neg(F.mul(cm.m, F.frob_k(c.r, cm.sigma_k)));
    int p2;
    if (pi.symbol) {
        int ts2 = pi.ts == cm.infty_slot() ? pi.ts : cm.elem_slot(F.add(cm.slot_elem(pi.ts), c.r));
        p2 = cm.point_symbol(ts2);
    } else {
        GElem g = pi.rep;
        GElem o = g;
        int qa = F.add(F.mul(c.r, F.mul(g.a1, g.a1)), F.mul(mr, F.mul(g.a2, g.a2)));
        o.c = (uint8_t)F.add(g.c, qa);
        o.b1 = (uint8_t)F.add(g.b1, F.mul(F.add(c.r, c.r), g.a1));
        o.b2 = (uint8_t)F.add(g.b2, F.mul(F.add(mr, mr), g.a2));
        o = cm.mul(c.h, o);
        int ts2 = pi.ts == cm.infty_slot() ? pi.ts : cm.elem_slot(F.add(cm.slot_elem(pi.ts), c.r));
        p2 = cm.point_coset(ts2, o);
    }
    return apply_point(cm, s.from_frame, p2);
}

}  // namespace gqe
