#include "gqe/isofinder.hpp"

namespace gqe {

namespace {

struct Partial {
    const Geometry *A, *B;
    std::vector<int> pmap, lmap, pinv, linv;
    bool dead = false;

    Partial(const Geometry* a, const Geometry* b)
        : A(a),
          B(b),
          pmap(a->points(), -1),
          lmap(a->lines(), -1),
          pinv(b->points(), -1),
          linv(b->lines(), -1) {}

    bool set_point(int p, int q) {
        if (pmap[p] >= 0) return pmap[p] == q;
        if (pinv[q] >= 0) return false;
        pmap[p] = q;
        pinv[q] = p;
        return true;
    }
    bool set_line(int l, int m) {
        if (lmap[l] >= 0) return lmap[l] == m;
        if (linv[m] >= 0) return false;
        lmap[l] = m;
        linv[m] = l;
        return true;
    }
};

bool propagate(Partial& st) {
    const Geometry& A = *st.A;
    const Geometry& B = *st.B;
    bool progress = true;
    while (progress) {
        progress = false;
        // join rule: a line with two mapped points is determined
        for (int l = 0; l < A.lines(); ++l) {
            if (st.lmap[l] >= 0) continue;
            int m1 = -1, m2 = -1;
            for (int p : A.line_points(l)) {
                if (st.pmap[p] < 0) continue;
                if (m1 < 0)
                    m1 = p;
                else {
                    m2 = p;
                    break;
                }
            }
            if (m2 < 0) continue;
            int img = B.line_through(st.pmap[m1], st.pmap[m2]);
            if (img < 0 || !st.set_line(l, img)) return false;
            progress = true;
        }
        // projection rule: on a mapped line, the trace of any mapped point is
        // determined
        for (int l = 0; l < A.lines(); ++l) {
            if (st.lmap[l] < 0) continue;
            for (int p : A.line_points(l)) {
                if (st.pmap[p] >= 0) continue;
                // find a mapped z collinear with p, not on l
                int z = -1;
                for (int l2 : A.point_lines(p)) {
                    if (l2 == l) continue;
                    for (int cand : A.line_points(l2))
                        if (cand != p && st.pmap[cand] >= 0) {
                            z = cand;
                            break;
                        }
                    if (z >= 0) break;
                }
                if (z < 0) continue;
                int img = B.projection(st.pmap[z], st.lmap[l]);
                if (img < 0 || !st.set_point(p, img)) return false;
                progress = true;
            }
        }
    }
    return true;
}

bool complete_and_valid(const Partial& st) {
    const Geometry& A = *st.A;
    const Geometry& B = *st.B;
    for (int v : st.pmap)
        if (v < 0) return false;
    for (int v : st.lmap)
        if (v < 0) return false;
    for (int l = 0; l < A.lines(); ++l)
        for (int p : A.line_points(l))
            if (!B.incident(st.pmap[p], st.lmap[l])) return false;
    // bijectivity is enforced by set_point/set_line; sizes match
    return A.points() == B.points() && A.lines() == B.lines();
}

}  // namespace

std::optional<Morphism> find_isomorphism(const Geometry& a, const Geometry& b) {
    if (a.points() != b.points() || a.lines() != b.lines()) return std::nullopt;
    if (a.lines() == 0) return std::nullopt;
    if (a.line_points(0).size() != b.line_points(0).size()) return std::nullopt;

    // source frame
    int Ua = 0;
    int Va = -1;
    {
        Bitset onU(a.points());
        for (int p : a.line_points(Ua)) onU.set(p);
        for (int l = 1; l < a.lines() && Va < 0; ++l) {
            bool meets = false;
            for (int p : a.line_points(l))
                if (onU.test(p)) meets = true;
            if (!meets) Va = l;
        }
    }
    if (Va < 0) return std::nullopt;
    auto [Ra, RRa] = line_regulus(a, Ua, Va);
    if (Ra.size() < 3 || RRa.size() < 3) return std::nullopt;
    std::array<int, 3> L{RRa[0], RRa[1], RRa[2]};
    std::array<int, 3> M{Ra[0], Ra[1], Ra[2]};
    std::array<std::array<int, 3>, 3> P;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int hit = -1;
            for (int p : a.line_points(L[i]))
                if (a.incident(p, M[j])) hit = p;
            if (hit < 0) return std::nullopt;
            P[i][j] = hit;
        }
    // exterior seed point: on a non-grid line through P[0][0]
    int Na = -1, x0 = -1;
    for (int l : a.point_lines(P[0][0])) {
        if (l == L[0] || l == M[0]) continue;
        Na = l;
        for (int p : a.line_points(l))
            if (p != P[0][0]) {
                x0 = p;
                break;
            }
        break;
    }
    if (x0 < 0) return std::nullopt;

    // target frames
    int Ub = 0;
    std::vector<int> Vbs;
    {
        Bitset onU(b.points());
        for (int p : b.line_points(Ub)) onU.set(p);
        for (int l = 1; l < b.lines(); ++l) {
            bool meets = false;
            for (int p : b.line_points(l))
                if (onU.test(p)) meets = true;
            if (!meets) {
                Vbs.push_back(l);
                break;  // one frame suffices for transitive targets
            }
        }
    }
    for (int Vb : Vbs) {
        auto [Rb, RRb] = line_regulus(b, Ub, Vb);
        if (Rb.size() < 3 || RRb.size() < 3) continue;
        for (int orient = 0; orient < 2; ++orient) {
            std::array<int, 3> Lb{RRb[0], RRb[1], RRb[2]};
            std::array<int, 3> Mb{Rb[0], Rb[1], Rb[2]};
            if (orient) std::swap(Lb, Mb);
            std::array<std::array<int, 3>, 3> Q;
            bool frame_ok = true;
            for (int i = 0; i < 3 && frame_ok; ++i)
                for (int j = 0; j < 3 && frame_ok; ++j) {
                    int hit = -1;
                    for (int p : b.line_points(Lb[i]))
                        if (b.incident(p, Mb[j])) hit = p;
                    if (hit < 0) frame_ok = false;
                    Q[i][j] = hit;
                }
            if (!frame_ok) continue;
            // candidates for the exterior point image
            for (int lb : b.point_lines(Q[0][0])) {
                if (lb == Lb[0] || lb == Mb[0]) continue;
                for (int y0 : b.line_points(lb)) {
                    if (y0 == Q[0][0]) continue;
                    Partial st(&a, &b);
                    bool ok = true;
                    for (int i = 0; i < 3 && ok; ++i) ok = st.set_line(L[i], Lb[i]);
                    for (int j = 0; j < 3 && ok; ++j) ok = st.set_line(M[j], Mb[j]);
                    for (int i = 0; i < 3 && ok; ++i)
                        for (int j = 0; j < 3 && ok; ++j) ok = st.set_point(P[i][j], Q[i][j]);
                    if (ok) ok = st.set_line(Na, lb) && st.set_point(x0, y0);
                    if (!ok) continue;
                    if (!propagate(st)) continue;
                    if (!complete_and_valid(st)) continue;
                    Morphism m;
                    m.src = &a;
                    m.dst = &b;
                    m.pmap = st.pmap;
                    m.lmap = st.lmap;
                    return m;
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace gqe
