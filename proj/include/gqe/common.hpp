#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>
#include <algorithm>
#include <functional>
#include <span>
#include <thread>

namespace gqe {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

// Fixed-width bitset over a point domain.  Rows of the collinearity matrix
// and point sets share this representation so intersections are word ops.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

    int size() const { return nbits_; }
    int words() const { return (int)w_.size(); }
    const uint64_t* data() const { return w_.data(); }
    uint64_t* data() { return w_.data(); }

    void set(int i) { w_[i >> 6] |= (uint64_t)1 << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~((uint64_t)1 << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    int count() const {
        int c = 0;
        for (uint64_t x : w_) c += __builtin_popcountll(x);
        return c;
    }
    void and_with(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    }
    void or_with(const Bitset& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    }
    bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

    template <class F>
    void for_each(F f) const {
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            uint64_t x = w_[wi];
            while (x) {
                int b = __builtin_ctzll(x);
                f((int)(wi * 64 + b));
                x &= x - 1;
            }
        }
    }
    std::vector<int> to_vector() const {
        std::vector<int> v;
        v.reserve(count());
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

private:
    int nbits_ = 0;
    std::vector<uint64_t> w_;
};

// Dense bit matrix, one Bitset-compatible row per point.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_((size_t)rows * wpr_, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int words_per_row() const { return wpr_; }
    const uint64_t* row(int r) const { return w_.data() + (size_t)r * wpr_; }
    uint64_t* row(int r) { return w_.data() + (size_t)r * wpr_; }

    void set(int r, int c) { row(r)[c >> 6] |= (uint64_t)1 << (c & 63); }
    bool test(int r, int c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }

    int and_popcount(int r1, int r2) const {
        const uint64_t* a = row(r1);
        const uint64_t* b = row(r2);
        int c = 0;
        for (int i = 0; i < wpr_; ++i) c += __builtin_popcountll(a[i] & b[i]);
        return c;
    }
    void row_to(int r, Bitset& out) const {
        std::memcpy(out.data(), row(r), (size_t)wpr_ * 8);
    }

private:
    int rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> w_;
};

inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_ids(std::span<const int> ids) {
    uint64_t h = 0x12345678abcdef01ULL ^ (uint64_t)ids.size();
    for (int v : ids) h = mix64(h ^ (uint64_t)(uint32_t)v);
    return h;
}

int worker_count();

// Chunked parallel loop; f(begin, end) must only touch disjoint state.
void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& f);

inline uint64_t mul_check(uint64_t a, uint64_t b) {
    unsigned __int128 p = (unsigned __int128)a * b;
    require(p <= UINT64_MAX, "group order overflow");
    return (uint64_t)p;
}

}  // namespace gqe
