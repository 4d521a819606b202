#pragma once

#include <memory>
#include <vector>

#include "gqe/common.hpp"

namespace gqe {

// Exact arithmetic in GF(p^h), q <= 3^5.  Elements are indices 0..q-1 with
// index = sum c_i p^i over the coefficient vector (c_0 constant term) of the
// canonical polynomial representative mod the modulus.
class Field {
public:
    static std::shared_ptr<const Field> make(int p, int h);
    static std::shared_ptr<const Field> make(int p, int h, const std::vector<int>& modulus);

    int p() const { return p_; }
    int h() const { return h_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return mod_; }

    int add(int a, int b) const { return add_[a * q_ + b]; }
    int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int inv(int a) const {
        require(a != 0, "division by zero in GF(" + std::to_string(q_) + ")");
        return inv_[a];
    }
    int div(int a, int b) const { return mul(a, inv(b)); }
    int pow(int a, long long e) const;
    int frob(int a) const { return frob_[a]; }      // x -> x^p
    int frob_k(int a, int k) const;                 // x -> x^(p^k)
    bool is_square(int a) const { return sq_[a]; }

    std::vector<int> coeffs(int a) const;
    // Canonical order: lexicographic on (c_0, ..., c_{h-1}).
    int canon_rank(int a) const { return crank_[a]; }
    int element_of_rank(int r) const { return by_rank_[r]; }

private:
    Field(int p, int h, std::vector<int> modulus);
    int p_, h_, q_;
    std::vector<int> mod_;
    std::vector<uint16_t> add_, mul_;
    std::vector<uint16_t> neg_, inv_, frob_;
    std::vector<uint8_t> sq_;
    std::vector<uint16_t> crank_, by_rank_;
};

using FieldPtr = std::shared_ptr<const Field>;

struct FieldAut {
    FieldPtr f;
    int k = 0;  // x -> x^(p^k), 0 <= k < h
    int apply(int a) const { return f->frob_k(a, k); }
    bool is_identity() const { return k == 0; }
    int order() const;
};

FieldAut frobenius_power(const FieldPtr& f, int k);

// Smallest nonsquare in canonical order; q must be odd.
int find_nonsquare(const Field& f);

struct SubfieldReport {
    int d = 0;                  // fixed subfield is GF(p^d), d = gcd(k, h)
    long long order = 0;        // p^d
    long long mult_order = 0;   // p^d - 1
    std::vector<int> fixed;     // the fixed elements, canonical order
};

SubfieldReport fixed_subfield(const FieldAut& a);

}  // namespace gqe
