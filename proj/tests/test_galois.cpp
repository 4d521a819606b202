#include "doctest.h"

#include "gqe/galois.hpp"

using namespace gqe;

TEST_CASE("field construction and sizes") {
    CHECK(Field::make(3, 1)->q() == 3);
    CHECK(Field::make(3, 2)->q() == 9);
    CHECK(Field::make(5, 1)->q() == 5);
    CHECK_THROWS(Field::make(4, 1));
    CHECK_THROWS(Field::make(3, 0));
}

TEST_CASE("field axioms exhaustively for q <= 27") {
    for (auto [p, h] : {std::pair{3, 1}, {3, 2}, {5, 1}, {7, 1}, {3, 3}}) {
        auto f = Field::make(p, h);
        int q = f->q();
        for (int a = 0; a < q; ++a) {
            CHECK(f->add(a, 0) == a);
            CHECK(f->mul(a, 1) == a);
            CHECK(f->add(a, f->neg(a)) == 0);
            if (a != 0) CHECK(f->mul(a, f->inv(a)) == 1);
            CHECK(f->pow(a, q) == a);  // x^q = x
            for (int b = 0; b < q; ++b) {
                CHECK(f->add(a, b) == f->add(b, a));
                CHECK(f->mul(a, b) == f->mul(b, a));
                for (int c = 0; c < q && a < 4 && b < 4; ++c) {
                    CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
                    CHECK(f->mul(a, f->mul(b, c)) == f->mul(f->mul(a, b), c));
                }
            }
        }
    }
}

TEST_CASE("frobenius powers") {
    auto f9 = Field::make(3, 2);
    auto id = frobenius_power(f9, 0);
    for (int a = 0; a < 9; ++a) CHECK(id.apply(a) == a);
    auto s = frobenius_power(f9, 1);
    CHECK(s.order() == 2);
    for (int a = 0; a < 9; ++a) {
        CHECK(s.apply(a) == f9->pow(a, 3));
        CHECK(s.apply(s.apply(a)) == a);  // involution
    }
    // additive and multiplicative homomorphism
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) {
            CHECK(s.apply(f9->add(a, b)) == f9->add(s.apply(a), s.apply(b)));
            CHECK(s.apply(f9->mul(a, b)) == f9->mul(s.apply(a), s.apply(b)));
        }
    auto f27 = Field::make(3, 3);
    auto s27 = frobenius_power(f27, 1);
    bool involution = true;
    for (int a = 0; a < 27; ++a)
        if (s27.apply(s27.apply(a)) != a) involution = false;
    CHECK_FALSE(involution);  // sigma^2 != id on GF(27)
    CHECK(s27.order() == 3);
    CHECK_THROWS(frobenius_power(f9, 2));
}

TEST_CASE("nonsquares") {
    auto f3 = Field::make(3, 1);
    CHECK(find_nonsquare(*f3) == 2);
    auto f5 = Field::make(5, 1);
    CHECK(find_nonsquare(*f5) == 2);  // squares mod 5 are {0,1,4}
    auto f9 = Field::make(3, 2);
    int m = find_nonsquare(*f9);
    for (int y = 0; y < 9; ++y) CHECK(f9->mul(y, y) != m);
    int count = 0;
    for (int a = 1; a < 9; ++a)
        if (!f9->is_square(a)) ++count;
    CHECK(count == 4);
}

TEST_CASE("fixed subfields") {
    auto f9 = Field::make(3, 2);
    auto rep = fixed_subfield(frobenius_power(f9, 0));
    CHECK(rep.order == 9);
    rep = fixed_subfield(frobenius_power(f9, 1));
    CHECK(rep.d == 1);
    CHECK(rep.order == 3);
    CHECK(rep.mult_order == 2);
    for (int x : rep.fixed) CHECK(f9->pow(x, 3) == x);
    auto f27 = Field::make(3, 3);
    rep = fixed_subfield(frobenius_power(f27, 1));
    CHECK(rep.order == 3);
}

TEST_CASE("modulus override") {
    // x^2 + 1 is irreducible over GF(3)
    auto f = Field::make(3, 2, {1, 0});
    CHECK(f->q() == 9);
    CHECK_THROWS(Field::make(3, 2, {2, 0}));  // x^2 + 2 = (x + 1)(x + 2)
}
