#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "congsieve/splitting.hpp"

using namespace congsieve;
using namespace congsieve::nf;

namespace {

CoeffFieldPtr make_field(std::vector<int64_t> poly, int64_t disc) {
    return std::make_shared<CoeffField>(std::move(poly), disc);
}

const CoeffFieldPtr Q = make_field({0, 1}, 1);
const CoeffFieldPtr Qsqrt2 = make_field({-2, 0, 1}, 8);
const CoeffFieldPtr Qsqrt5 = make_field({-1, -1, 1}, 5);  // x^2 - x - 1
const CoeffFieldPtr Qcbrt = make_field({-1, -3, 0, 1}, 81);  // x^3 - 3x - 1, cyclic cubic
const CoeffFieldPtr Qquart = make_field({2, 0, -4, 0, 1}, 2048);  // x^4 - 4x^2 + 2

}  // namespace

TEST_CASE("discriminants of small polynomials") {
    CHECK(poly_discriminant({0, 1}) == 1);
    CHECK(poly_discriminant({-2, 0, 1}) == 8);
    CHECK(poly_discriminant({-1, -1, 1}) == 5);
    CHECK(poly_discriminant({-1, -3, 0, 1}) == 81);
    CHECK(poly_discriminant({2, 0, -4, 0, 1}) == 2048);
    CHECK(poly_discriminant({1, 1, 1}) == -3);
    // quadratic formula cross-check on a small grid
    for (int64_t b = -5; b <= 5; ++b)
        for (int64_t c = 1; c <= 5; ++c)
            CHECK(poly_discriminant({c, b, 1}) == b * b - 4 * c);
    // cubic formula cross-check: disc(x^3 + px + q) = -4p^3 - 27q^2
    for (int64_t p = -4; p <= 4; ++p)
        for (int64_t q = -4; q <= 4; ++q)
            CHECK(poly_discriminant({q, p, 0, 1}) == -4 * p * p * p - 27 * q * q);
}

TEST_CASE("coefficient field validation") {
    CHECK_THROWS(make_field({-4, 0, 1}, 1));       // x^2 - 4 reducible
    CHECK_THROWS(make_field({0, 0, 1}, 1));        // x^2
    CHECK_THROWS(make_field({4, 0, 0, 0, 1}, 1));  // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
    CHECK_THROWS(make_field({-2, 0, 1}, 0));       // zero discriminant
    CHECK_THROWS(make_field({1, 1}, 1));           // degree 1 must be x
    CHECK_NOTHROW(make_field({1, 0, 0, 0, 1}, 256));  // x^4 + 1 irreducible
    CHECK_NOTHROW(make_field({-6, 0, 1}, 24));
}

TEST_CASE("split_prime worked examples for x^2 - 2") {
    // split at 7
    auto h7 = split_prime(Qsqrt2, 7);
    REQUIRE(h7.size() == 2);
    std::vector<int64_t> thetas;
    for (auto& h : h7) {
        CHECK(h.e == 1);
        CHECK(h.f == 1);
        thetas.push_back(h.theta_image.c[0]);
    }
    std::sort(thetas.begin(), thetas.end());
    CHECK(thetas == std::vector<int64_t>{3, 4});

    // inert at 5
    auto h5 = split_prime(Qsqrt2, 5);
    REQUIRE(h5.size() == 1);
    CHECK(h5[0].e == 1);
    CHECK(h5[0].f == 2);

    // ramified at 2
    auto h2 = split_prime(Qsqrt2, 2);
    REQUIRE(h2.size() == 1);
    CHECK(h2[0].e == 2);
    CHECK(h2[0].f == 1);
}

TEST_CASE("split/inert/ramified classification matches quadratic residue brute force") {
    for (int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        auto hs = split_prime(Qsqrt2, p);
        bool two_is_qr = false;
        for (int64_t r = 0; r < p; ++r)
            if ((r * r) % p == 2 % p) two_is_qr = true;
        if (p == 2) continue;
        if (two_is_qr) {
            CHECK(hs.size() == 2);
        } else {
            REQUIRE(hs.size() == 1);
            CHECK(hs[0].f == 2);
        }
    }
}

TEST_CASE("unramified_primes_above") {
    CHECK(unramified_primes_above(Qsqrt2, 2).empty());
    auto hq = unramified_primes_above(Q, 13);
    REQUIRE(hq.size() == 1);
    CHECK(hq[0].e == 1);
    CHECK(hq[0].f == 1);
    CHECK(unramified_primes_above(Qsqrt2, 7).size() == 2);
}

TEST_CASE("index-divided primes are refused") {
    // Z[sqrt 5] has index 2 in the maximal order of Q(sqrt 5)
    auto bad = make_field({-5, 0, 1}, 5);
    CHECK_THROWS_AS(split_prime(bad, 2), index_divided_error);
    CHECK_NOTHROW(split_prime(bad, 11));
    CHECK_NOTHROW(split_prime(bad, 3));
}

TEST_CASE("sum of e*f equals degree across fields and primes up to 500") {
    auto primes = primes_up_to(500);
    for (const auto& K : {Q, Qsqrt2, Qsqrt5, Qcbrt, Qquart}) {
        for (int64_t p : primes) {
            std::vector<PrimeIdealHandle> hs;
            try {
                hs = split_prime(K, p);
            } catch (const index_divided_error&) {
                continue;
            }
            int total = 0;
            for (auto& h : hs) {
                total += h.e * h.f;
                // theta_image is a root of the defining polynomial
                const auto& F = *h.residue_field;
                auto acc = F.zero();
                for (auto it = K->defining_poly.rbegin(); it != K->defining_poly.rend(); ++it)
                    acc = F.add(F.mul(acc, h.theta_image), F.from_int(*it));
                CHECK(acc.is_zero());
            }
            CHECK(total == K->d);
        }
    }
}

TEST_CASE("reduce_eigenvalue worked examples") {
    auto hs = split_prime(Qsqrt2, 7);
    const PrimeIdealHandle* h3 = nullptr;
    for (auto& h : hs)
        if (h.theta_image.c[0] == 3) h3 = &h;
    REQUIRE(h3 != nullptr);

    EigVector constant{rat(5), rat(0)};
    CHECK(reduce_eigenvalue(constant, *h3) == h3->residue_field->from_int(5));

    EigVector theta{rat(0), rat(1)};
    CHECK(reduce_eigenvalue(theta, *h3) == h3->residue_field->from_int(3));

    EigVector half{rat(1, 2), rat(0)};
    CHECK(reduce_eigenvalue(half, *h3) == h3->residue_field->from_int(4));

    EigVector bad{rat(1, 7), rat(0)};
    CHECK_THROWS_AS(reduce_eigenvalue(bad, *h3), denominator_error);
}

TEST_CASE("reduce_eigenvalue is a ring homomorphism") {
    std::mt19937_64 rng(99);
    for (const auto& K : {Qsqrt2, Qsqrt5}) {
        for (int64_t p : {7, 11, 13, 17, 19, 23}) {
            auto hs = unramified_primes_above(K, p);
            for (auto& h : hs) {
                for (int trial = 0; trial < 20; ++trial) {
                    auto rnd = [&] { return rat(static_cast<int64_t>(rng() % 41) - 20,
                                                 1 + static_cast<int64_t>(rng() % 5)); };
                    EigVector v{rnd(), rnd()}, w{rnd(), rnd()};
                    bool ok = true;
                    for (auto& x : {v[0], v[1], w[0], w[1]})
                        if (x.den % p == 0) ok = false;
                    if (!ok) continue;
                    EigVector sum{rat_add(v[0], w[0]), rat_add(v[1], w[1])};
                    const auto& F = *h.residue_field;
                    CHECK(reduce_eigenvalue(sum, h) == F.add(reduce_eigenvalue(v, h), reduce_eigenvalue(w, h)));
                    // theta * (c0 + c1 theta) = c1*m + (c0 + c1*a) theta for x^2 + ax - ... derive
                    // generally for x^2 + a1 x + a0: theta^2 = -a1 theta - a0
                    int64_t a0 = K->defining_poly[0], a1 = K->defining_poly[1];
                    EigVector theta_v{rat_mul(rat(-a0), v[1]), rat_add(v[0], rat_mul(rat(-a1), v[1]))};
                    CHECK(reduce_eigenvalue(theta_v, h) == F.mul(h.theta_image, reduce_eigenvalue(v, h)));
                }
            }
        }
    }
}

TEST_CASE("conjugate coordinates swap between the handles of a split prime") {
    // For x^2 - m, conjugation sends (c0, c1) to (c0, -c1); reducing the
    // conjugate at one handle equals reducing the original at the other.
    for (int64_t p : {7, 17, 23, 31}) {
        auto hs = split_prime(Qsqrt2, p);
        if (hs.size() != 2) continue;
        std::mt19937_64 rng(static_cast<uint64_t>(p));
        for (int trial = 0; trial < 10; ++trial) {
            EigVector v{rat(static_cast<int64_t>(rng() % 19) - 9), rat(static_cast<int64_t>(rng() % 19) - 9)};
            EigVector conj{v[0], rat_neg(v[1])};
            CHECK(reduce_eigenvalue(conj, hs[0]) == reduce_eigenvalue(v, hs[1]));
            CHECK(reduce_eigenvalue(conj, hs[1]) == reduce_eigenvalue(v, hs[0]));
        }
    }
}
