#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "congsieve/quadideal.hpp"
#include "congsieve/intutil.hpp"

using namespace congsieve;
using namespace congsieve::quad;

namespace {

// Root of the omega polynomial mod q such that u + v*omega with
// u + v*root = 0 mod q lies in the prime cut out by (u0, v0).
int64_t omega_root_for_element(int64_t m, int64_t q, int64_t u0, int64_t v0) {
    // the element (u0 + v0 omega) generates a prime above q; omega maps to
    // -u0/v0 mod q
    int64_t v = ((v0 % q) + q) % q;
    int64_t u = ((u0 % q) + q) % q;
    if (v == 0) throw std::invalid_argument("element has rational part only");
    int64_t vinv = powmod64(v, static_cast<uint64_t>(q - 2), q);
    return mulmod64((q - u) % q, vinv, q);
}

}  // namespace

TEST_CASE("order basics") {
    CHECK(order_denominator(2) == 1);
    CHECK(order_denominator(5) == 2);
    CHECK(order_denominator(10) == 1);
    CHECK(omega_min_poly(2) == std::vector<int64_t>{-2, 0, 1});
    CHECK(omega_min_poly(5) == std::vector<int64_t>{-1, -1, 1});
}

TEST_CASE("fundamental units of small fields match the classical values") {
    auto u2 = fundamental_unit(2);  // 1 + sqrt 2
    CHECK(u2.a == 1);
    CHECK(u2.b == 1);
    auto u3 = fundamental_unit(3);  // 2 + sqrt 3
    CHECK(u3.a == 2);
    CHECK(u3.b == 1);
    auto u5 = fundamental_unit(5);  // (1 + sqrt 5)/2
    CHECK(u5.a == 1);
    CHECK(u5.b == 1);
    auto u10 = fundamental_unit(10);  // 3 + sqrt 10
    CHECK(u10.a == 3);
    CHECK(u10.b == 1);
    auto u61 = fundamental_unit(61);  // (39 + 5 sqrt 61)/2
    CHECK(u61.a == 39);
    CHECK(u61.b == 5);
    // unit sanity for a range of m: norm +-1, value nontrivial
    for (int64_t m = 2; m <= 200; ++m) {
        bool squarefree = true;
        for (int64_t d = 2; d * d <= m; ++d)
            if (m % (d * d) == 0) squarefree = false;
        if (!squarefree) continue;
        auto u = fundamental_unit(m);
        CHECK(witness_norm(m, u) == 1);
        CHECK(u.b > 0);
    }
}

TEST_CASE("the prime above 7 containing 3 + sqrt 2 is principal with witness (3, 1)") {
    // omega = sqrt 2 maps to 4 (so that 3 + sqrt 2 = 0 mod the prime)
    auto w = is_principal_quadratic(2, 7, 4);
    REQUIRE(w.has_value());
    CHECK(w->a == 3);
    CHECK(w->b == 1);
    CHECK(witness_norm(2, *w) == 7);

    // the conjugate prime gets the conjugate witness
    auto wc = is_principal_quadratic(2, 7, 3);
    REQUIRE(wc.has_value());
    CHECK(wc->a == 3);
    CHECK(wc->b == -1);
}

TEST_CASE("unit ideal is principal with witness (s, 0)") {
    auto w1 = is_principal_quadratic(2, 1, 0);
    REQUIRE(w1.has_value());
    CHECK(w1->a == 1);
    CHECK(w1->b == 0);
    auto w5 = is_principal_quadratic(5, 1, 0);
    REQUIRE(w5.has_value());
    CHECK(w5->a == 2);
    CHECK(w5->b == 0);
    CHECK(witness_norm(5, *w5) == 1);
}

TEST_CASE("the prime above 2 in Q(sqrt 10) is not principal") {
    // x^2 - 10 = x^2 mod 2: omega root 0
    auto w = is_principal_quadratic(10, 2, 0);
    CHECK(!w.has_value());
    // likewise above 3 (classical: class number 2)
    auto w3 = is_principal_quadratic(10, 3, 1);  // 1^2 = 1 = 10 mod 3
    CHECK(!w3.has_value());
}

TEST_CASE("class-number-one fields: every degree-1 prime is principal") {
    for (int64_t m : {2, 3, 5, 6, 7, 11, 13, 17, 21, 29, 33, 37, 41, 57, 73}) {
        auto poly = omega_min_poly(m);
        int found = 0;
        for (int64_t q : primes_up_to(200)) {
            for (int64_t r = 0; r < q && found < 8; ++r) {
                int64_t val = ((r * r + poly[1] * r + poly[0]) % q + q) % q;
                if (val != 0) continue;
                auto w = is_principal_quadratic(m, q, r);
                REQUIRE(w.has_value());
                CHECK(witness_norm(m, *w) == q);
                ++found;
            }
        }
        CHECK(found > 0);
    }
}

TEST_CASE("random principal primes: witness recovered and validated") {
    std::mt19937_64 rng(5577);
    int done = 0;
    while (done < 200) {
        int64_t m = 2 + static_cast<int64_t>(rng() % 150);
        bool squarefree = true;
        for (int64_t d = 2; d * d <= m; ++d)
            if (m % (d * d) == 0) squarefree = false;
        if (!squarefree) continue;
        int s = order_denominator(m);
        // random element u + v*omega with small coordinates
        int64_t u = static_cast<int64_t>(rng() % 41) - 20;
        int64_t v = 1 + static_cast<int64_t>(rng() % 5);
        // norm in omega coordinates
        auto poly = omega_min_poly(m);
        // omega^2 = -poly[1] omega - poly[0]
        // N(u + v omega) = u^2 - poly[1] u v + poly[0] v^2
        int64_t norm = u * u - poly[1] * u * v + poly[0] * v * v;
        int64_t q = std::llabs(norm);
        if (q < 2 || q > 4000 || !is_prime64(q)) continue;
        if (v % q == 0) continue;
        int64_t root = omega_root_for_element(m, q, u, v);
        auto w = is_principal_quadratic(m, q, root);
        REQUIRE(w.has_value());
        CHECK(witness_norm(m, *w) == q);
        // the witness lies in the same prime: u' + v' root = 0 mod q
        mpz_class wu, wv = w->b;
        if (s == 1) wu = w->a;
        else wu = (w->a - w->b) / 2;
        mpz_class residue = (wu + wv * root) % q;
        CHECK(residue == 0);
        ++done;
    }
}

TEST_CASE("unit-multiplied witnesses canonicalize to the same representative") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        int64_t m = 2 + static_cast<int64_t>(rng() % 80);
        bool squarefree = true;
        for (int64_t d = 2; d * d <= m; ++d)
            if (m % (d * d) == 0) squarefree = false;
        if (!squarefree) continue;
        auto poly = omega_min_poly(m);
        for (int64_t q : primes_up_to(100)) {
            std::optional<int64_t> root;
            for (int64_t r = 0; r < q; ++r)
                if (((r * r + poly[1] * r + poly[0]) % q + q) % q == 0) { root = r; break; }
            if (!root) continue;
            auto w1 = is_principal_quadratic(m, q, *root);
            auto w2 = is_principal_quadratic(m, q, *root);
            CHECK(w1.has_value() == w2.has_value());
            if (w1) {
                CHECK(w1->a == w2->a);
                CHECK(w1->b == w2->b);
            }
            break;
        }
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS(is_principal_quadratic(12, 7, 0));    // not squarefree
    CHECK_THROWS(is_principal_quadratic(1, 7, 0));     // out of range
    CHECK_THROWS(is_principal_quadratic(10001, 7, 0)); // out of range
    CHECK_THROWS(is_principal_quadratic(2, 7, 1));     // 1 is not a root of x^2-2 mod 7
    CHECK_THROWS(is_principal_quadratic(2, 9, 3));     // 9 is not prime
}
