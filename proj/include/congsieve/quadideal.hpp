// Principality testing for degree-1 primes of real quadratic maximal
// orders, with explicit generator witnesses.
//
// Ideals are carried as indefinite binary quadratic forms of the field
// discriminant; reduction and cycle traversal decide equivalence to the
// principal class, and the accumulated SL_2(Z) transform converts a class
// witness into an ideal generator. Coefficient growth along the traversal
// mirrors the fundamental unit, hence the GMP witnesses.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace congsieve::quad {

// Generator (a + b*sqrt(m))/s of a principal ideal, s the denominator of
// the maximal order (2 when m = 1 mod 4, else 1).
struct QuadWitness {
    mpz_class a;
    mpz_class b;
};

struct QuadIdeal {
    int64_t m = 0;
    int64_t norm = 0;
    std::optional<QuadWitness> witness;
};

// 2 when m = 1 mod 4, else 1.
int order_denominator(int64_t m);

// Minimal polynomial of the maximal-order generator omega:
// x^2 - x - (m-1)/4 when m = 1 mod 4, else x^2 - m. Constant-first.
std::vector<int64_t> omega_min_poly(int64_t m);

// Fundamental unit (a + b*sqrt(m))/s, normalized to value > 1 with b > 0.
QuadWitness fundamental_unit(int64_t m);

// Decides principality of the degree-1 prime of norm q whose omega-image is
// omega_root (a root of omega_min_poly mod q); q = 1 means the unit ideal.
// Returns the canonical generator on success: minimal |b| among associates,
// then minimal a >= 0. Requires 2 <= m <= 10^4 squarefree.
std::optional<QuadWitness> is_principal_quadratic(int64_t m, int64_t q, int64_t omega_root);

// |a^2 - m b^2| / s^2 of a witness; exposed for checks.
mpz_class witness_norm(int64_t m, const QuadWitness& w);

}  // namespace congsieve::quad
