// Decomposition of rational primes in coefficient fields of degree <= 4 and
// reduction of eigenvalue vectors into residue fields.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "congsieve/gfpoly.hpp"
#include "congsieve/intutil.hpp"

namespace congsieve::nf {

// Raised when p divides the index [O_K : Z[theta]]; the factorization of the
// defining polynomial mod p would misreport ramification data, so callers
// skip the prime and log it.
struct index_divided_error : std::runtime_error {
    int64_t p;
    explicit index_divided_error(int64_t p_)
        : std::runtime_error("prime divides the order index: p=" + std::to_string(p_)), p(p_) {}
};

// Raised when an eigenvalue coordinate has denominator divisible by p; the
// power basis is not p-integral for this form and the form is skipped at p.
struct denominator_error : std::runtime_error {
    int64_t p;
    explicit denominator_error(int64_t p_)
        : std::runtime_error("eigenvalue denominator divisible by p=" + std::to_string(p_)), p(p_) {}
};

// Number field K = Q[x]/(defining_poly), degree d <= 4. `disc` is the
// discriminant of the maximal order, supplied by the dataset; `poly_disc` is
// computed at construction. Irreducibility over Q is validated.
class CoeffField {
public:
    CoeffField(std::vector<int64_t> defining_poly, int64_t disc);

    std::vector<int64_t> defining_poly;  // monic, constant-first, degree d
    int64_t disc;
    int d;
    mpz_class poly_disc;

    bool operator==(const CoeffField& o) const {
        return defining_poly == o.defining_poly && disc == o.disc;
    }
};

using CoeffFieldPtr = std::shared_ptr<const CoeffField>;

struct PrimeIdealHandle {
    int64_t p = 0;
    CoeffFieldPtr field;
    gf::FPoly factor;  // irreducible factor of the defining polynomial mod p
    int e = 0;         // ramification index
    int f = 0;         // residue degree
    gf::FFieldPtr residue_field;
    gf::FFElement theta_image;  // index-least root of `factor` in the residue field
};

// Coordinates of an eigenvalue in the power basis 1, theta, ..., theta^(d-1).
using EigVector = std::vector<Rational>;

// Prime ideals above p, ordered by the canonical factor order of the
// defining polynomial mod p. Throws index_divided_error when p divides the
// index obstruction (v_p(poly disc) > v_p(field disc)).
std::vector<PrimeIdealHandle> split_prime(const CoeffFieldPtr& field, int64_t p);

// The e = 1 sublist of split_prime.
std::vector<PrimeIdealHandle> unramified_primes_above(const CoeffFieldPtr& field, int64_t p);

// Sum of c_j * theta_image^j in the residue field, with rational coordinates
// reduced mod p. Throws denominator_error when p divides some denominator.
gf::FFElement reduce_eigenvalue(const EigVector& v, const PrimeIdealHandle& h);

// Discriminant of a monic integer polynomial (degree <= 8), exact.
mpz_class poly_discriminant(const std::vector<int64_t>& monic_poly);

}  // namespace congsieve::nf
