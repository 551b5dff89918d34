// Exact arithmetic in F_p and F_{p^k} (k <= 8), univariate polynomials over
// F_p, and deterministic factorization for the small degrees the prime
// splitting code feeds in.
//
// Extension fields use a canonical quotient-ring model: F_{p^k} is
// F_p[x]/(m) where m is the lexicographically least monic irreducible of
// degree k, coefficient lists compared constant term first. The choice is
// reproduced identically on every run and machine, so serialized residue
// data can be compared across processes.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace congsieve::gf {

// Polynomial over F_p. Coefficients constant-first, fully reduced into
// [0, p), no trailing zeros; the zero polynomial has an empty list.
struct FPoly {
    int64_t p = 0;
    std::vector<int64_t> c;

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool operator==(const FPoly&) const = default;
};

FPoly fpoly(int64_t p, std::vector<int64_t> coeffs);
FPoly fpoly_add(const FPoly& a, const FPoly& b);
FPoly fpoly_sub(const FPoly& a, const FPoly& b);
FPoly fpoly_mul(const FPoly& a, const FPoly& b);
// Quotient and remainder by a nonzero divisor.
std::pair<FPoly, FPoly> fpoly_divmod(const FPoly& a, const FPoly& b);
FPoly fpoly_gcd(FPoly a, FPoly b);  // monic gcd
FPoly fpoly_derivative(const FPoly& a);
FPoly fpoly_make_monic(const FPoly& a);
int64_t fpoly_eval(const FPoly& a, int64_t x);
bool fpoly_is_irreducible(const FPoly& a);
std::string fpoly_str(const FPoly& a);

// Monic irreducible factors with multiplicities, sorted by (degree,
// coefficient list). The product of the factors times lc(f) equals f.
std::vector<std::pair<FPoly, int>> poly_factor(const FPoly& f);

class FField;
using FFieldPtr = std::shared_ptr<const FField>;

// Element of F_{p^k}: k coefficients in [0, p), constant-first, over the
// parent's canonical modulus. Immutable in practice; all operations return
// fresh values.
struct FFElement {
    FFieldPtr parent;
    std::vector<int64_t> c;

    bool is_zero() const;
    bool operator==(const FFElement& o) const { return c == o.c; }
    bool operator!=(const FFElement& o) const { return c != o.c; }
};

class FField : public std::enable_shared_from_this<FField> {
public:
    int64_t p;
    int k;
    std::vector<int64_t> modulus;  // size k+1, monic

    uint64_t order() const;  // p^k, guaranteed to fit when used (p <= 4000, k <= 8)

    FFElement zero() const;
    FFElement one() const;
    FFElement from_int(int64_t v) const;  // image of the rational integer v
    FFElement from_coeffs(std::vector<int64_t> coeffs) const;
    FFElement generator() const;  // the class of x (equals 0 when k = 1... see impl)

    FFElement add(const FFElement& a, const FFElement& b) const;
    FFElement sub(const FFElement& a, const FFElement& b) const;
    FFElement neg(const FFElement& a) const;
    FFElement mul(const FFElement& a, const FFElement& b) const;
    FFElement inv(const FFElement& a) const;
    FFElement pow(const FFElement& a, unsigned __int128 e) const;

    // Enumeration index: sum c_j p^j. Elements are ordered by index wherever
    // a deterministic "first" choice is needed.
    uint64_t index_of(const FFElement& a) const;
    FFElement element_at(uint64_t index) const;

private:
    friend FFieldPtr ff_make(int64_t p, int k);
    mutable std::vector<std::vector<int64_t>> frob_table;  // images of x^j under y -> y^p
    void build_frobenius_table() const;
    friend FFElement frobenius(const FFElement& a);
};

// Canonical field F_{p^k}. Results are cached per (p, k); the returned
// pointer is shared and safe across threads.
FFieldPtr ff_make(int64_t p, int k);

// a^p in the parent field.
FFElement frobenius(const FFElement& a);

// Canonical embedding F_{p^m} -> F_{p^n} for m | n: sends the class of x to
// the index-least root of the source modulus in the target. Fixes F_p and is
// a ring homomorphism; composing with frobenius of the target yields every
// other embedding.
FFElement embed(const FFElement& a, const FFieldPtr& target);

// All roots in `field` of a polynomial with F_p coefficients, sorted by
// element index. Exact and deterministic.
std::vector<FFElement> poly_roots_in_field(const FPoly& f, const FFieldPtr& field);

}  // namespace congsieve::gf
