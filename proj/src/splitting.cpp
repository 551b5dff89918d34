#include "congsieve/splitting.hpp"

#include <algorithm>
#include <cmath>

namespace congsieve::nf {

namespace {

mpz_class eval_int_poly(const std::vector<int64_t>& c, const mpz_class& x) {
    mpz_class acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Integer roots of a monic integer polynomial. Candidates divide the
// constant term and obey the Cauchy bound 1 + max|a_i|.
bool has_integer_root(const std::vector<int64_t>& c) {
    int64_t a0 = c.front();
    if (a0 == 0) return true;
    int64_t bound = 1;
    for (size_t i = 0; i + 1 < c.size(); ++i) bound = std::max<int64_t>(bound, std::llabs(c[i]));
    ++bound;
    auto try_root = [&](int64_t r) {
        return eval_int_poly(c, mpz_class(r)) == 0 || eval_int_poly(c, mpz_class(-r)) == 0;
    };
    uint64_t abs_a0 = static_cast<uint64_t>(std::llabs(a0));
    if (bound <= 2'000'000) {
        for (int64_t r = 1; r <= bound; ++r)
            if (abs_a0 % static_cast<uint64_t>(r) == 0 && try_root(r)) return true;
        return false;
    }
    if (abs_a0 > 1'000'000'000'000ULL)
        throw std::invalid_argument("coefficient field: constant term too large to validate");
    for (uint64_t i = 1; i * i <= abs_a0; ++i) {
        if (abs_a0 % i != 0) continue;
        if (try_root(static_cast<int64_t>(i))) return true;
        if (try_root(static_cast<int64_t>(abs_a0 / i))) return true;
    }
    return false;
}

// Factorization of a monic integer quartic into two monic integer
// quadratics (x^2+bx+c)(x^2+ex+f); by Gauss's lemma this covers every
// rational quadratic split.
bool quartic_has_quadratic_split(const std::vector<int64_t>& q) {
    int64_t a3 = q[3], a2 = q[2], a1 = q[1], a0 = q[0];
    if (a0 == 0) return true;
    uint64_t abs_a0 = static_cast<uint64_t>(std::llabs(a0));
    if (abs_a0 > 1'000'000'000'000ULL)
        throw std::invalid_argument("coefficient field: constant term too large to validate");
    std::vector<int64_t> divisors;
    for (uint64_t i = 1; i * i <= abs_a0; ++i) {
        if (abs_a0 % i != 0) continue;
        divisors.push_back(static_cast<int64_t>(i));
        divisors.push_back(static_cast<int64_t>(abs_a0 / i));
    }
    for (int64_t cpos : divisors) {
        for (int64_t c : {cpos, -cpos}) {
            int64_t f = a0 / c;
            // b + e = a3, be = a2 - c - f; check bf + ce = a1
            mpz_class m = mpz_class(a2) - c - f;
            mpz_class disc = mpz_class(a3) * a3 - 4 * m;
            if (disc < 0) continue;
            mpz_class s = sqrt(disc);
            if (s * s != disc) continue;
            for (int sign : {1, -1}) {
                mpz_class num = mpz_class(a3) + sign * s;
                if (num % 2 != 0) continue;
                mpz_class b = num / 2;
                mpz_class e = mpz_class(a3) - b;
                if (b * f + mpz_class(c) * e == a1) return true;
            }
        }
    }
    return false;
}

}  // namespace

mpz_class poly_discriminant(const std::vector<int64_t>& monic_poly) {
    int d = static_cast<int>(monic_poly.size()) - 1;
    if (d < 1 || monic_poly.back() != 1) throw std::invalid_argument("poly_discriminant: monic polynomial required");
    if (d == 1) return 1;
    // Resultant of f and f' via Bareiss elimination of the Sylvester matrix.
    std::vector<int64_t> f(monic_poly.rbegin(), monic_poly.rend());  // highest first
    std::vector<int64_t> df;
    for (int i = 0; i < d; ++i) df.push_back(monic_poly[i + 1] * (i + 1));
    std::reverse(df.begin(), df.end());  // highest first
    int n = 2 * d - 1;
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n, 0));
    for (int r = 0; r < d - 1; ++r)
        for (int j = 0; j <= d; ++j) m[r][r + j] = f[j];
    for (int r = 0; r < d; ++r)
        for (int j = 0; j <= d - 1; ++j) m[d - 1 + r][r + j] = df[j];
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[r][k] != 0) { piv = r; break; }
            if (piv < 0) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    mpz_class res = sign * m[n - 1][n - 1];
    // disc = (-1)^(d(d-1)/2) Res(f, f') for monic f
    if ((d * (d - 1) / 2) % 2 == 1) res = -res;
    return res;
}

CoeffField::CoeffField(std::vector<int64_t> poly, int64_t disc_)
    : defining_poly(std::move(poly)), disc(disc_) {
    d = static_cast<int>(defining_poly.size()) - 1;
    if (d < 1 || d > 4) throw std::invalid_argument("coefficient field: degree must be in [1, 4]");
    if (defining_poly.back() != 1) throw std::invalid_argument("coefficient field: polynomial must be monic");
    if (disc == 0) throw std::invalid_argument("coefficient field: discriminant is zero");
    if (d == 1) {
        if (defining_poly != std::vector<int64_t>{0, 1})
            throw std::invalid_argument("coefficient field: degree 1 requires the polynomial x");
    } else {
        if (has_integer_root(defining_poly))
            throw std::invalid_argument("coefficient field: defining polynomial has a rational root");
        if (d == 4 && quartic_has_quadratic_split(defining_poly))
            throw std::invalid_argument("coefficient field: quartic splits into integer quadratics");
    }
    poly_disc = poly_discriminant(defining_poly);
}

std::vector<PrimeIdealHandle> split_prime(const CoeffFieldPtr& field, int64_t p) {
    if (!is_prime64(p)) throw std::invalid_argument("split_prime: p is not prime");
    const CoeffField& K = *field;
    if (K.d > 1) {
        // p | [O_K : Z[theta]]  <=>  v_p(disc poly) > v_p(disc K)
        mpz_class tmp = abs(K.poly_disc);
        unsigned long vp_poly = mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), mpz_class(p).get_mpz_t());
        int vp_field = valuation(K.disc < 0 ? -K.disc : K.disc, p);
        if (static_cast<long>(vp_poly) != vp_field) throw index_divided_error(p);
    }
    gf::FPoly reduced = gf::fpoly(p, K.defining_poly);
    auto factors = gf::poly_factor(reduced);
    std::vector<PrimeIdealHandle> out;
    for (const auto& [g, e] : factors) {
        PrimeIdealHandle h;
        h.p = p;
        h.field = field;
        h.factor = g;
        h.e = e;
        h.f = g.degree();
        h.residue_field = gf::ff_make(p, h.f);
        auto roots = gf::poly_roots_in_field(g, h.residue_field);
        if (roots.empty()) throw std::logic_error("split_prime: factor has no root in its residue field");
        h.theta_image = roots.front();
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<PrimeIdealHandle> unramified_primes_above(const CoeffFieldPtr& field, int64_t p) {
    auto all = split_prime(field, p);
    std::erase_if(all, [](const PrimeIdealHandle& h) { return h.e != 1; });
    return all;
}

gf::FFElement reduce_eigenvalue(const EigVector& v, const PrimeIdealHandle& h) {
    const auto& F = *h.residue_field;
    if (static_cast<int>(v.size()) != h.field->d)
        throw std::invalid_argument("reduce_eigenvalue: coordinate count mismatch");
    gf::FFElement acc = F.zero();
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
        if (it->den % h.p == 0) throw denominator_error(h.p);
        int64_t den_inv = powmod64(it->den % h.p, static_cast<uint64_t>(h.p - 2), h.p);
        int64_t coord = mulmod64(((it->num % h.p) + h.p) % h.p, den_inv, h.p);
        acc = F.add(F.mul(acc, h.theta_image), F.from_int(coord));
    }
    return acc;
}

}  // namespace congsieve::nf
