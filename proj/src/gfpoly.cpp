#include "congsieve/gfpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>

#include "congsieve/intutil.hpp"

namespace congsieve::gf {

namespace {

int64_t mod_reduce(int64_t v, int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

int64_t inv_mod(int64_t a, int64_t p) {
    a = mod_reduce(a, p);
    if (a == 0) throw std::domain_error("division by zero in F_p");
    int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        int64_t q = r / new_r;
        std::swap(t -= q * new_t, new_t);
        std::swap(r -= q * new_r, new_r);
    }
    return mod_reduce(t, p);
}

void strip_trailing(std::vector<int64_t>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

FPoly fpoly(int64_t p, std::vector<int64_t> coeffs) {
    if (p < 2) throw std::invalid_argument("fpoly: characteristic must be >= 2");
    for (auto& v : coeffs) v = mod_reduce(v, p);
    strip_trailing(coeffs);
    return FPoly{p, std::move(coeffs)};
}

FPoly fpoly_add(const FPoly& a, const FPoly& b) {
    std::vector<int64_t> c(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
    return fpoly(a.p, std::move(c));
}

FPoly fpoly_sub(const FPoly& a, const FPoly& b) {
    std::vector<int64_t> c(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) c[i] -= b.c[i];
    return fpoly(a.p, std::move(c));
}

FPoly fpoly_mul(const FPoly& a, const FPoly& b) {
    if (a.is_zero() || b.is_zero()) return FPoly{a.p, {}};
    std::vector<int64_t> c(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            c[i + j] = (c[i + j] + a.c[i] * b.c[j]) % a.p;
    return fpoly(a.p, std::move(c));
}

std::pair<FPoly, FPoly> fpoly_divmod(const FPoly& a, const FPoly& b) {
    if (b.is_zero()) throw std::domain_error("fpoly_divmod: zero divisor");
    const int64_t p = a.p;
    if (a.degree() < b.degree()) return {FPoly{p, {}}, a};
    std::vector<int64_t> rem = a.c;
    std::vector<int64_t> quot(a.c.size() - b.c.size() + 1, 0);
    int64_t lc_inv = inv_mod(b.c.back(), p);
    for (int i = static_cast<int>(rem.size()) - 1; i >= b.degree(); --i) {
        int64_t coef = mod_reduce(rem[i] * lc_inv, p);
        if (coef == 0) continue;
        quot[i - b.degree()] = coef;
        for (size_t j = 0; j < b.c.size(); ++j) {
            size_t k = i - b.degree() + j;
            rem[k] = mod_reduce(rem[k] - coef * b.c[j], p);
        }
    }
    strip_trailing(rem);
    strip_trailing(quot);
    return {FPoly{p, std::move(quot)}, FPoly{p, std::move(rem)}};
}

FPoly fpoly_make_monic(const FPoly& a) {
    if (a.is_zero() || a.c.back() == 1) return a;
    int64_t s = inv_mod(a.c.back(), a.p);
    std::vector<int64_t> c = a.c;
    for (auto& v : c) v = mod_reduce(v * s, a.p);
    return FPoly{a.p, std::move(c)};
}

FPoly fpoly_gcd(FPoly a, FPoly b) {
    while (!b.is_zero()) {
        FPoly r = fpoly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return fpoly_make_monic(a);
}

FPoly fpoly_derivative(const FPoly& a) {
    if (a.degree() < 1) return FPoly{a.p, {}};
    std::vector<int64_t> c(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) c[i - 1] = mod_reduce(a.c[i] * static_cast<int64_t>(i), a.p);
    strip_trailing(c);
    return FPoly{a.p, std::move(c)};
}

int64_t fpoly_eval(const FPoly& a, int64_t x) {
    x = mod_reduce(x, a.p);
    int64_t acc = 0;
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = mod_reduce(acc * x + *it, a.p);
    return acc;
}

std::string fpoly_str(const FPoly& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a.c[i]);
    }
    return s + "]";
}

namespace {

// x^e mod m over F_p[x], binary exponentiation.
FPoly fpoly_x_powmod(uint64_t e, const FPoly& m) {
    FPoly base = fpoly_divmod(fpoly(m.p, {0, 1}), m).second;
    FPoly acc = fpoly(m.p, {1});
    while (e) {
        if (e & 1) acc = fpoly_divmod(fpoly_mul(acc, base), m).second;
        base = fpoly_divmod(fpoly_mul(base, base), m).second;
        e >>= 1;
    }
    return acc;
}

// s(t) mod m by Horner; used for Frobenius composition s(x) -> s(x^p).
FPoly fpoly_compose_mod(const FPoly& s, const FPoly& t, const FPoly& m) {
    FPoly acc{m.p, {}};
    for (auto it = s.c.rbegin(); it != s.c.rend(); ++it) {
        acc = fpoly_divmod(fpoly_mul(acc, t), m).second;
        acc = fpoly_add(acc, fpoly(m.p, {*it}));
    }
    return acc;
}

}  // namespace

bool fpoly_is_irreducible(const FPoly& a) {
    int d = a.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    const int64_t p = a.p;
    FPoly f = fpoly_make_monic(a);
    FPoly x = fpoly(p, {0, 1});
    FPoly xp = fpoly_x_powmod(static_cast<uint64_t>(p), f);
    // frob[i] = x^(p^i) mod f
    std::vector<FPoly> frob(d + 1);
    frob[1] = xp;
    for (int i = 2; i <= d; ++i) frob[i] = fpoly_compose_mod(frob[i - 1], xp, f);
    if (!(frob[d] == fpoly_divmod(x, f).second)) return false;
    for (int q = 2; q <= d; ++q) {
        if (d % q != 0 || !is_prime64(q)) continue;
        FPoly g = fpoly_gcd(fpoly_sub(frob[d / q], x), f);
        if (g.degree() > 0) return false;
    }
    return true;
}

namespace {

// Splits a monic quartic with no roots in F_p into two monic irreducible
// quadratics, or reports it irreducible. Coefficient search over the single
// free parameter b: x^4+a3x^3+a2x^2+a1x+a0 = (x^2+bx+c)(x^2+dx+e) forces
// d = a3-b, c+e = a2-bd, and the rest is linear in c unless b = d.
std::optional<std::pair<FPoly, FPoly>> quartic_split(const FPoly& r) {
    const int64_t p = r.p;
    const int64_t a3 = r.c[3], a2 = r.c[2], a1 = r.c[1], a0 = r.c[0];
    for (int64_t b = 0; b < p; ++b) {
        int64_t d = mod_reduce(a3 - b, p);
        int64_t s = mod_reduce(a2 - b * d % p, p);  // c + e
        if (b != d) {
            int64_t c = mod_reduce((a1 - b * s % p) % p * inv_mod(d - b, p), p);
            int64_t e = mod_reduce(s - c, p);
            if (mod_reduce(c * e, p) == a0)
                return std::make_pair(fpoly(p, {c, b, 1}), fpoly(p, {e, d, 1}));
        } else {
            if (mod_reduce(b * s, p) != a1) continue;
            for (int64_t t = 0; t < p; ++t) {
                if (mod_reduce(t * t - s * t % p + a0, p) != 0) continue;
                int64_t e = mod_reduce(s - t, p);
                return std::make_pair(fpoly(p, {t, b, 1}), fpoly(p, {e, d, 1}));
            }
        }
    }
    return std::nullopt;
}

bool fpoly_less(const FPoly& a, const FPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.c < b.c;
}

// f(x) = U(x^p) -> U. Valid only when every exponent with a nonzero
// coefficient is a multiple of p (i.e. f' = 0).
FPoly contract_p(const FPoly& f) {
    std::vector<int64_t> u;
    for (size_t i = 0; i < f.c.size(); i += static_cast<size_t>(f.p)) u.push_back(f.c[i]);
    return fpoly(f.p, std::move(u));
}

// Deterministic Berlekamp split of a squarefree product of r >= 2
// irreducibles of equal degree. Small inputs only (degree <= 8).
void berlekamp_equal_degree(const FPoly& prod, int d, std::vector<FPoly>& out) {
    const int64_t p = prod.p;
    int n = prod.degree();
    if (n == d) {
        out.push_back(prod);
        return;
    }
    // Frobenius matrix on F_p[x]/(prod): column j is x^(jp) mod prod.
    FPoly xp = fpoly_x_powmod(static_cast<uint64_t>(p), prod);
    std::vector<std::vector<int64_t>> m(n, std::vector<int64_t>(n, 0));
    FPoly col = fpoly(p, {1});
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= col.degree(); ++i) m[i][j] = col.c[i];
        m[j][j] = mod_reduce(m[j][j] - 1, p);
        if (j + 1 < n) col = fpoly_divmod(fpoly_mul(col, xp), prod).second;
    }
    // Null space of (Q - I) by Gauss-Jordan.
    std::vector<int> pivot_col(n, -1);
    int rank = 0;
    for (int c = 0; c < n && rank < n; ++c) {
        int pr = -1;
        for (int r = rank; r < n; ++r)
            if (m[r][c] != 0) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(m[rank], m[pr]);
        int64_t s = inv_mod(m[rank][c], p);
        for (int j = 0; j < n; ++j) m[rank][j] = mod_reduce(m[rank][j] * s, p);
        for (int r = 0; r < n; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            int64_t f = m[r][c];
            for (int j = 0; j < n; ++j) m[r][j] = mod_reduce(m[r][j] - f * m[rank][j], p);
        }
        pivot_col[rank] = c;
        ++rank;
    }
    for (int free_c = 0; free_c < n; ++free_c) {
        bool is_pivot = false;
        for (int r = 0; r < rank; ++r)
            if (pivot_col[r] == free_c) { is_pivot = true; break; }
        if (is_pivot) continue;
        std::vector<int64_t> v(n, 0);
        v[free_c] = 1;
        for (int r = 0; r < rank; ++r) v[pivot_col[r]] = mod_reduce(-m[r][free_c], p);
        FPoly vp = fpoly(p, v);
        if (vp.degree() < 1) continue;  // constant vector: the trivial subalgebra element
        for (int64_t c = 0; c < p; ++c) {
            FPoly g = fpoly_gcd(fpoly_sub(vp, fpoly(p, {c})), prod);
            if (g.degree() > 0 && g.degree() < n) {
                berlekamp_equal_degree(g, d, out);
                berlekamp_equal_degree(fpoly_divmod(prod, g).first, d, out);
                return;
            }
        }
    }
    throw std::logic_error("berlekamp: no splitting element found");
}

// Irreducible factors of a squarefree monic polynomial with no linear
// factors; distinct-degree split first, then equal-degree refinement.
void factor_squarefree(FPoly sf, std::vector<FPoly>& out) {
    const int64_t p = sf.p;
    FPoly x = fpoly(p, {0, 1});
    for (int d = 2; d <= sf.degree() / 2; ++d) {
        FPoly xq = fpoly_divmod(x, sf).second;
        FPoly xp = fpoly_x_powmod(static_cast<uint64_t>(p), sf);
        for (int i = 0; i < d; ++i) xq = fpoly_compose_mod(xq, xp, sf);
        FPoly bucket = fpoly_gcd(fpoly_sub(xq, x), sf);
        if (bucket.degree() == 0) continue;
        berlekamp_equal_degree(bucket, d, out);
        sf = fpoly_divmod(sf, bucket).first;
    }
    if (sf.degree() > 0) out.push_back(sf);
}

void factor_monic(FPoly work, int outer_mult, std::vector<std::pair<FPoly, int>>& acc) {
    if (work.degree() <= 0) return;
    const int64_t p = work.p;
    // Linear factors by root search, with multiplicities.
    for (int64_t r = 0; r < p && work.degree() > 0; ++r) {
        int mult = 0;
        FPoly lin = fpoly(p, {mod_reduce(-r, p), 1});
        while (work.degree() > 0 && fpoly_eval(work, r) == 0) {
            work = fpoly_divmod(work, lin).first;
            ++mult;
        }
        if (mult) acc.emplace_back(lin, outer_mult * mult);
    }
    if (work.degree() <= 0) return;
    if (work.degree() <= 3) {
        // No roots, degree 2 or 3: irreducible.
        acc.emplace_back(work, outer_mult);
        return;
    }
    if (work.degree() == 4) {
        if (auto split = quartic_split(work)) {
            if (split->first == split->second) {
                acc.emplace_back(split->first, outer_mult * 2);
            } else {
                acc.emplace_back(split->first, outer_mult);
                acc.emplace_back(split->second, outer_mult);
            }
        } else {
            acc.emplace_back(work, outer_mult);
        }
        return;
    }
    // Degrees 5..8: squarefree decomposition, then DDF/EDF.
    FPoly deriv = fpoly_derivative(work);
    if (deriv.is_zero()) {
        factor_monic(contract_p(work), outer_mult * static_cast<int>(p), acc);
        return;
    }
    FPoly g = fpoly_gcd(work, deriv);
    FPoly sf = g.degree() == 0 ? work : fpoly_divmod(work, g).first;
    std::vector<FPoly> irr;
    factor_squarefree(sf, irr);
    for (const FPoly& w : irr) {
        int v = 0;
        for (;;) {
            auto [q, r] = fpoly_divmod(work, w);
            if (!r.is_zero()) break;
            work = q;
            ++v;
        }
        acc.emplace_back(w, outer_mult * v);
    }
    if (work.degree() > 0) factor_monic(work, outer_mult, acc);
}

}  // namespace

std::vector<std::pair<FPoly, int>> poly_factor(const FPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("poly_factor: zero polynomial");
    if (f.degree() > 8) throw std::invalid_argument("poly_factor: degree > 8 unsupported");
    std::vector<std::pair<FPoly, int>> acc;
    factor_monic(fpoly_make_monic(f), 1, acc);
    std::sort(acc.begin(), acc.end(),
              [](const auto& a, const auto& b) { return fpoly_less(a.first, b.first); });
    std::vector<std::pair<FPoly, int>> merged;
    for (auto& fm : acc) {
        if (!merged.empty() && merged.back().first == fm.first) merged.back().second += fm.second;
        else merged.push_back(std::move(fm));
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Fields

bool FFElement::is_zero() const {
    for (int64_t v : c)
        if (v) return false;
    return true;
}

uint64_t FField::order() const {
    unsigned __int128 q = 1;
    for (int i = 0; i < k; ++i) q *= static_cast<uint64_t>(p);
    if (q > UINT64_MAX) throw std::overflow_error("field order exceeds 64 bits");
    return static_cast<uint64_t>(q);
}

FFElement FField::zero() const {
    return FFElement{shared_from_this(), std::vector<int64_t>(static_cast<size_t>(k), 0)};
}

FFElement FField::one() const { return from_int(1); }

FFElement FField::from_int(int64_t v) const {
    auto e = zero();
    e.c[0] = mod_reduce(v, p);
    return e;
}

FFElement FField::from_coeffs(std::vector<int64_t> coeffs) const {
    if (coeffs.size() > static_cast<size_t>(k)) throw std::invalid_argument("too many coefficients");
    coeffs.resize(static_cast<size_t>(k), 0);
    for (auto& v : coeffs) v = mod_reduce(v, p);
    return FFElement{shared_from_this(), std::move(coeffs)};
}

FFElement FField::generator() const {
    auto e = zero();
    if (k >= 2) e.c[1] = 1;
    return e;  // class of x; reduces to 0 in the prime field (modulus x)
}

FFElement FField::add(const FFElement& a, const FFElement& b) const {
    auto e = zero();
    for (int i = 0; i < k; ++i) e.c[i] = mod_reduce(a.c[i] + b.c[i], p);
    return e;
}

FFElement FField::sub(const FFElement& a, const FFElement& b) const {
    auto e = zero();
    for (int i = 0; i < k; ++i) e.c[i] = mod_reduce(a.c[i] - b.c[i], p);
    return e;
}

FFElement FField::neg(const FFElement& a) const {
    auto e = zero();
    for (int i = 0; i < k; ++i) e.c[i] = mod_reduce(-a.c[i], p);
    return e;
}

FFElement FField::mul(const FFElement& a, const FFElement& b) const {
    std::vector<int64_t> prod(2 * static_cast<size_t>(k) - 1, 0);
    for (int i = 0; i < k; ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a.c[i] * b.c[j]) % p;
    }
    // Reduce by the monic modulus.
    for (int i = static_cast<int>(prod.size()) - 1; i >= k; --i) {
        int64_t coef = prod[i];
        if (coef == 0) continue;
        prod[i] = 0;
        for (int j = 0; j < k; ++j)
            prod[i - k + j] = mod_reduce(prod[i - k + j] - coef * modulus[j], p);
    }
    prod.resize(static_cast<size_t>(k));
    return FFElement{shared_from_this(), std::move(prod)};
}

FFElement FField::inv(const FFElement& a) const {
    if (a.is_zero()) throw std::domain_error("inverse of zero");
    FPoly A = fpoly(p, a.c);
    FPoly M = fpoly(p, modulus);
    // Extended Euclid over F_p[x].
    FPoly r0 = M, r1 = A;
    FPoly s0 = fpoly(p, {}), s1 = fpoly(p, {1});
    while (!r1.is_zero()) {
        auto [q, r] = fpoly_divmod(r0, r1);
        FPoly s = fpoly_sub(s0, fpoly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    // r0 = gcd (a nonzero constant), s0 * A = r0 mod M
    int64_t scale = inv_mod(r0.c.at(0), p);
    std::vector<int64_t> out(static_cast<size_t>(k), 0);
    for (size_t i = 0; i < s0.c.size(); ++i) out[i] = mod_reduce(s0.c[i] * scale, p);
    return FFElement{shared_from_this(), std::move(out)};
}

FFElement FField::pow(const FFElement& a, unsigned __int128 e) const {
    FFElement acc = one();
    FFElement base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

uint64_t FField::index_of(const FFElement& a) const {
    uint64_t idx = 0;
    for (int i = k - 1; i >= 0; --i) idx = idx * static_cast<uint64_t>(p) + static_cast<uint64_t>(a.c[i]);
    return idx;
}

FFElement FField::element_at(uint64_t index) const {
    auto e = zero();
    for (int i = 0; i < k; ++i) {
        e.c[i] = static_cast<int64_t>(index % static_cast<uint64_t>(p));
        index /= static_cast<uint64_t>(p);
    }
    if (index) throw std::out_of_range("element index out of range");
    return e;
}

void FField::build_frobenius_table() const {
    FPoly M = fpoly(p, modulus);
    FPoly xp = fpoly_x_powmod(static_cast<uint64_t>(p), M);
    frob_table.assign(static_cast<size_t>(k), std::vector<int64_t>(static_cast<size_t>(k), 0));
    FPoly pw = fpoly(p, {1});
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i <= pw.degree(); ++i) frob_table[j][i] = pw.c[i];
        if (j + 1 < k) pw = fpoly_divmod(fpoly_mul(pw, xp), M).second;
    }
}

FFElement frobenius(const FFElement& a) {
    const FField& F = *a.parent;
    std::vector<int64_t> out(static_cast<size_t>(F.k), 0);
    for (int j = 0; j < F.k; ++j) {
        if (a.c[j] == 0) continue;
        for (int i = 0; i < F.k; ++i)
            out[i] = (out[i] + a.c[j] * F.frob_table[j][i]) % F.p;
    }
    return FFElement{a.parent, std::move(out)};
}

FFieldPtr ff_make(int64_t p, int k) {
    if (!is_prime64(p)) throw std::invalid_argument("ff_make: p is not prime");
    if (k < 1 || k > 8) throw std::invalid_argument("ff_make: degree out of range [1, 8]");

    static std::mutex mtx;
    static std::map<std::pair<int64_t, int>, FFieldPtr> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({p, k});
        if (it != cache.end()) return it->second;
    }

    std::vector<int64_t> modulus;
    if (k == 1) {
        modulus = {0, 1};
    } else {
        // Lexicographically least monic irreducible, coefficient lists
        // compared constant term first; odometer with c_0 most significant.
        // Candidates with zero constant term are divisible by x, so the
        // enumeration starts at c_0 = 1.
        std::vector<int64_t> digits(static_cast<size_t>(k), 0);
        digits[0] = 1;
        for (;;) {
            std::vector<int64_t> cand(digits);
            cand.push_back(1);
            if (fpoly_is_irreducible(FPoly{p, cand})) {
                modulus = std::move(cand);
                break;
            }
            int pos = k - 1;
            while (pos >= 0 && digits[pos] == p - 1) digits[pos--] = 0;
            if (pos < 0) throw std::logic_error("no irreducible polynomial found");
            ++digits[pos];
        }
    }

    auto field = std::make_shared<FField>();
    field->p = p;
    field->k = k;
    field->modulus = std::move(modulus);
    field->build_frobenius_table();

    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.emplace(std::make_pair(p, k), field);
    return it->second;
}

// ---------------------------------------------------------------------------
// Root finding over extension fields

namespace {

// Dense polynomial over an FField; coefficients constant-first.
using FFPoly = std::vector<FFElement>;

void ffp_strip(FFPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

FFPoly ffp_mul(const FField& F, const FFPoly& a, const FFPoly& b) {
    if (a.empty() || b.empty()) return {};
    FFPoly c(a.size() + b.size() - 1, F.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
    }
    ffp_strip(c);
    return c;
}

FFPoly ffp_sub(const FField& F, const FFPoly& a, const FFPoly& b) {
    FFPoly c(std::max(a.size(), b.size()), F.zero());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] = F.sub(c[i], b[i]);
    ffp_strip(c);
    return c;
}

FFPoly ffp_mod(const FField& F, FFPoly a, const FFPoly& m) {
    ffp_strip(a);
    FFElement lead_inv = F.inv(m.back());
    while (a.size() >= m.size()) {
        FFElement coef = F.mul(a.back(), lead_inv);
        size_t shift = a.size() - m.size();
        if (!coef.is_zero())
            for (size_t j = 0; j + 1 < m.size(); ++j)
                a[shift + j] = F.sub(a[shift + j], F.mul(coef, m[j]));
        a.pop_back();  // leading term cancels exactly
        ffp_strip(a);
    }
    return a;
}

FFPoly ffp_divexact(const FField& F, FFPoly a, const FFPoly& m) {
    ffp_strip(a);
    FFPoly quot(a.size() >= m.size() ? a.size() - m.size() + 1 : 0, F.zero());
    FFElement lead_inv = F.inv(m.back());
    while (a.size() >= m.size()) {
        FFElement coef = F.mul(a.back(), lead_inv);
        size_t shift = a.size() - m.size();
        quot[shift] = coef;
        if (!coef.is_zero())
            for (size_t j = 0; j + 1 < m.size(); ++j)
                a[shift + j] = F.sub(a[shift + j], F.mul(coef, m[j]));
        a.pop_back();
        ffp_strip(a);
    }
    ffp_strip(quot);
    return quot;
}

FFPoly ffp_gcd(const FField& F, FFPoly a, FFPoly b) {
    while (!b.empty()) {
        FFPoly r = ffp_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && !(a.back() == F.one())) {
        FFElement s = F.inv(a.back());
        for (auto& e : a) e = F.mul(e, s);
    }
    return a;
}

FFPoly ffp_powmod(const FField& F, FFPoly base, unsigned __int128 e, const FFPoly& m) {
    FFPoly acc{F.one()};
    base = ffp_mod(F, std::move(base), m);
    while (e) {
        if (e & 1) acc = ffp_mod(F, ffp_mul(F, acc, base), m);
        base = ffp_mod(F, ffp_mul(F, base, base), m);
        e >>= 1;
    }
    return acc;
}

FFElement ffp_eval(const FField& F, const FFPoly& a, const FFElement& x) {
    FFElement acc = F.zero();
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = F.add(F.mul(acc, x), *it);
    return acc;
}

// Coefficient-wise Frobenius followed by x -> x^p, i.e. s(x) -> s(x)^p mod m.
FFPoly ffp_frob_compose(const FField& F, const FFPoly& s, const FFPoly& xp, const FFPoly& m) {
    FFPoly acc;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        acc = ffp_mod(F, ffp_mul(F, acc, xp), m);
        FFElement fc = frobenius(*it);
        if (acc.empty()) acc.push_back(fc);
        else acc[0] = F.add(acc[0], fc);
        ffp_strip(acc);
    }
    return acc;
}

bool element_index_less(const FFElement& a, const FFElement& b) {
    for (int i = static_cast<int>(a.c.size()) - 1; i >= 0; --i) {
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    }
    return false;
}

// All roots of a monic squarefree product of linear factors over F.
void ffp_split_linear(const FField& F, FFPoly g, std::vector<FFElement>& roots) {
    for (;;) {
        if (g.size() <= 1) return;
        if (g.size() == 2) {
            roots.push_back(F.neg(g[0]));
            return;
        }
        // Character sweep over shifts in enumeration order.
        unsigned __int128 q = 1;
        for (int i = 0; i < F.k; ++i) q *= static_cast<uint64_t>(F.p);
        bool split_done = false;
        uint64_t sweep_limit = UINT64_MAX;
        if (q <= 4096) sweep_limit = static_cast<uint64_t>(q);
        for (uint64_t ci = 0; ci < sweep_limit; ++ci) {
            FFElement c = F.element_at(ci);
            FFElement at = ffp_eval(F, g, F.neg(c));
            if (at.is_zero()) {
                roots.push_back(F.neg(c));
                g = ffp_divexact(F, g, FFPoly{c, F.one()});
                if (g.size() <= 1) return;
                split_done = true;
                break;
            }
            if (F.p == 2) continue;  // brute-force loop above finds all roots when p = 2
            FFPoly shifted{c, F.one()};
            FFPoly w = ffp_powmod(F, shifted, (q - 1) / 2, g);
            FFPoly wm1 = ffp_sub(F, w, FFPoly{F.one()});
            FFPoly d = ffp_gcd(F, wm1, g);
            if (!d.empty() && d.size() > 1 && d.size() < g.size()) {
                FFPoly rest = ffp_divexact(F, g, d);
                ffp_split_linear(F, d, roots);
                ffp_split_linear(F, rest, roots);
                return;
            }
        }
        if (!split_done) throw std::logic_error("root splitting failed to converge");
    }
}

}  // namespace

std::vector<FFElement> poly_roots_in_field(const FPoly& f, const FFieldPtr& field) {
    const FField& F = *field;
    if (f.p != F.p) throw std::invalid_argument("characteristic mismatch");
    if (f.is_zero()) throw std::invalid_argument("roots of zero polynomial");
    FFPoly g;
    for (int64_t c : f.c) g.push_back(F.from_int(c));
    ffp_strip(g);
    if (g.size() <= 1) return {};
    if (!(g.back() == F.one())) {
        FFElement s = F.inv(g.back());
        for (auto& e : g) e = F.mul(e, s);
    }
    // Restrict to the part splitting over F: gcd(x^q - x, g).
    FFPoly x{F.zero(), F.one()};
    FFPoly xq = ffp_mod(F, x, g);
    FFPoly xp_mod = ffp_powmod(F, x, static_cast<unsigned __int128>(static_cast<uint64_t>(F.p)), g);
    for (int i = 0; i < F.k; ++i) xq = ffp_frob_compose(F, xq, xp_mod, g);
    FFPoly lin = ffp_gcd(F, ffp_sub(F, xq, x), g);
    std::vector<FFElement> roots;
    ffp_split_linear(F, lin, roots);
    std::sort(roots.begin(), roots.end(), element_index_less);
    return roots;
}

FFElement embed(const FFElement& a, const FFieldPtr& target) {
    const FField& S = *a.parent;
    const FField& T = *target;
    if (S.p != T.p) throw std::invalid_argument("embed: characteristic mismatch");
    if (T.k % S.k != 0) throw std::invalid_argument("embed: source degree does not divide target degree");
    if (S.k == T.k) return target->from_coeffs(a.c);
    FPoly src_modulus = fpoly(S.p, S.modulus);
    auto roots = poly_roots_in_field(src_modulus, target);
    if (roots.empty()) throw std::logic_error("embed: source modulus has no root in target");
    const FFElement& beta = roots.front();
    FFElement acc = T.zero();
    for (int j = S.k - 1; j >= 0; --j)
        acc = T.add(T.mul(acc, beta), T.from_int(a.c[j]));
    return acc;
}

}  // namespace congsieve::gf
