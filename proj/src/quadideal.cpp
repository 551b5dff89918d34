#include "congsieve/quadideal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "congsieve/intutil.hpp"

namespace congsieve::quad {

namespace {

struct Form {
    int64_t a, b, c;  // a x^2 + b x y + c y^2
    bool operator==(const Form&) const = default;
};

// Accumulated SL_2(Z) transform; entries grow like the fundamental unit.
struct Transform {
    mpz_class m11{1}, m12{0}, m21{0}, m22{1};

    void apply_step(int64_t s) {
        // right-multiply by [[0, 1], [-1, s]]
        mpz_class n11 = -m12;
        mpz_class n12 = m11 + s * m12;
        mpz_class n21 = -m22;
        mpz_class n22 = m21 + s * m22;
        m11 = n11;
        m12 = n12;
        m21 = n21;
        m22 = n22;
    }
};

int64_t isqrt64(int64_t n) {
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Reduced: |sqrt(disc) - 2|a|| < b < sqrt(disc).
bool is_reduced(const Form& g, int64_t disc) {
    if (g.b <= 0) return false;
    if (static_cast<__int128>(g.b) * g.b >= disc) return false;
    int64_t twoa = 2 * std::llabs(g.a);
    int64_t s = g.b + twoa;
    if (static_cast<__int128>(s) * s <= disc) return false;
    int64_t d = twoa - g.b;
    if (d >= 0 && static_cast<__int128>(d) * d >= disc) return false;
    return true;
}

int64_t eval_at_mod(const std::vector<int64_t>& poly, int64_t x, int64_t q) {
    int64_t acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = ((acc * x + *it) % q + q) % q;
    return acc;
}

// One reduction/cycle step; returns the step parameter used for the
// transform bookkeeping.
Form rho(const Form& g, int64_t disc, int64_t* step_param) {
    int64_t c = g.c;
    if (c == 0) throw std::logic_error("rho: degenerate form");
    int64_t twoc = 2 * std::llabs(c);
    int64_t r0 = ((-g.b) % twoc + twoc) % twoc;
    int64_t bp;
    if (static_cast<__int128>(c) * c > disc) {
        bp = r0 <= std::llabs(c) ? r0 : r0 - twoc;
    } else {
        int64_t lo = isqrt64(disc) - twoc + 1;
        bp = lo + (((r0 - lo) % twoc) + twoc) % twoc;
    }
    int64_t s = -(g.b + bp) / (2 * c);
    if (-(g.b + bp) != s * 2 * c) throw std::logic_error("rho: step parameter not integral");
    Form out;
    out.a = c;
    out.b = bp;
    out.c = static_cast<int64_t>((static_cast<__int128>(bp) * bp - disc) / (4 * c));
    if (step_param) *step_param = s;
    return out;
}

void check_transform(const Form& g0, const Transform& t, const Form& cur, int64_t disc) {
    auto q0 = [&](const mpz_class& x, const mpz_class& y) {
        return g0.a * x * x + g0.b * x * y + g0.c * y * y;
    };
    if (q0(t.m11, t.m21) != cur.a || q0(t.m12, t.m22) != cur.c)
        throw std::logic_error("quadratic form transform drifted");
    mpz_class bb = 2 * g0.a * t.m11 * t.m12 + g0.b * (t.m11 * t.m22 + t.m12 * t.m21) +
                   2 * g0.c * t.m21 * t.m22;
    if (bb != cur.b) throw std::logic_error("quadratic form transform drifted (b)");
    if (static_cast<__int128>(cur.b) * cur.b - 4 * static_cast<__int128>(cur.a) * cur.c != disc)
        throw std::logic_error("discriminant drifted");
}

struct Element {
    mpz_class a, b;  // (a + b sqrt m)/s
};

Element mul_elements(int64_t m, int s, const Element& x, const Element& y) {
    Element out;
    mpz_class num_a = x.a * y.a + x.b * y.b * m;
    mpz_class num_b = x.a * y.b + x.b * y.a;
    if (s == 2) {
        if (num_a % 2 != 0 || num_b % 2 != 0) throw std::logic_error("element product left the order");
        out.a = num_a / 2;
        out.b = num_b / 2;
    } else {
        out.a = num_a;
        out.b = num_b;
    }
    return out;
}

mpz_class element_norm(int64_t m, int s, const Element& x) {
    mpz_class n = x.a * x.a - m * x.b * x.b;
    if (n % (s * s) != 0) throw std::logic_error("element norm not integral");
    return n / (s * s);
}

// mu = q*x + y*(b0 + sqrt(disc))/2 converted to (A + B sqrt m)/s coordinates
// for the initial form (q, b0, *).
Element column_to_element([[maybe_unused]] int64_t m, int s, int64_t q, int64_t b0, const mpz_class& x, const mpz_class& y) {
    Element e;
    if (s == 1) {
        // disc = 4m, so (b0 + sqrt(disc))/2 = b0/2 + sqrt(m)
        e.a = q * x + (b0 / 2) * y;
        e.b = y;
    } else {
        // disc = m: mu = (2qx + b0 y + y sqrt m)/2
        e.a = 2 * q * x + b0 * y;
        e.b = y;
    }
    return e;
}

struct CycleHit {
    Element element;
    int64_t form_a;  // +-1
};

// Reduce the form and traverse its cycle once, collecting a generator for
// every |a| = 1 form encountered.
std::vector<CycleHit> collect_unit_norm_hits(int64_t m, int s, int64_t disc, const Form& start) {
    Form g0 = start;
    Form cur = start;
    Transform t;
    int guard = 0;
    while (!is_reduced(cur, disc)) {
        int64_t sp;
        cur = rho(cur, disc, &sp);
        t.apply_step(sp);
        check_transform(g0, t, cur, disc);
        if (++guard > 20000) throw std::logic_error("form reduction did not converge");
    }
    std::vector<CycleHit> hits;
    Form cycle_start = cur;
    do {
        if (cur.a == 1 || cur.a == -1) {
            Element e = column_to_element(m, s, g0.a, g0.b, t.m11, t.m21);
            hits.push_back(CycleHit{std::move(e), cur.a});
        }
        int64_t sp;
        cur = rho(cur, disc, &sp);
        t.apply_step(sp);
        check_transform(g0, t, cur, disc);
        if (++guard > 2000000) throw std::logic_error("cycle traversal did not close");
    } while (!(cur == cycle_start));
    return hits;
}

void validate_m(int64_t m) {
    if (m < 2 || m > 10000) throw std::invalid_argument("quadratic field: m out of range [2, 10^4]");
    for (int64_t d = 2; d * d <= m; ++d)
        if (m % (d * d) == 0) throw std::invalid_argument("quadratic field: m must be squarefree");
}

Element abs_coords(const Element& e) {
    Element out;
    out.a = abs(e.a);
    out.b = abs(e.b);
    return out;
}

}  // namespace

int order_denominator(int64_t m) { return ((m % 4) + 4) % 4 == 1 ? 2 : 1; }

std::vector<int64_t> omega_min_poly(int64_t m) {
    if (order_denominator(m) == 2) return {-(m - 1) / 4, -1, 1};
    return {-m, 0, 1};
}

QuadWitness fundamental_unit(int64_t m) {
    validate_m(m);
    int s = order_denominator(m);
    int64_t disc = s == 2 ? m : 4 * m;
    Form principal;
    if (s == 2) principal = Form{1, 1, -static_cast<int64_t>((m - 1) / 4)};
    else principal = Form{1, 0, -m};
    auto hits = collect_unit_norm_hits(m, s, disc, principal);
    // Smallest nontrivial unit: positive coordinates, least b.
    std::optional<Element> best;
    for (auto& h : hits) {
        Element e = abs_coords(h.element);
        if (e.b == 0) continue;
        if (!best || e.b < best->b || (e.b == best->b && e.a < best->a)) best = e;
    }
    if (!best) throw std::logic_error("fundamental unit not found on the principal cycle");
    if (abs(element_norm(m, s, *best)) != 1) throw std::logic_error("unit candidate has wrong norm");
    return QuadWitness{best->a, best->b};
}

mpz_class witness_norm(int64_t m, const QuadWitness& w) {
    int s = order_denominator(m);
    mpz_class n = w.a * w.a - m * w.b * w.b;
    if (n % (s * s) != 0) throw std::invalid_argument("witness not in the maximal order");
    return abs(n) / (s * s);
}

std::optional<QuadWitness> is_principal_quadratic(int64_t m, int64_t q, int64_t omega_root) {
    validate_m(m);
    int s = order_denominator(m);
    int64_t disc = s == 2 ? m : 4 * m;

    if (q == 1) return QuadWitness{s, 0};
    if (q < 1 || q > 4000 || !is_prime64(q)) throw std::invalid_argument("ideal norm must be 1 or a prime <= 4000");
    auto poly = omega_min_poly(m);
    int64_t r = ((omega_root % q) + q) % q;
    if ((eval_at_mod(poly, r, q)) != 0)
        throw std::invalid_argument("omega_root is not a root of the order polynomial mod q");

    // Prime ideal as a form: (q, b0, c0) with b0 = -2r (s=1) or 1-2r (s=2).
    int64_t b0 = s == 1 ? -2 * r : 1 - 2 * r;
    __int128 num = static_cast<__int128>(b0) * b0 - disc;
    if (num % (4 * q) != 0) throw std::logic_error("prime ideal form construction failed");
    Form g{q, b0, static_cast<int64_t>(num / (4 * q))};

    auto hits = collect_unit_norm_hits(m, s, disc, g);
    if (hits.empty()) return std::nullopt;

    Element wit = hits.front().element;
    if (abs(element_norm(m, s, wit)) != q) throw std::logic_error("witness norm mismatch");

    // Canonicalize under the unit action: minimal |b|, then minimal a >= 0,
    // then b >= 0.
    auto eps_w = fundamental_unit(m);
    Element eps{eps_w.a, eps_w.b};
    mpz_class eps_norm = element_norm(m, s, eps);
    Element eps_inv{eps.a, -eps.b};
    if (eps_norm == -1) { eps_inv.a = -eps_inv.a; eps_inv.b = -eps_inv.b; }
    for (;;) {
        Element down = mul_elements(m, s, wit, eps_inv);
        if (abs(down.b) < abs(wit.b)) { wit = down; continue; }
        Element up = mul_elements(m, s, wit, eps);
        if (abs(up.b) < abs(wit.b)) { wit = up; continue; }
        break;
    }
    std::vector<Element> cands;
    for (const Element& e : {wit, mul_elements(m, s, wit, eps), mul_elements(m, s, wit, eps_inv)}) {
        if (abs(e.b) != abs(wit.b)) continue;
        cands.push_back(e);
        cands.push_back(Element{-e.a, -e.b});
    }
    const Element* best = nullptr;
    for (const auto& e : cands) {
        if (e.a < 0) continue;
        if (!best || e.a < best->a || (e.a == best->a && e.b > best->b)) best = &e;
    }
    if (!best) throw std::logic_error("witness canonicalization failed");
    wit = *best;

    // The generator must cut out the given prime (correct root mod q).
    auto in_ideal = [&](const Element& e) {
        // e = (a + b sqrt m)/s in omega coordinates u + v*omega:
        // s=1: u = a, v = b; s=2: v = b, u = (a - b)/2
        mpz_class u, v = e.b;
        if (s == 1) u = e.a;
        else {
            if ((e.a - e.b) % 2 != 0) throw std::logic_error("element not in the order");
            u = (e.a - e.b) / 2;
        }
        mpz_class residue = (u + v * r) % q;
        return residue == 0;
    };
    if (!in_ideal(wit)) throw std::logic_error("witness does not generate the requested prime");
    return QuadWitness{wit.a, wit.b};
}

}  // namespace congsieve::quad
