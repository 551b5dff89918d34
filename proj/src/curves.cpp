#include "congsieve/curves.hpp"

#include <algorithm>
#include <cmath>

namespace congsieve::curves {

namespace {

// 4f + h^2: the right-hand side after completing the square (odd residue
// characteristic only).
std::vector<int64_t> squared_model(const store::CurveRecord& c) {
    const std::vector<int64_t>& h = c.h_coeffs.empty() ? std::vector<int64_t>{0} : c.h_coeffs;
    std::vector<int64_t> F(std::max(c.f_coeffs.size(), 2 * h.size() - 1), 0);
    for (size_t i = 0; i < c.f_coeffs.size(); ++i) F[i] = 4 * c.f_coeffs[i];
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = 0; j < h.size(); ++j) F[i + j] += h[i] * h[j];
    while (F.size() > 1 && F.back() == 0) F.pop_back();
    return F;
}

}  // namespace

bool good_reduction(const store::CurveRecord& curve, int64_t ell) {
    auto F = squared_model(curve);
    gf::FPoly reduced = gf::fpoly(ell, F);
    if (reduced.degree() < 5) return false;
    gf::FPoly d = gf::fpoly_derivative(reduced);
    if (d.is_zero()) return false;
    return gf::fpoly_gcd(reduced, d).degree() == 0;
}

int64_t count_points(const store::CurveRecord& curve, int64_t ell, int ext) {
    if (ell == 2) throw std::invalid_argument("count_points: ell = 2 is unsupported");
    if (!is_prime64(ell)) throw std::invalid_argument("count_points: ell must be prime");
    if (ext != 1 && ext != 2) throw std::invalid_argument("count_points: ext must be 1 or 2");
    double qd = std::pow(static_cast<double>(ell), ext);
    if (qd > 1e6) throw std::invalid_argument("count_points: field size exceeds the 10^6 cap");
    if (!good_reduction(curve, ell))
        throw std::invalid_argument("count_points: bad reduction at " + std::to_string(ell));

    auto Fz = squared_model(curve);
    gf::FPoly reduced = gf::fpoly(ell, Fz);
    int deg = reduced.degree();

    auto field = gf::ff_make(ell, ext);
    uint64_t q = field->order();

    // quadratic character table over the enumeration index
    std::vector<int8_t> chi(q, -1);
    chi[0] = 0;
    for (uint64_t i = 1; i < q; ++i) {
        auto z = field->element_at(i);
        chi[field->index_of(field->mul(z, z))] = 1;
    }

    std::vector<gf::FFElement> coeffs;
    for (int64_t c : reduced.c) coeffs.push_back(field->from_int(c));

    int64_t count = 0;
    for (uint64_t i = 0; i < q; ++i) {
        auto x = field->element_at(i);
        auto acc = field->zero();
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = field->add(field->mul(acc, x), *it);
        count += 1 + chi[field->index_of(acc)];
    }
    // points at infinity on the smooth model
    if (deg == 5) {
        count += 1;
    } else {
        int8_t lc_chi = chi[field->index_of(coeffs.back())];
        count += 1 + lc_chi;  // 2 when the leading coefficient is a square, else 0
    }
    return count;
}

std::pair<int64_t, int64_t> trace_norm(int64_t n1, int64_t n2, int64_t ell) {
    if ((n1 * n1 + n2) % 2 != 0)
        throw std::logic_error("trace_norm: parity violation signals a miscount");
    int64_t tr = ell + 1 - n1;
    int64_t nm = (n1 * n1 + n2) / 2 - (ell + 1) * n1 - ell;
    // Weil bounds for genus 2; violations mean corrupted counts, never data
    // to be filtered.
    double s1 = 4 * std::sqrt(static_cast<double>(ell));
    double s2 = 4 * static_cast<double>(ell);
    if (std::llabs(n1 - (ell + 1)) > static_cast<int64_t>(std::floor(s1)) ||
        std::llabs(n2 - (ell * ell + 1)) > static_cast<int64_t>(std::floor(s2)))
        throw std::logic_error("trace_norm: count outside the Weil bounds");
    return {tr, nm};
}

MatchResult match_form(const store::CurveRecord& curve,
                       const std::vector<const store::NewformRecord*>& candidates,
                       const std::vector<int64_t>& primes) {
    MatchResult res;
    for (const auto* cand : candidates) {
        if (cand->degree != 2)
            throw std::invalid_argument("match_form: candidate " + cand->label + " is not of degree 2");
        for (int64_t ell : primes)
            if (cand->level % ell == 0)
                throw std::invalid_argument("match_form: probe prime divides the level of " + cand->label);
    }
    std::vector<std::pair<int64_t, int64_t>> targets;
    for (int64_t ell : primes) {
        int64_t n1 = count_points(curve, ell, 1);
        int64_t n2 = count_points(curve, ell, 2);
        targets.push_back(trace_norm(n1, n2, ell));
        res.counts.push_back(PointCount{ell, n1, n2});
    }
    for (const auto* cand : candidates) {
        int64_t a1 = cand->field->defining_poly[1];
        int64_t a0 = cand->field->defining_poly[0];
        bool ok = true;
        for (size_t i = 0; i < primes.size() && ok; ++i) {
            const nf::EigVector* v = cand->eigenvalue(primes[i]);
            if (!v) { ok = false; break; }
            // Tr = 2c0 - a1 c1, Nm = c0^2 - a1 c0 c1 + a0 c1^2 over x^2 + a1 x + a0
            const Rational& c0 = (*v)[0];
            const Rational& c1 = (*v)[1];
            Rational tr = rat_add(rat_mul(rat(2), c0), rat_mul(rat(-a1), c1));
            Rational nm = rat_add(rat_add(rat_mul(c0, c0), rat_mul(rat(-a1), rat_mul(c0, c1))),
                                  rat_mul(rat(a0), rat_mul(c1, c1)));
            if (!(tr == rat(targets[i].first)) || !(nm == rat(targets[i].second))) ok = false;
        }
        if (ok) res.survivors.push_back(cand->label);
    }
    if (res.survivors.size() == 1) res.status = MatchStatus::Match;
    else if (res.survivors.size() > 1) res.status = MatchStatus::Ambiguous;
    else res.status = MatchStatus::NoMatch;
    return res;
}

}  // namespace congsieve::curves
