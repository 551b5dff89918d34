#include "congsieve/prover.hpp"

#include <algorithm>
#include <numeric>

namespace congsieve::prover {

namespace {

std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: positive integer required");
    std::vector<std::pair<int64_t, int>> out;
    for (int64_t d = 2; static_cast<__int128>(d) * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) { n /= d; ++e; }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// The stored +-1 value at a prime exactly dividing the level.
int64_t bad_prime_sign(const store::NewformRecord& r, int64_t ell) {
    const nf::EigVector* v = r.eigenvalue(ell);
    if (!v)
        throw std::invalid_argument("missing eigenvalue at bad prime " + std::to_string(ell) +
                                    " for " + r.label);
    return (*v)[0].num;
}

}  // namespace

std::pair<std::vector<int64_t>, int64_t> compute_S_eta(const store::NewformRecord& f,
                                                       const store::NewformRecord& g) {
    int64_t N = f.level, M = g.level;
    std::vector<int64_t> S;
    for (const auto& [ell, eN] : factorize(N)) {
        if (eN != 1 || M % ell != 0) continue;
        if ((M / ell) % ell == 0) continue;
        if (bad_prime_sign(f, ell) != bad_prime_sign(g, ell)) S.push_back(ell);
    }
    int64_t eta = std::lcm(N, M);
    for (int64_t ell : S) {
        if (eta > INT64_MAX / ell) throw std::overflow_error("eta overflow");
        eta *= ell;
    }
    return {S, eta};
}

int64_t mu(int64_t eta) {
    if (eta < 1) throw std::invalid_argument("mu: positive integer required");
    int64_t result = 1;
    for (const auto& [p, e] : factorize(eta)) {
        for (int i = 0; i < e - 1; ++i) result *= p;
        result *= p + 1;
    }
    return result;
}

CongruenceCertificate certify(const store::NewformRecord& f, const store::NewformRecord& g,
                              const nf::PrimeIdealHandle& handle_f, const nf::PrimeIdealHandle& handle_g) {
    if (handle_f.e != 1 || handle_g.e != 1)
        throw std::invalid_argument("certify: handles must be unramified");
    if (handle_f.p != handle_g.p) throw std::invalid_argument("certify: handles lie over different primes");

    CongruenceCertificate cert;
    cert.candidate.label_f = f.label;
    cert.candidate.label_g = g.label;
    cert.candidate.p = handle_f.p;

    // Residue fields of different size can never be identified.
    if (handle_f.f != handle_g.f) {
        cert.verdict = Verdict::Refuted;
        return cert;
    }
    int fdeg = handle_f.f;

    auto [S, eta] = compute_S_eta(f, g);
    cert.S = S;
    cert.eta = eta;
    int64_t B = mu(eta) / 6;
    cert.sturm_bound = B;

    const int64_t N = f.level, M = g.level;
    auto vlNM = [&](int64_t ell) {
        int v = 0;
        if (N % ell == 0) v += valuation(N, ell);
        if (M % ell == 0) v += valuation(M, ell);
        return v;
    };

    int64_t data_bound = std::min(f.coeff_bound, g.coeff_bound);
    int64_t scan_bound = std::min(B, data_bound);

    const auto& F = *handle_f.residue_field;
    std::vector<bool> alive(static_cast<size_t>(fdeg), true);
    std::vector<int64_t> first_fail(static_cast<size_t>(fdeg), 0);
    std::vector<char> fail_cond(static_cast<size_t>(fdeg), 0);
    int alive_count = fdeg;

    for (int64_t ell : primes_up_to(scan_bound)) {
        int v = vlNM(ell);
        if (v >= 2) continue;
        const nf::EigVector* vf = f.eigenvalue(ell);
        const nf::EigVector* vg = g.eigenvalue(ell);
        if (!vf || !vg)
            throw std::invalid_argument("certify: eigenvalue missing at " + std::to_string(ell));
        gf::FFElement rf = nf::reduce_eigenvalue(*vf, handle_f);
        gf::FFElement rg = nf::reduce_eigenvalue(*vg, handle_g);
        char cond;
        gf::FFElement target;
        if (v == 0) {
            cond = 'a';  // trace agreement
            ++cert.checked_good;
        } else {
            cond = 'b';  // product condition at a prime exactly dividing one level
            ++cert.checked_bad;
            target = F.from_int(ell + 1);
        }
        gf::FFElement cur = rg;
        for (int j = 0; j < fdeg; ++j) {
            if (alive[static_cast<size_t>(j)]) {
                bool ok = (cond == 'a') ? (rf == cur) : (F.mul(rf, cur) == target);
                if (!ok) {
                    alive[static_cast<size_t>(j)] = false;
                    first_fail[static_cast<size_t>(j)] = ell;
                    fail_cond[static_cast<size_t>(j)] = cond;
                    --alive_count;
                }
            }
            cur = gf::frobenius(cur);
        }
        if (alive_count == 0) break;
    }

    if (alive_count == 0) {
        cert.verdict = Verdict::Refuted;
        // Report the failure of the twist that survived longest.
        size_t best = 0;
        for (size_t j = 1; j < first_fail.size(); ++j)
            if (first_fail[j] > first_fail[best]) best = j;
        cert.twist = static_cast<int>(best);
        cert.witness_ell = first_fail[best];
        cert.witness_cond = fail_cond[best];
        return cert;
    }

    for (int j = 0; j < fdeg; ++j)
        if (alive[static_cast<size_t>(j)]) {
            cert.twist = j;
            break;
        }
    cert.candidate.twist = cert.twist;

    if (B > data_bound) {
        // Exact only if some required prime lies beyond the data.
        for (int64_t n = data_bound + 1; n <= B; ++n) {
            if (!is_prime64(n)) continue;
            int v = vlNM(n);
            if (v >= 2) continue;
            cert.verdict = Verdict::InsufficientData;
            cert.needed_bound = B;
            return cert;
        }
    }
    cert.verdict = Verdict::Proved;
    return cert;
}

CongruenceCertificate certify_candidate(const sieve::CongruenceCandidate& c, const store::Dataset& forms) {
    const store::NewformRecord* f = forms.find(c.label_f);
    const store::NewformRecord* g = forms.find(c.label_g);
    if (!f || !g) throw std::invalid_argument("certify: candidate labels not in dataset");
    auto hf = nf::unramified_primes_above(f->field, c.p);
    auto hg = nf::unramified_primes_above(g->field, c.p);
    if (c.handle_f >= static_cast<int>(hf.size()) || c.handle_g >= static_cast<int>(hg.size()))
        throw std::invalid_argument("certify: stale handle index in candidate");
    auto cert = certify(*f, *g, hf[static_cast<size_t>(c.handle_f)], hg[static_cast<size_t>(c.handle_g)]);
    int twist = cert.twist;
    cert.candidate = c;
    cert.twist = twist;
    return cert;
}

namespace {

bool quadratic_has_root(const gf::FField& F, const gf::FFElement& a, const gf::FFElement& b) {
    // roots of X^2 - aX + b
    unsigned __int128 q = 1;
    for (int i = 0; i < F.k; ++i) q *= static_cast<uint64_t>(F.p);
    if (q <= 4096) {
        for (uint64_t i = 0; i < static_cast<uint64_t>(q); ++i) {
            auto x = F.element_at(i);
            if (F.add(F.sub(F.mul(x, x), F.mul(a, x)), b).is_zero()) return true;
        }
        return false;
    }
    // odd characteristic: no roots iff the discriminant is a non-square
    gf::FFElement disc = F.sub(F.mul(a, a), F.mul(F.from_int(4), b));
    if (disc.is_zero()) return true;
    return F.pow(disc, (q - 1) / 2) == F.one();
}

}  // namespace

std::optional<int64_t> irreducibility_witness(const store::NewformRecord& f,
                                              const nf::PrimeIdealHandle& handle, int64_t search_bound) {
    if (search_bound > f.coeff_bound)
        throw std::invalid_argument("irreducibility_witness: search bound exceeds stored coefficients");
    const auto& F = *handle.residue_field;
    for (int64_t ell : primes_up_to(search_bound)) {
        if (ell == handle.p || f.level % ell == 0) continue;
        const nf::EigVector* v = f.eigenvalue(ell);
        if (!v) continue;
        gf::FFElement a = nf::reduce_eigenvalue(*v, handle);
        if (!quadratic_has_root(F, a, F.from_int(ell))) return ell;
    }
    return std::nullopt;
}

std::string certificate_line(const CongruenceCertificate& cert) {
    std::string verdict;
    switch (cert.verdict) {
        case Verdict::Proved: verdict = "Proved"; break;
        case Verdict::Refuted: verdict = "Refuted"; break;
        case Verdict::InsufficientData: verdict = "InsufficientData"; break;
    }
    std::string s_str;
    for (size_t i = 0; i < cert.S.size(); ++i) {
        if (i) s_str += ";";
        s_str += std::to_string(cert.S[i]);
    }
    if (s_str.empty()) s_str = "-";
    std::string witness = "-";
    if (cert.verdict == Verdict::Refuted && cert.witness_ell)
        witness = "ell=" + std::to_string(cert.witness_ell) + ";cond=3" + cert.witness_cond;
    else if (cert.verdict == Verdict::InsufficientData)
        witness = "need<=" + std::to_string(cert.needed_bound);
    return verdict + " | " + std::to_string(cert.candidate.p) + " | " + cert.candidate.label_f + "," +
           cert.candidate.label_g + " | " + s_str + " | " + std::to_string(cert.eta) + " | " +
           std::to_string(cert.sturm_bound) + " | " + std::to_string(cert.twist) + " | " + witness;
}

}  // namespace congsieve::prover
