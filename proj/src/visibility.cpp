#include "congsieve/visibility.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace congsieve::vis {

const char* filter_name(Filter f) {
    switch (f) {
        case Filter::GoodReduction: return "GoodReduction";
        case Filter::RankDiscrepancy: return "RankDiscrepancy";
        case Filter::PrincipalIdeal: return "PrincipalIdeal";
        case Filter::Tamagawa: return "Tamagawa";
    }
    return "?";
}

bool filter_good_reduction(int64_t N, int64_t M, int64_t p) { return N % p != 0 && M % p != 0; }

bool filter_rank(const store::NewformRecord& f, const store::NewformRecord& g) {
    return f.analytic_rank == 0 && g.analytic_rank >= 1;
}

TamagawaStatus filter_tamagawa(const std::string& label_a, const std::string& label_b,
                               const std::vector<store::TamagawaRecord>& table, int64_t p) {
    bool needs_data = false;
    for (const std::string& label : {label_a, label_b}) {
        const store::TamagawaRecord* row = nullptr;
        for (const auto& r : table)
            if (r.label == label) row = &r;
        if (!row || !row->c_bound) {
            needs_data = true;
            continue;
        }
        if (std::gcd(*row->c_bound, p) > 1) {
            if (row->exact) return TamagawaStatus::Fails;
            needs_data = true;
        }
    }
    return needs_data ? TamagawaStatus::NeedsData : TamagawaStatus::Proved;
}

namespace {

int64_t squarefree_part_of_disc(int64_t disc) {
    return disc % 4 == 0 ? disc / 4 : disc;
}

std::string field_display(const store::NewformRecord& r) {
    if (r.degree == 1) return "Q";
    if (r.degree == 2) return "Q(sqrt " + std::to_string(squarefree_part_of_disc(r.field->disc)) + ")";
    return "deg " + std::to_string(r.degree);
}

int64_t inv_mod_ll(int64_t a, int64_t p) { return powmod64(((a % p) + p) % p, static_cast<uint64_t>(p - 2), p); }

}  // namespace

std::pair<int64_t, int64_t> quadratic_prime_data(const nf::PrimeIdealHandle& h) {
    const nf::CoeffField& K = *h.field;
    if (K.d != 2) throw std::invalid_argument("quadratic_prime_data: field is not quadratic");
    if (h.f != 1) throw std::invalid_argument("quadratic_prime_data: prime is not of degree 1");
    int64_t D = K.disc;
    if (D <= 0) throw std::invalid_argument("quadratic_prime_data: field is not real quadratic");
    int64_t m = squarefree_part_of_disc(D);
    int64_t p = h.p;
    // index t with poly_disc = t^2 * D
    mpz_class ratio = K.poly_disc / D;
    if (K.poly_disc % D != 0) throw std::logic_error("discriminant ratio not integral");
    mpz_class t = sqrt(ratio);
    if (t * t != ratio) throw std::logic_error("discriminant ratio not a square");
    int64_t t64 = mpz_class(t % p).get_si();
    if (t64 == 0) throw std::logic_error("index divisible by p should have been rejected earlier");
    int64_t a1 = K.defining_poly[1];
    int64_t rtheta = h.theta_image.c[0];
    int64_t w = (((2 * rtheta + a1) % p) + p) % p;  // a square root of poly_disc mod p
    int64_t r_sqrt_disc = mulmod64(w, inv_mod_ll(t64, p), p);
    int64_t r_sqrt_m = D % 4 == 0 ? mulmod64(r_sqrt_disc, inv_mod_ll(2, p), p) : r_sqrt_disc;
    int64_t omega_root = quad::order_denominator(m) == 2
                             ? mulmod64(((1 + r_sqrt_m) % p), inv_mod_ll(2, p), p)
                             : r_sqrt_m;
    // sanity: omega_root must satisfy the order polynomial mod p
    auto poly = quad::omega_min_poly(m);
    int64_t acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = ((acc * omega_root + *it) % p + p) % p;
    if (acc != 0) throw std::logic_error("omega root conversion failed");
    return {m, omega_root};
}

namespace {

std::optional<std::string> principality_blocked(const store::NewformRecord& B, int handle_index,
                                                int64_t p, const SideTables& tables) {
    if (B.degree == 1) return std::nullopt;  // the ideal (p) of Z
    if (B.degree == 2) {
        auto handles = nf::unramified_primes_above(B.field, p);
        if (handle_index >= static_cast<int>(handles.size()))
            throw std::invalid_argument("principality: stale handle index for " + B.label);
        const auto& h = handles[static_cast<size_t>(handle_index)];
        if (h.f == 2) return std::nullopt;  // inert: the prime is (p) itself
        auto [m, omega_root] = quadratic_prime_data(h);
        auto witness = quad::is_principal_quadratic(m, p, omega_root);
        if (!witness) return "NonPrincipal";
        return std::nullopt;
    }
    for (const auto& row : tables.principality)
        if (row.label == B.label && row.p == p) {
            if (row.flag == store::PrincipalityFlag::Principal) return std::nullopt;
            if (row.flag == store::PrincipalityFlag::NonPrincipal) return "NonPrincipal";
            return "NeedsData";
        }
    return "NeedsData";
}

std::string tamagawa_display(const std::string& label, const std::vector<store::TamagawaRecord>& table) {
    for (const auto& r : table)
        if (r.label == label) return r.c_bound ? std::to_string(*r.c_bound) : "?";
    return "?";
}

}  // namespace

std::vector<VisibilityVerdict> run_pipeline(const std::vector<prover::CongruenceCertificate>& certified,
                                            const store::Dataset& forms, const SideTables& tables) {
    std::vector<VisibilityVerdict> out;
    for (const auto& cert : certified) {
        if (cert.verdict == prover::Verdict::Refuted) continue;
        const auto& cand = cert.candidate;
        const store::NewformRecord* f = forms.find(cand.label_f);
        const store::NewformRecord* g = forms.find(cand.label_g);
        if (!f || !g) throw std::invalid_argument("pipeline: certificate labels not in dataset");

        VisibilityVerdict v;
        v.p = cand.p;

        // orientation by the rank filter
        const store::NewformRecord* A = nullptr;
        const store::NewformRecord* B = nullptr;
        int handle_b = 0;
        if (filter_rank(*f, *g)) {
            A = f;
            B = g;
            handle_b = cand.handle_g;
        } else if (filter_rank(*g, *f)) {
            A = g;
            B = f;
            handle_b = cand.handle_f;
        }
        const store::NewformRecord* ra = A ? A : f;
        const store::NewformRecord* rb = A ? B : g;
        v.label_a = ra->label;
        v.label_b = rb->label;
        v.field_a = field_display(*ra);
        v.field_b = field_display(*rb);
        v.rank_a = ra->degree * ra->analytic_rank;
        v.rank_b = rb->degree * rb->analytic_rank;
        v.tamagawa_a = tamagawa_display(ra->label, tables.tamagawa);
        v.tamagawa_b = tamagawa_display(rb->label, tables.tamagawa);

        if (!filter_good_reduction(f->level, g->level, cand.p)) {
            v.blocked_at = Filter::GoodReduction;
            v.blocked_reason = "BadReduction";
            out.push_back(std::move(v));
            continue;
        }
        v.passed.push_back(Filter::GoodReduction);

        if (!A) {
            v.blocked_at = Filter::RankDiscrepancy;
            v.blocked_reason = "NoOrientation";
            out.push_back(std::move(v));
            continue;
        }
        v.passed.push_back(Filter::RankDiscrepancy);

        if (auto blocked = principality_blocked(*B, handle_b, cand.p, tables)) {
            v.blocked_at = Filter::PrincipalIdeal;
            v.blocked_reason = *blocked;
            out.push_back(std::move(v));
            continue;
        }
        v.passed.push_back(Filter::PrincipalIdeal);

        switch (filter_tamagawa(A->label, B->label, tables.tamagawa, cand.p)) {
            case TamagawaStatus::Proved:
                v.passed.push_back(Filter::Tamagawa);
                v.complete = true;
                break;
            case TamagawaStatus::NeedsData:
                v.blocked_at = Filter::Tamagawa;
                v.blocked_reason = "NeedsData";
                break;
            case TamagawaStatus::Fails:
                v.blocked_at = Filter::Tamagawa;
                v.blocked_reason = "SharedFactor";
                break;
        }
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const VisibilityVerdict& x, const VisibilityVerdict& y) {
        return std::tie(x.p, x.label_a, x.label_b) < std::tie(y.p, y.label_a, y.label_b);
    });
    return out;
}

std::string verdict_line(const VisibilityVerdict& v) {
    std::string status = v.complete ? "Complete" : "Blocked";
    std::string blocked = v.complete ? "-" : std::string(filter_name(v.blocked_at)) + ":" + v.blocked_reason;
    return std::to_string(v.p) + " | " + v.label_a + " | " + v.label_b + " | " + status + " | " + blocked;
}

std::string render_report(const std::vector<VisibilityVerdict>& verdicts) {
    std::vector<std::array<std::string, 10>> rows;
    rows.push_back({"p", "A", "B", "K_A", "rank(A)", "c(A)", "K_B", "rank(B)", "c(B)", "status"});
    for (const auto& v : verdicts) {
        std::string p_col = std::to_string(v.p);
        if (!v.complete && v.blocked_reason == "NeedsData") p_col += "*";
        std::string status = v.complete
                                 ? "Complete"
                                 : std::string("Blocked(") + filter_name(v.blocked_at) + ", " + v.blocked_reason + ")";
        rows.push_back({p_col, v.label_a, v.label_b, v.field_a, std::to_string(v.rank_a), v.tamagawa_a,
                        v.field_b, std::to_string(v.rank_b), v.tamagawa_b, status});
    }
    std::array<size_t, 10> width{};
    for (const auto& r : rows)
        for (size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::ostringstream out;
    for (size_t ri = 0; ri < rows.size(); ++ri) {
        for (size_t i = 0; i < rows[ri].size(); ++i) {
            out << rows[ri][i] << std::string(width[i] - rows[ri][i].size(), ' ');
            out << (i + 1 < rows[ri].size() ? "  " : "");
        }
        out << "\n";
        if (ri == 0) {
            size_t total = 0;
            for (size_t w : width) total += w;
            out << std::string(total + 2 * (width.size() - 1), '-') << "\n";
        }
    }
    return out.str();
}

}  // namespace congsieve::vis
