// Filter cascade turning certified congruences into visibility verdicts:
// good reduction at p, analytic-rank discrepancy, principality of the source
// prime, and Tamagawa coprimality from ingested side tables.
#pragma once

#include "congsieve/prover.hpp"
#include "congsieve/quadideal.hpp"

namespace congsieve::vis {

enum class Filter { GoodReduction, RankDiscrepancy, PrincipalIdeal, Tamagawa };

const char* filter_name(Filter f);

enum class TamagawaStatus { Proved, NeedsData, Fails };

struct VisibilityVerdict {
    // Oriented pair: A is the rank-0 target, B the positive-rank source.
    std::string label_a;
    std::string label_b;
    int64_t p = 0;
    std::vector<Filter> passed;
    bool complete = false;
    Filter blocked_at = Filter::GoodReduction;  // valid when !complete
    std::string blocked_reason;
    // report fields
    std::string field_a, field_b;
    int64_t rank_a = 0, rank_b = 0;  // abelian variety ranks: degree * analytic rank
    std::string tamagawa_a = "?", tamagawa_b = "?";
};

bool filter_good_reduction(int64_t N, int64_t M, int64_t p);

// f the target (analytic rank 0), g the source (analytic rank >= 1);
// callers orient the pair both ways.
bool filter_rank(const store::NewformRecord& f, const store::NewformRecord& g);

TamagawaStatus filter_tamagawa(const std::string& label_a, const std::string& label_b,
                               const std::vector<store::TamagawaRecord>& table, int64_t p);

struct SideTables {
    std::vector<store::TamagawaRecord> tamagawa;
    std::vector<store::PrincipalityRecord> principality;
};

// Applies the cascade in order with short-circuiting; returns one verdict
// per oriented pair, sorted by (p, label_a, label_b).
std::vector<VisibilityVerdict> run_pipeline(const std::vector<prover::CongruenceCertificate>& certified,
                                            const store::Dataset& forms, const SideTables& tables);

// Human-readable table mirroring the survey layout; rows blocked on missing
// data carry an asterisk.
std::string render_report(const std::vector<VisibilityVerdict>& verdicts);

// Machine-readable line: p | A | B | status | blocked_at
std::string verdict_line(const VisibilityVerdict& v);

// Conversion of a quadratic-field prime handle to maximal-order data
// (m, omega root mod p); exposed for tests.
std::pair<int64_t, int64_t> quadratic_prime_data(const nf::PrimeIdealHandle& h);

}  // namespace congsieve::vis
