// Certification of candidate congruences by the finite coefficient
// criterion: agreement of reductions at all good primes up to the Sturm-type
// bound floor(mu(eta)/6), plus the product condition at primes exactly
// dividing one level.
#pragma once

#include <optional>

#include "congsieve/sieve.hpp"

namespace congsieve::prover {

enum class Verdict { Proved, Refuted, InsufficientData };

struct CongruenceCertificate {
    sieve::CongruenceCandidate candidate;
    std::vector<int64_t> S;    // primes exactly dividing both levels with differing signs
    int64_t eta = 0;
    int64_t sturm_bound = 0;   // floor(mu(eta)/6)
    int twist = 0;             // recorded residue-field identification (Frobenius power)
    int64_t checked_good = 0;  // primes checked under the trace condition
    int64_t checked_bad = 0;   // primes checked under the product condition
    Verdict verdict = Verdict::Refuted;
    int64_t witness_ell = 0;   // Refuted: first failing prime of the longest-surviving twist
    char witness_cond = 0;     // 'a' (trace) or 'b' (product)
    int64_t needed_bound = 0;  // InsufficientData: coefficients required up to here
};

// S and eta = lcm(N, M) * prod(S). The sign comparison at shared bad primes
// is on the stored +-1 values as rational integers.
std::pair<std::vector<int64_t>, int64_t> compute_S_eta(const store::NewformRecord& f,
                                                       const store::NewformRecord& g);

// Index of the congruence subgroup of level eta: eta * prod_{p | eta} (1 + 1/p).
int64_t mu(int64_t eta);

// Full certification. Tries every Frobenius twist; Proved on the first twist
// passing all checkable primes with the bound within reach, Refuted when
// every twist fails, InsufficientData when the bound exceeds the stored
// coefficients and no twist failed outright.
CongruenceCertificate certify(const store::NewformRecord& f, const store::NewformRecord& g,
                              const nf::PrimeIdealHandle& handle_f, const nf::PrimeIdealHandle& handle_g);

// Convenience wrapper resolving handles from a candidate.
CongruenceCertificate certify_candidate(const sieve::CongruenceCandidate& c, const store::Dataset& forms);

// Smallest good prime ell (not dividing p*N) up to search_bound for which
// X^2 - a_ell X + ell is irreducible over the residue field.
std::optional<int64_t> irreducibility_witness(const store::NewformRecord& f,
                                              const nf::PrimeIdealHandle& handle, int64_t search_bound);

std::string certificate_line(const CongruenceCertificate& cert);

}  // namespace congsieve::prover
