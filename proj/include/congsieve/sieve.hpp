// Hash-based congruence sieve: coverage verification for the prime-set
// family, residue hash tuples, Frobenius-canonical collision keys, and
// candidate refinement against all stored coefficients.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "congsieve/formstore.hpp"

namespace congsieve::sieve {

// 15 distinct primes, strictly increasing.
struct PrimeSet {
    std::array<int64_t, 15> primes;
};

PrimeSet make_prime_set(const std::array<int64_t, 15>& primes);

// The built-in six-set family: every pair of levels up to 10000 is coprime
// to all primes of at least one common set.
const std::vector<PrimeSet>& default_prime_sets();

struct CoverageResult {
    bool covered = true;
    int64_t witness_n = 0;  // valid when !covered
    int64_t witness_m = 0;
};

// Per-level bitmask of usable sets, then pairwise intersection over the
// distinct masks. A witness is the lexicographically least uncovered pair.
CoverageResult coverage_check(int64_t level_max, const std::vector<PrimeSet>& sets);

// The tuple of eigenvalue reductions at the primes of L, in order.
std::vector<gf::FFElement> hash_tuple(const store::NewformRecord& f, const nf::PrimeIdealHandle& h,
                                      const PrimeSet& L);

// Key canonical on Frobenius orbits: the payload is the lexicographically
// least serialization over elementwise Frobenius powers. Keys of two tuples
// are equal iff some pair of embeddings into the algebraic closure
// identifies them.
struct HashKey {
    int64_t p = 0;
    int fdeg = 0;
    std::string payload;

    auto operator<=>(const HashKey&) const = default;
};

HashKey canonical_hash_key(const std::vector<gf::FFElement>& tuple, const gf::FFieldPtr& field);

struct CongruenceCandidate {
    std::string label_f;  // lexicographically smaller label
    std::string label_g;
    int64_t p = 0;
    int handle_f = 0;  // indices into unramified_primes_above order
    int handle_g = 0;
    int twist = 0;  // Frobenius power identifying the two tuples
    int64_t refined_to = 0;

    auto sort_key() const { return std::tie(p, label_f, label_g, handle_f, handle_g, twist); }
};

// Structured skip events (index-divided primes, bad denominators, ...).
using SkipLog = std::vector<std::string>;

// One pass at a fixed (p, L): hashes every eligible form/handle and emits
// one candidate per unordered pair of distinct labels sharing a key.
std::vector<CongruenceCandidate> sieve_pass(const store::Dataset& forms, int64_t p, const PrimeSet& L,
                                            SkipLog* log = nullptr);

// Checks the congruence at every good prime up to `bound` under each viable
// twist; returns the candidate with the surviving twist recorded, or nullopt
// when no twist survives.
std::optional<CongruenceCandidate> refine(const CongruenceCandidate& c, const store::Dataset& forms,
                                          int64_t bound, SkipLog* log = nullptr);

std::string candidate_line(const CongruenceCandidate& c);
CongruenceCandidate parse_candidate_line(const std::string& line);

}  // namespace congsieve::sieve
