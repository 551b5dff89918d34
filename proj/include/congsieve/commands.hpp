// Batch commands wiring the library into reproducible file-to-file runs.
// Result files are byte-identical across runs and worker counts.
#pragma once

#include <iosfwd>

#include "congsieve/curves.hpp"
#include "congsieve/logging.hpp"
#include "congsieve/visibility.hpp"

namespace congsieve::cli {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string dataset_path;
    std::string tamagawa_path;
    std::string curves_path;
    std::string principality_path;
    int64_t p_min = 5;
    int64_t p_max = 4000;
    std::vector<sieve::PrimeSet> sets = sieve::default_prime_sets();
    int64_t refine_bound = 997;
    int64_t level_max = 10000;
    std::string out_dir = ".";
    int jobs = 1;
};

// Exit codes shared by every command: 0 success, 1 domain failure with a
// report, 2 usage/config, 3 data validation.
int cmd_cover(const RunConfig& config, std::ostream& out);
int cmd_sieve(const RunConfig& config);
int cmd_certify(const RunConfig& config, const std::string& candidate_file);
int cmd_match(const RunConfig& config);
int cmd_visibility(const RunConfig& config, const std::string& certificate_file);

// Prime-set file: one set of 15 primes per line, whitespace or comma
// separated.
std::vector<sieve::PrimeSet> load_prime_sets(const std::string& path);

// Certificate-line round trip used by cmd_visibility; handle indices are
// re-derived from the dataset since the line format does not carry them.
prover::CongruenceCertificate parse_certificate_line(const std::string& line);

}  // namespace congsieve::cli
