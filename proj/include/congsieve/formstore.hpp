// Newform dataset parsing, validation and persistence, plus the side tables
// for curves, Tamagawa bounds and principality flags.
//
// Dataset format (UTF-8, line oriented, '#' comments and blank lines
// ignored):
//   line 1:  congsieve-dataset v1
//   body:    label | N | d | poly_coeffs | field_disc | analytic_rank |
//            coeff_bound | ell:c0/e0,c1/e1,...;ell:...
// Polynomial coefficients are constant-first and include the leading 1;
// eigenvalue coordinates are reduced fractions in the power basis.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "congsieve/splitting.hpp"

namespace congsieve::store {

struct parse_diagnostic {
    size_t line = 0;
    std::string message;
};

// A file with any invalid record fails atomically; every diagnostic names
// its line.
struct parse_error : std::runtime_error {
    std::vector<parse_diagnostic> diagnostics;
    explicit parse_error(std::vector<parse_diagnostic> diags);
};

// One Galois orbit of newforms.
struct NewformRecord {
    std::string label;
    int64_t level = 0;
    int degree = 0;
    nf::CoeffFieldPtr field;
    int64_t analytic_rank = 0;
    int64_t coeff_bound = 0;
    std::vector<std::pair<int64_t, nf::EigVector>> eigenvalues;  // sorted by prime

    const nf::EigVector* eigenvalue(int64_t ell) const;
};

struct Dataset {
    std::vector<NewformRecord> records;
    std::vector<std::string> warnings;  // non-fatal ingest notes

    const NewformRecord* find(const std::string& label) const;
};

// Genus-2 curve y^2 + h(x) y = f(x); integer coefficients, constant-first.
struct CurveRecord {
    std::string label;  // form label the curve claims to match
    std::vector<int64_t> f_coeffs;
    std::vector<int64_t> h_coeffs;
};

struct TamagawaRecord {
    std::string label;
    std::optional<int64_t> c_bound;  // nullopt = UNKNOWN
    bool exact = false;              // notes carry the token "exact"
    std::string notes;
};

enum class PrincipalityFlag { Principal, NonPrincipal, Unknown };

struct PrincipalityRecord {
    std::string label;
    int64_t p = 0;
    PrincipalityFlag flag = PrincipalityFlag::Unknown;
    std::string notes;
};

Dataset parse_dataset(const std::string& path);
Dataset parse_dataset_text(const std::string& text);
void save_dataset(const Dataset& records, const std::string& path);
std::string dataset_to_text(const Dataset& records);

std::vector<CurveRecord> parse_curve_table(const std::string& path);
std::vector<TamagawaRecord> parse_tamagawa_table(const std::string& path);
std::vector<PrincipalityRecord> parse_principality_table(const std::string& path);

// Validation used at ingest; exposed for tests.
bool label_matches(const std::string& label, int64_t level);

}  // namespace congsieve::store
