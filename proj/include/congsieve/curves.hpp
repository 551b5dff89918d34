// Brute-force point counting of genus-2 curves over small finite fields and
// trace/norm matching of curves against degree-2 newform orbits.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "congsieve/formstore.hpp"

namespace congsieve::curves {

struct PointCount {
    int64_t ell = 0;
    int64_t n1 = 0;  // points over F_ell
    int64_t n2 = 0;  // points over F_{ell^2}
};

// Exact number of points on the smooth projective model of
// y^2 + h(x) y = f(x) over F_{ell^ext}. Requires odd ell, good reduction,
// and ell^ext <= 10^6.
int64_t count_points(const store::CurveRecord& curve, int64_t ell, int ext);

// Frobenius trace and norm of the real-multiplication eigenvalue from the
// two point counts: Tr = ell + 1 - n1, Nm = (n1^2 + n2)/2 - (ell+1) n1 - ell.
std::pair<int64_t, int64_t> trace_norm(int64_t n1, int64_t n2, int64_t ell);

// True when the curve has good reduction at ell (the squared-model sextic
// stays squarefree of degree >= 5 mod ell).
bool good_reduction(const store::CurveRecord& curve, int64_t ell);

enum class MatchStatus { Match, Ambiguous, NoMatch };

struct MatchResult {
    MatchStatus status = MatchStatus::NoMatch;
    std::vector<std::string> survivors;  // single entry on Match
    std::vector<PointCount> counts;      // one per probe prime
};

// Compares curve trace/norm data against each degree-2 candidate orbit at
// every probe prime; the probe primes must be good for the curve and
// coprime to all candidate levels.
MatchResult match_form(const store::CurveRecord& curve,
                       const std::vector<const store::NewformRecord*>& candidates,
                       const std::vector<int64_t>& primes);

}  // namespace congsieve::curves
