#include "congsieve/formstore.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace congsieve::store {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

int64_t parse_int(const std::string& s, const char* what) {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("bad integer in field '") + what + "': '" + s + "'");
    return v;
}

std::vector<int64_t> parse_int_list(const std::string& s, const char* what) {
    std::vector<int64_t> out;
    for (const auto& part : split(s, ','))
        out.push_back(parse_int(part, what));
    return out;
}

Rational parse_fraction(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return rat(parse_int(s, "fraction"));
    int64_t num = parse_int(s.substr(0, slash), "numerator");
    int64_t den = parse_int(s.substr(slash + 1), "denominator");
    return rat(num, den);
}

// Weil bound via trace/norm: both embeddings of the eigenvalue must lie in
// the closed disk of radius 2*sqrt(ell).
bool weil_ok_deg2(const nf::CoeffField& K, const nf::EigVector& v, int64_t ell) {
    mpq_class c0(v[0].num, v[0].den), c1(v[1].num, v[1].den);
    c0.canonicalize();
    c1.canonicalize();
    mpq_class a0(K.defining_poly[0]), a1(K.defining_poly[1]);
    mpq_class t = 2 * c0 - a1 * c1;
    mpq_class n = c0 * c0 - a1 * c0 * c1 + a0 * c1 * c1;
    mpq_class disc = t * t - 4 * n;
    if (disc < 0) return n <= 4 * ell;
    if (t * t > 16 * ell) return false;
    mpq_class lhs = 4 * ell + n;
    if (lhs < 0) return false;
    return lhs * lhs >= 4 * t * t * ell;
}

struct LineContext {
    size_t line;
    std::vector<parse_diagnostic>* diags;
    void fail(const std::string& msg) const { diags->push_back({line, msg}); }
};

std::optional<NewformRecord> parse_record_line(const std::string& line, const LineContext& ctx,
                                               std::vector<std::string>* warnings) {
    auto fields = split(line, '|');
    if (fields.size() != 8) {
        ctx.fail("expected 8 '|'-separated fields, got " + std::to_string(fields.size()));
        return std::nullopt;
    }
    try {
        NewformRecord rec;
        rec.label = fields[0];
        rec.level = parse_int(fields[1], "level");
        rec.degree = static_cast<int>(parse_int(fields[2], "degree"));
        auto poly = parse_int_list(fields[3], "defining polynomial");
        int64_t disc = parse_int(fields[4], "field discriminant");
        rec.analytic_rank = parse_int(fields[5], "analytic rank");
        rec.coeff_bound = parse_int(fields[6], "coefficient bound");

        if (rec.level < 1) throw std::runtime_error("level must be positive");
        if (!label_matches(rec.label, rec.level))
            throw std::runtime_error("label '" + rec.label +
                                     "' does not parse as <level>.2.a.<orbit> with the stated level");
        if (rec.analytic_rank < 0) throw std::runtime_error("analytic rank must be nonnegative");
        if (rec.coeff_bound < 997) throw std::runtime_error("coefficient bound must be at least 997");
        if (static_cast<int>(poly.size()) != rec.degree + 1)
            throw std::runtime_error("polynomial degree does not match the degree field");
        rec.field = std::make_shared<nf::CoeffField>(std::move(poly), disc);

        // eigenvalue list
        for (const auto& entry : split(fields[7], ';')) {
            if (entry.empty()) continue;
            size_t colon = entry.find(':');
            if (colon == std::string::npos) throw std::runtime_error("eigenvalue entry lacks ':': " + entry);
            int64_t ell = parse_int(trim(entry.substr(0, colon)), "eigenvalue prime");
            if (!is_prime64(ell)) throw std::runtime_error("eigenvalue index " + std::to_string(ell) + " is not prime");
            if (ell > rec.coeff_bound)
                throw std::runtime_error("eigenvalue prime " + std::to_string(ell) + " exceeds the coefficient bound");
            nf::EigVector v;
            for (const auto& frac : split(entry.substr(colon + 1), ','))
                v.push_back(parse_fraction(frac));
            if (static_cast<int>(v.size()) != rec.degree)
                throw std::runtime_error("eigenvalue at " + std::to_string(ell) + " has wrong coordinate count");
            rec.eigenvalues.emplace_back(ell, std::move(v));
        }
        std::sort(rec.eigenvalues.begin(), rec.eigenvalues.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t i = 1; i < rec.eigenvalues.size(); ++i)
            if (rec.eigenvalues[i].first == rec.eigenvalues[i - 1].first)
                throw std::runtime_error("duplicate eigenvalue prime " + std::to_string(rec.eigenvalues[i].first));
        auto primes = primes_up_to(rec.coeff_bound);
        if (rec.eigenvalues.size() != primes.size())
            throw std::runtime_error("eigenvalue map does not cover every prime up to the bound");
        for (size_t i = 0; i < primes.size(); ++i)
            if (rec.eigenvalues[i].first != primes[i])
                throw std::runtime_error("eigenvalue map missing prime " + std::to_string(primes[i]));

        // a_ell = +-1 whenever ell exactly divides the level
        for (const auto& [ell, v] : rec.eigenvalues) {
            if (rec.level % ell != 0) continue;
            if ((rec.level / ell) % ell == 0) continue;
            bool pm1 = (v[0].den == 1 && (v[0].num == 1 || v[0].num == -1));
            for (size_t j = 1; j < v.size(); ++j)
                if (v[j].num != 0) pm1 = false;
            if (!pm1)
                throw std::runtime_error("a_" + std::to_string(ell) +
                                         " must be +-1 when " + std::to_string(ell) +
                                         " exactly divides the level (record " + rec.label + ")");
        }

        // Weil bounds at good primes; exact for degree <= 2.
        if (rec.degree <= 2) {
            for (const auto& [ell, v] : rec.eigenvalues) {
                if (rec.level % ell == 0) continue;
                bool ok;
                if (rec.degree == 1) {
                    __int128 num = v[0].num, den = v[0].den;
                    ok = num * num <= static_cast<__int128>(4) * ell * den * den;
                } else {
                    ok = weil_ok_deg2(*rec.field, v, ell);
                }
                if (!ok)
                    throw std::runtime_error("a_" + std::to_string(ell) + " violates the Weil bound (record " +
                                             rec.label + ")");
            }
        } else if (warnings) {
            warnings->push_back("record " + rec.label + ": Weil bound check skipped for degree " +
                                std::to_string(rec.degree));
        }
        return rec;
    } catch (const std::exception& e) {
        ctx.fail(e.what());
        return std::nullopt;
    }
}

}  // namespace

parse_error::parse_error(std::vector<parse_diagnostic> diags)
    : std::runtime_error([&diags] {
          std::string msg = "dataset parse failed:";
          for (const auto& d : diags)
              msg += "\n  line " + std::to_string(d.line) + ": " + d.message;
          return msg;
      }()),
      diagnostics(std::move(diags)) {}

bool label_matches(const std::string& label, int64_t level) {
    auto parts = split(label, '.');
    if (parts.size() != 4) return false;
    if (parts[1] != "2" || parts[2] != "a") return false;
    if (parts[0].empty() || parts[3].empty()) return false;
    for (char c : parts[0])
        if (!isdigit(static_cast<unsigned char>(c))) return false;
    for (char c : parts[3])
        if (!islower(static_cast<unsigned char>(c))) return false;
    return parse_int(parts[0], "label level") == level;
}

const nf::EigVector* NewformRecord::eigenvalue(int64_t ell) const {
    auto it = std::lower_bound(eigenvalues.begin(), eigenvalues.end(), ell,
                               [](const auto& a, int64_t b) { return a.first < b; });
    if (it == eigenvalues.end() || it->first != ell) return nullptr;
    return &it->second;
}

const NewformRecord* Dataset::find(const std::string& label) const {
    for (const auto& r : records)
        if (r.label == label) return &r;
    return nullptr;
}

Dataset parse_dataset_text(const std::string& text) {
    std::vector<parse_diagnostic> diags;
    std::vector<std::string> warnings;
    Dataset ds;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    std::set<std::string> labels;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "congsieve-dataset v1")
                diags.push_back({lineno, "missing header 'congsieve-dataset v1'"});
            header_seen = true;
            continue;
        }
        LineContext ctx{lineno, &diags};
        if (auto rec = parse_record_line(t, ctx, &warnings)) {
            if (!labels.insert(rec->label).second)
                diags.push_back({lineno, "duplicate label " + rec->label});
            else
                ds.records.push_back(std::move(*rec));
        }
    }
    if (!header_seen) diags.push_back({1, "empty file: missing header"});
    if (!diags.empty()) throw parse_error(std::move(diags));
    ds.warnings = std::move(warnings);
    return ds;
}

Dataset parse_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset_text(buf.str());
}

namespace {

std::string int_list_str(const std::vector<int64_t>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

std::string dataset_to_text(const Dataset& ds) {
    std::string out = "congsieve-dataset v1\n";
    for (const auto& r : ds.records) {
        out += r.label + " | " + std::to_string(r.level) + " | " + std::to_string(r.degree) + " | " +
               int_list_str(r.field->defining_poly) + " | " + std::to_string(r.field->disc) + " | " +
               std::to_string(r.analytic_rank) + " | " + std::to_string(r.coeff_bound) + " | ";
        for (size_t i = 0; i < r.eigenvalues.size(); ++i) {
            if (i) out += ";";
            out += std::to_string(r.eigenvalues[i].first) + ":";
            const auto& v = r.eigenvalues[i].second;
            for (size_t j = 0; j < v.size(); ++j) {
                if (j) out += ",";
                out += rat_str(v[j]);
            }
        }
        out += "\n";
    }
    return out;
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    out << dataset_to_text(ds);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::vector<std::string>> read_table(const std::string& path, size_t min_fields,
                                                 size_t max_fields, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(std::string("cannot open ") + what + " table: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(t, '|');
        if (fields.size() < min_fields || fields.size() > max_fields)
            throw std::runtime_error(std::string(what) + " table line " + std::to_string(lineno) +
                                     ": wrong field count");
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

std::vector<CurveRecord> parse_curve_table(const std::string& path) {
    std::vector<CurveRecord> out;
    for (auto& row : read_table(path, 3, 3, "curve")) {
        CurveRecord c;
        c.label = row[0];
        c.f_coeffs = parse_int_list(row[1], "curve f");
        c.h_coeffs = row[2].empty() ? std::vector<int64_t>{0} : parse_int_list(row[2], "curve h");
        while (c.f_coeffs.size() > 1 && c.f_coeffs.back() == 0) c.f_coeffs.pop_back();
        while (c.h_coeffs.size() > 1 && c.h_coeffs.back() == 0) c.h_coeffs.pop_back();
        size_t fdeg = c.f_coeffs.size() - 1;
        if (fdeg != 5 && fdeg != 6)
            throw std::runtime_error("curve " + c.label + ": f must have degree 5 or 6");
        if (c.h_coeffs.size() > 4)
            throw std::runtime_error("curve " + c.label + ": h must have degree at most 3");
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<TamagawaRecord> parse_tamagawa_table(const std::string& path) {
    std::vector<TamagawaRecord> out;
    for (auto& row : read_table(path, 2, 3, "tamagawa")) {
        TamagawaRecord t;
        t.label = row[0];
        if (row[1] != "UNKNOWN") {
            int64_t b = parse_int(row[1], "tamagawa bound");
            if (b < 1) throw std::runtime_error("tamagawa bound must be positive: " + t.label);
            t.c_bound = b;
        }
        if (row.size() == 3) t.notes = row[2];
        for (const auto& tok : split(t.notes, ' '))
            if (tok == "exact") t.exact = true;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<PrincipalityRecord> parse_principality_table(const std::string& path) {
    std::vector<PrincipalityRecord> out;
    for (auto& row : read_table(path, 3, 4, "principality")) {
        PrincipalityRecord r;
        r.label = row[0];
        r.p = parse_int(row[1], "prime");
        if (row[2] == "principal") r.flag = PrincipalityFlag::Principal;
        else if (row[2] == "nonprincipal") r.flag = PrincipalityFlag::NonPrincipal;
        else if (row[2] == "unknown") r.flag = PrincipalityFlag::Unknown;
        else throw std::runtime_error("bad principality flag: " + row[2]);
        if (row.size() == 4) r.notes = row[3];
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace congsieve::store
