#include "congsieve/sieve.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace congsieve::sieve {

PrimeSet make_prime_set(const std::array<int64_t, 15>& primes) {
    for (size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime64(primes[i])) throw std::invalid_argument("prime set entry is not prime");
        if (i && primes[i] <= primes[i - 1]) throw std::invalid_argument("prime set must be strictly increasing");
    }
    return PrimeSet{primes};
}

const std::vector<PrimeSet>& default_prime_sets() {
    static const std::vector<PrimeSet> sets = {
        make_prime_set({419, 431, 577, 587, 599, 617, 733, 773, 823, 859, 877, 883, 887, 941, 983}),
        make_prime_set({419, 439, 541, 569, 587, 641, 709, 727, 751, 769, 773, 821, 827, 859, 971}),
        make_prime_set({419, 461, 569, 577, 601, 641, 701, 719, 733, 751, 887, 907, 919, 971, 983}),
        make_prime_set({439, 461, 617, 631, 691, 733, 739, 757, 787, 811, 827, 919, 937, 947, 983}),
        make_prime_set({439, 503, 587, 647, 683, 701, 709, 727, 739, 757, 797, 829, 839, 853, 929}),
        make_prime_set({467, 541, 683, 691, 761, 773, 811, 829, 853, 863, 929, 937, 947, 953, 991}),
    };
    return sets;
}

CoverageResult coverage_check(int64_t level_max, const std::vector<PrimeSet>& sets) {
    if (level_max < 2) throw std::invalid_argument("coverage_check: level_max must be >= 2");
    if (sets.size() > 64) throw std::invalid_argument("coverage_check: at most 64 sets supported");
    // mask -> least level carrying it
    std::map<uint64_t, int64_t> first_level;
    for (int64_t n = 2; n <= level_max; ++n) {
        uint64_t mask = 0;
        for (size_t i = 0; i < sets.size(); ++i) {
            bool coprime = true;
            for (int64_t q : sets[i].primes)
                if (n % q == 0) { coprime = false; break; }
            if (coprime) mask |= (uint64_t{1} << i);
        }
        first_level.emplace(mask, n);
    }
    CoverageResult res;
    for (auto it = first_level.begin(); it != first_level.end(); ++it)
        for (auto jt = it; jt != first_level.end(); ++jt) {
            if ((it->first & jt->first) != 0) continue;
            int64_t a = std::min(it->second, jt->second);
            int64_t b = std::max(it->second, jt->second);
            if (res.covered || std::tie(a, b) < std::tie(res.witness_n, res.witness_m)) {
                res.covered = false;
                res.witness_n = a;
                res.witness_m = b;
            }
        }
    return res;
}

std::vector<gf::FFElement> hash_tuple(const store::NewformRecord& f, const nf::PrimeIdealHandle& h,
                                      const PrimeSet& L) {
    std::vector<gf::FFElement> out;
    out.reserve(L.primes.size());
    for (int64_t ell : L.primes) {
        if (f.level % ell == 0)
            throw std::invalid_argument("hash_tuple: level " + std::to_string(f.level) +
                                        " shares the prime " + std::to_string(ell) + " with the set");
        const nf::EigVector* v = f.eigenvalue(ell);
        if (!v)
            throw std::invalid_argument("hash_tuple: missing eigenvalue at " + std::to_string(ell) +
                                        " for " + f.label);
        out.push_back(nf::reduce_eigenvalue(*v, h));
    }
    return out;
}

namespace {

std::string serialize_tuple(const std::vector<gf::FFElement>& tuple, int k) {
    std::string s;
    s.reserve(tuple.size() * static_cast<size_t>(k) * 2);
    for (const auto& e : tuple)
        for (int i = 0; i < k; ++i) {
            uint64_t c = static_cast<uint64_t>(e.c[i]);
            s.push_back(static_cast<char>((c >> 8) & 0xff));
            s.push_back(static_cast<char>(c & 0xff));
        }
    return s;
}

}  // namespace

HashKey canonical_hash_key(const std::vector<gf::FFElement>& tuple, const gf::FFieldPtr& field) {
    if (field->p >= 65536) throw std::invalid_argument("canonical_hash_key: p too large to serialize");
    HashKey key;
    key.p = field->p;
    key.fdeg = field->k;
    std::vector<gf::FFElement> cur = tuple;
    key.payload = serialize_tuple(cur, field->k);
    for (int j = 1; j < field->k; ++j) {
        for (auto& e : cur) e = gf::frobenius(e);
        std::string s = serialize_tuple(cur, field->k);
        if (s < key.payload) key.payload = std::move(s);
    }
    return key;
}

namespace {

// Smallest j with t1 = Frob^j(t2), if any.
std::optional<int> frobenius_twist_between(const std::vector<gf::FFElement>& t1,
                                           const std::vector<gf::FFElement>& t2, int fdeg) {
    std::vector<gf::FFElement> cur = t2;
    for (int j = 0; j < fdeg; ++j) {
        if (cur == t1) return j;
        for (auto& e : cur) e = gf::frobenius(e);
    }
    return std::nullopt;
}

}  // namespace

std::vector<CongruenceCandidate> sieve_pass(const store::Dataset& forms, int64_t p, const PrimeSet& L,
                                            SkipLog* log) {
    if (p < 5 || p > 4000) throw std::invalid_argument("sieve_pass: p must lie in [5, 4000]");
    struct Entry {
        const store::NewformRecord* rec;
        int handle_index;
        std::vector<gf::FFElement> tuple;
    };
    std::map<HashKey, std::vector<Entry>> table;
    for (const auto& rec : forms.records) {
        if (rec.level % p == 0) continue;
        bool coprime = true;
        for (int64_t ell : L.primes)
            if (rec.level % ell == 0) coprime = false;
        if (!coprime) continue;
        std::vector<nf::PrimeIdealHandle> handles;
        try {
            handles = nf::unramified_primes_above(rec.field, p);
        } catch (const nf::index_divided_error&) {
            if (log) log->push_back("event=skip reason=index_divided label=" + rec.label +
                                    " p=" + std::to_string(p));
            continue;
        }
        for (size_t hi = 0; hi < handles.size(); ++hi) {
            try {
                auto tuple = hash_tuple(rec, handles[hi], L);
                auto key = canonical_hash_key(tuple, handles[hi].residue_field);
                table[key].push_back(Entry{&rec, static_cast<int>(hi), std::move(tuple)});
            } catch (const nf::denominator_error&) {
                if (log) log->push_back("event=skip reason=denominator label=" + rec.label +
                                        " p=" + std::to_string(p));
            }
        }
    }

    std::map<std::pair<std::string, std::string>, CongruenceCandidate> pairs;
    for (const auto& [key, entries] : table) {
        for (size_t i = 0; i < entries.size(); ++i)
            for (size_t j = i + 1; j < entries.size(); ++j) {
                const Entry* a = &entries[i];
                const Entry* b = &entries[j];
                if (a->rec->label == b->rec->label) continue;  // Galois-conjugate duplicate
                if (b->rec->label < a->rec->label) std::swap(a, b);
                auto twist = frobenius_twist_between(a->tuple, b->tuple, key.fdeg);
                if (!twist) continue;  // equal keys but different orbits cannot happen
                CongruenceCandidate c;
                c.label_f = a->rec->label;
                c.label_g = b->rec->label;
                c.p = p;
                c.handle_f = a->handle_index;
                c.handle_g = b->handle_index;
                c.twist = *twist;
                c.refined_to = 0;
                auto it = pairs.find({c.label_f, c.label_g});
                if (it == pairs.end() || c.sort_key() < it->second.sort_key())
                    pairs.insert_or_assign({c.label_f, c.label_g}, c);
            }
    }
    std::vector<CongruenceCandidate> out;
    for (auto& [k, c] : pairs) out.push_back(std::move(c));
    return out;
}

std::optional<CongruenceCandidate> refine(const CongruenceCandidate& c, const store::Dataset& forms,
                                          int64_t bound, SkipLog* log) {
    const store::NewformRecord* f = forms.find(c.label_f);
    const store::NewformRecord* g = forms.find(c.label_g);
    if (!f || !g) throw std::invalid_argument("refine: candidate labels not in dataset");
    if (bound > f->coeff_bound || bound > g->coeff_bound)
        throw std::invalid_argument("refine: bound exceeds stored coefficients");
    CongruenceCandidate out = c;
    out.refined_to = bound;
    if (bound <= 0) return out;

    auto handles_f = nf::unramified_primes_above(f->field, c.p);
    auto handles_g = nf::unramified_primes_above(g->field, c.p);
    if (c.handle_f >= static_cast<int>(handles_f.size()) || c.handle_g >= static_cast<int>(handles_g.size()))
        throw std::invalid_argument("refine: stale handle index");
    const auto& hf = handles_f[static_cast<size_t>(c.handle_f)];
    const auto& hg = handles_g[static_cast<size_t>(c.handle_g)];
    if (hf.f != hg.f) return std::nullopt;
    int fdeg = hf.f;

    std::vector<bool> alive(static_cast<size_t>(fdeg), true);
    int alive_count = fdeg;
    for (int64_t ell : primes_up_to(bound)) {
        if (ell == c.p || f->level % ell == 0 || g->level % ell == 0) continue;
        const nf::EigVector* vf = f->eigenvalue(ell);
        const nf::EigVector* vg = g->eigenvalue(ell);
        if (!vf || !vg) continue;
        gf::FFElement rf, rg;
        try {
            rf = nf::reduce_eigenvalue(*vf, hf);
            rg = nf::reduce_eigenvalue(*vg, hg);
        } catch (const nf::denominator_error&) {
            if (log) log->push_back("event=skip reason=denominator label=" + f->label + "," + g->label +
                                    " p=" + std::to_string(c.p) + " ell=" + std::to_string(ell));
            continue;
        }
        gf::FFElement cur = rg;
        for (int j = 0; j < fdeg; ++j) {
            if (alive[static_cast<size_t>(j)] && !(rf == cur)) {
                alive[static_cast<size_t>(j)] = false;
                --alive_count;
            }
            cur = gf::frobenius(cur);
        }
        if (alive_count == 0) return std::nullopt;
    }
    if (c.twist < fdeg && alive[static_cast<size_t>(c.twist)]) return out;
    for (int j = 0; j < fdeg; ++j)
        if (alive[static_cast<size_t>(j)]) {
            out.twist = j;
            break;
        }
    return out;
}

std::string candidate_line(const CongruenceCandidate& c) {
    return std::to_string(c.p) + " | " + c.label_f + " | " + c.label_g + " | " +
           std::to_string(c.handle_f) + " | " + std::to_string(c.handle_g) + " | " +
           std::to_string(c.twist) + " | " + std::to_string(c.refined_to);
}

CongruenceCandidate parse_candidate_line(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    for (;;) {
        size_t pos = line.find('|', start);
        std::string part = line.substr(start, pos == std::string::npos ? pos : pos - start);
        size_t a = part.find_first_not_of(" \t");
        size_t b = part.find_last_not_of(" \t");
        fields.push_back(a == std::string::npos ? "" : part.substr(a, b - a + 1));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (fields.size() != 7) throw std::invalid_argument("bad candidate line: " + line);
    CongruenceCandidate c;
    c.p = std::stoll(fields[0]);
    c.label_f = fields[1];
    c.label_g = fields[2];
    c.handle_f = std::stoi(fields[3]);
    c.handle_g = std::stoi(fields[4]);
    c.twist = std::stoi(fields[5]);
    c.refined_to = std::stoll(fields[6]);
    return c;
}

}  // namespace congsieve::sieve
