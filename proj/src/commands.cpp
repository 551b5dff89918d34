#include "congsieve/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace congsieve::cli {

namespace {

void ensure_out_dir(const RunConfig& c) {
    if (!c.out_dir.empty()) std::filesystem::create_directories(c.out_dir);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.push_back(line);
    }
    return out;
}

store::Dataset load_dataset_checked(const RunConfig& config, log::EventLog& events) {
    if (config.dataset_path.empty()) throw usage_error("--dataset is required");
    store::Dataset ds = store::parse_dataset(config.dataset_path);
    for (const auto& w : ds.warnings) events.add("event=warning " + w);
    for (const auto& r : ds.records)
        if (config.refine_bound > r.coeff_bound)
            throw usage_error("refine bound " + std::to_string(config.refine_bound) +
                              " exceeds the coefficient bound of " + r.label);
    return ds;
}

void validate_p_range(const RunConfig& config) {
    if (config.p_min < 5 || config.p_max > 4000 || config.p_min > config.p_max)
        throw usage_error("prime range must satisfy 5 <= p-min <= p-max <= 4000");
}

}  // namespace

std::vector<sieve::PrimeSet> load_prime_sets(const std::string& path) {
    std::vector<sieve::PrimeSet> sets;
    for (const auto& line : read_lines(path)) {
        std::array<int64_t, 15> primes{};
        size_t count = 0;
        std::string token;
        std::istringstream in(line);
        while (std::getline(in, token, ' ')) {
            for (auto& part : {token}) {
                std::istringstream sub(part);
                std::string piece;
                while (std::getline(sub, piece, ',')) {
                    if (piece.empty()) continue;
                    if (count >= primes.size()) throw usage_error("prime set line has more than 15 entries");
                    primes[count++] = std::stoll(piece);
                }
            }
        }
        if (count != primes.size()) throw usage_error("prime set line must carry exactly 15 primes");
        sets.push_back(sieve::make_prime_set(primes));
    }
    if (sets.empty()) throw usage_error("prime set file is empty");
    return sets;
}

int cmd_cover(const RunConfig& config, std::ostream& out) {
    auto res = sieve::coverage_check(config.level_max, config.sets);
    if (res.covered) {
        out << "coverage ok level_max=" << config.level_max << " sets=" << config.sets.size() << "\n";
        return 0;
    }
    out << "coverage witness N=" << res.witness_n << " M=" << res.witness_m << "\n";
    return 1;
}

int cmd_sieve(const RunConfig& config) {
    validate_p_range(config);
    ensure_out_dir(config);
    log::EventLog events;
    store::Dataset forms = load_dataset_checked(config, events);

    std::vector<int64_t> primes;
    for (int64_t p : primes_up_to(config.p_max))
        if (p >= config.p_min) primes.push_back(p);

    struct Task {
        size_t set_index;
        int64_t p;
    };
    std::vector<Task> tasks;
    for (size_t i = 0; i < config.sets.size(); ++i)
        for (int64_t p : primes) tasks.push_back({i, p});

    std::vector<std::vector<sieve::CongruenceCandidate>> found(tasks.size());
    std::vector<sieve::SkipLog> logs(tasks.size());
    parallel_for_tasks(config.jobs, tasks.size(), [&](size_t t) {
        found[t] = sieve::sieve_pass(forms, tasks[t].p, config.sets[tasks[t].set_index], &logs[t]);
    });

    // Deduplicate across sets: one candidate per (p, pair).
    std::map<std::tuple<int64_t, std::string, std::string>, sieve::CongruenceCandidate> merged;
    for (size_t t = 0; t < tasks.size(); ++t) {
        for (auto& c : found[t]) {
            auto key = std::make_tuple(c.p, c.label_f, c.label_g);
            auto it = merged.find(key);
            if (it == merged.end() || c.sort_key() < it->second.sort_key()) merged.insert_or_assign(key, c);
        }
        for (auto& line : logs[t]) events.add(line + " set=" + std::to_string(tasks[t].set_index));
    }

    std::vector<sieve::CongruenceCandidate> candidates;
    for (auto& [k, c] : merged) candidates.push_back(c);

    std::vector<std::optional<sieve::CongruenceCandidate>> refined(candidates.size());
    std::vector<sieve::SkipLog> refine_logs(candidates.size());
    parallel_for_tasks(config.jobs, candidates.size(), [&](size_t i) {
        refined[i] = sieve::refine(candidates[i], forms, config.refine_bound, &refine_logs[i]);
    });

    std::vector<sieve::CongruenceCandidate> kept;
    for (size_t i = 0; i < candidates.size(); ++i) {
        for (auto& line : refine_logs[i]) events.add(line);
        if (refined[i]) kept.push_back(*refined[i]);
        else
            events.add("event=rejected p=" + std::to_string(candidates[i].p) + " pair=" +
                       candidates[i].label_f + "," + candidates[i].label_g);
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.sort_key() < b.sort_key(); });

    std::string out_text;
    for (const auto& c : kept) out_text += sieve::candidate_line(c) + "\n";
    write_file(config.out_dir + "/candidates.txt", out_text);
    events.write(log::resolve_log_path(config.out_dir));
    return 0;
}

int cmd_certify(const RunConfig& config, const std::string& candidate_file) {
    ensure_out_dir(config);
    log::EventLog events;
    store::Dataset forms = load_dataset_checked(config, events);
    std::vector<sieve::CongruenceCandidate> candidates;
    for (const auto& line : read_lines(candidate_file))
        candidates.push_back(sieve::parse_candidate_line(line));

    std::vector<prover::CongruenceCertificate> certs(candidates.size());
    parallel_for_tasks(config.jobs, candidates.size(), [&](size_t i) {
        certs[i] = prover::certify_candidate(candidates[i], forms);
    });

    bool any_refuted = false;
    std::string out_text;
    for (const auto& cert : certs) {
        out_text += prover::certificate_line(cert) + "\n";
        if (cert.verdict == prover::Verdict::Refuted) any_refuted = true;
    }
    write_file(config.out_dir + "/certificates.txt", out_text);
    events.write(log::resolve_log_path(config.out_dir));
    return any_refuted ? 1 : 0;
}

namespace {

std::vector<int64_t> probe_primes_for(const store::CurveRecord& curve,
                                      const std::vector<const store::NewformRecord*>& candidates) {
    std::vector<int64_t> probes;
    for (int64_t ell : primes_up_to(200)) {
        if (ell == 2) continue;
        if (!curves::good_reduction(curve, ell)) continue;
        bool ok = true;
        for (const auto* c : candidates)
            if (c->level % ell == 0) ok = false;
        if (!ok) continue;
        probes.push_back(ell);
        if (probes.size() == 3) break;
    }
    return probes;
}

}  // namespace

int cmd_match(const RunConfig& config) {
    ensure_out_dir(config);
    log::EventLog events;
    store::Dataset forms = load_dataset_checked(config, events);
    if (config.curves_path.empty()) throw usage_error("--curves is required for match");
    auto curves_table = store::parse_curve_table(config.curves_path);

    bool all_matched = true;
    std::string out_text;
    for (const auto& curve : curves_table) {
        int64_t level = std::stoll(curve.label.substr(0, curve.label.find('.')));
        std::vector<const store::NewformRecord*> candidates;
        for (const auto& r : forms.records)
            if (r.level == level && r.degree == 2) candidates.push_back(&r);
        auto probes = probe_primes_for(curve, candidates);
        auto res = curves::match_form(curve, candidates, probes);
        for (const auto& pc : res.counts) {
            auto [tr, nm] = curves::trace_norm(pc.n1, pc.n2, pc.ell);
            out_text += curve.label + " | " + std::to_string(pc.ell) + " | " + std::to_string(pc.n1) +
                        " | " + std::to_string(pc.n2) + " | " + std::to_string(tr) + " | " +
                        std::to_string(nm) + "\n";
        }
        switch (res.status) {
            case curves::MatchStatus::Match:
                out_text += curve.label + " | match=" + res.survivors[0] + "\n";
                break;
            case curves::MatchStatus::Ambiguous: {
                out_text += curve.label + " | ambiguous=";
                for (size_t i = 0; i < res.survivors.size(); ++i)
                    out_text += (i ? "," : "") + res.survivors[i];
                out_text += "\n";
                all_matched = false;
                break;
            }
            case curves::MatchStatus::NoMatch:
                out_text += curve.label + " | nomatch\n";
                all_matched = false;
                break;
        }
    }
    write_file(config.out_dir + "/match_report.txt", out_text);
    events.write(log::resolve_log_path(config.out_dir));
    return all_matched ? 0 : 1;
}

prover::CongruenceCertificate parse_certificate_line(const std::string& line) {
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
    if (fields.size() != 8) throw std::invalid_argument("bad certificate line: " + line);
    prover::CongruenceCertificate cert;
    if (fields[0] == "Proved") cert.verdict = prover::Verdict::Proved;
    else if (fields[0] == "Refuted") cert.verdict = prover::Verdict::Refuted;
    else if (fields[0] == "InsufficientData") cert.verdict = prover::Verdict::InsufficientData;
    else throw std::invalid_argument("bad verdict: " + fields[0]);
    cert.candidate.p = std::stoll(fields[1]);
    size_t comma = fields[2].find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad label pair: " + fields[2]);
    cert.candidate.label_f = fields[2].substr(0, comma);
    cert.candidate.label_g = fields[2].substr(comma + 1);
    if (fields[3] != "-") {
        std::istringstream in(fields[3]);
        std::string piece;
        while (std::getline(in, piece, ';')) cert.S.push_back(std::stoll(piece));
    }
    cert.eta = std::stoll(fields[4]);
    cert.sturm_bound = std::stoll(fields[5]);
    cert.twist = std::stoi(fields[6]);
    cert.candidate.twist = cert.twist;
    return cert;
}

namespace {

// The certificate line format has no handle indices; rediscover the handle
// pair by checking the congruence directly.
void rederive_handles(prover::CongruenceCertificate& cert, const store::Dataset& forms, int64_t bound) {
    const auto* f = forms.find(cert.candidate.label_f);
    const auto* g = forms.find(cert.candidate.label_g);
    if (!f || !g) throw std::invalid_argument("certificate labels not in dataset");
    auto hf = nf::unramified_primes_above(f->field, cert.candidate.p);
    auto hg = nf::unramified_primes_above(g->field, cert.candidate.p);
    for (size_t i = 0; i < hf.size(); ++i)
        for (size_t j = 0; j < hg.size(); ++j) {
            if (hf[i].f != hg[j].f) continue;
            sieve::CongruenceCandidate probe = cert.candidate;
            probe.handle_f = static_cast<int>(i);
            probe.handle_g = static_cast<int>(j);
            if (auto ok = sieve::refine(probe, forms, bound)) {
                cert.candidate = *ok;
                return;
            }
        }
    throw std::invalid_argument("no handle pair matches certificate for " + cert.candidate.label_f +
                                "," + cert.candidate.label_g);
}

}  // namespace

int cmd_visibility(const RunConfig& config, const std::string& certificate_file) {
    ensure_out_dir(config);
    log::EventLog events;
    store::Dataset forms = load_dataset_checked(config, events);

    vis::SideTables tables;
    if (!config.tamagawa_path.empty()) tables.tamagawa = store::parse_tamagawa_table(config.tamagawa_path);
    if (!config.principality_path.empty())
        tables.principality = store::parse_principality_table(config.principality_path);

    std::vector<prover::CongruenceCertificate> certs;
    for (const auto& line : read_lines(certificate_file)) {
        auto cert = parse_certificate_line(line);
        if (cert.verdict != prover::Verdict::Refuted) rederive_handles(cert, forms, config.refine_bound);
        certs.push_back(std::move(cert));
    }

    auto verdicts = vis::run_pipeline(certs, forms, tables);
    std::string machine;
    bool any_blocked = false;
    for (const auto& v : verdicts) {
        machine += vis::verdict_line(v) + "\n";
        if (!v.complete) any_blocked = true;
    }
    write_file(config.out_dir + "/visibility_verdicts.txt", machine);
    write_file(config.out_dir + "/visibility_report.txt", vis::render_report(verdicts));
    events.write(log::resolve_log_path(config.out_dir));
    return any_blocked ? 1 : 0;
}

}  // namespace congsieve::cli
