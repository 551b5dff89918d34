// Structured event log. Results go to files on stdout-clean paths; progress
// and skip events land here. Lines are buffered and written in a
// deterministic order regardless of worker count.
#pragma once

#include <string>
#include <vector>

namespace congsieve::log {

class EventLog {
public:
    void add(std::string line) { lines_.push_back(std::move(line)); }
    void add_batch(const std::vector<std::string>& batch) {
        lines_.insert(lines_.end(), batch.begin(), batch.end());
    }
    const std::vector<std::string>& lines() const { return lines_; }

    // Writes to `path`; empty path falls back to the CONGSIEVE_LOG
    // environment variable, then to "congsieve.log" in the output directory.
    void write(const std::string& path) const;

private:
    std::vector<std::string> lines_;
};

std::string resolve_log_path(const std::string& out_dir);

}  // namespace congsieve::log
