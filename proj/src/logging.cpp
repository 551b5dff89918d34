#include "congsieve/logging.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace congsieve::log {

std::string resolve_log_path(const std::string& out_dir) {
    if (const char* env = std::getenv("CONGSIEVE_LOG"); env && *env) return env;
    if (!out_dir.empty()) return out_dir + "/congsieve.log";
    return "congsieve.log";
}

void EventLog::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write log file: " + path);
    for (const auto& line : lines_) out << line << "\n";
}

}  // namespace congsieve::log
