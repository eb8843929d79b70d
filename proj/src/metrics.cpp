#include "tvnewton/metrics.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tvn {

namespace {

constexpr const char* kHeader = "k,sigma,rel_residual,err2,err_inf,time_s,inner_iters,cg_iters,active_count";

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::SubproblemNotConverged: return "subproblem-not-converged";
    case SolveStatus::LineSearchFailed: return "line-search-failed";
    case SolveStatus::Diverged: return "diverged";
  }
  return "unknown";
}

void write_run_log(const std::vector<IterationRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot open '" + path + "' for writing");
  out << kHeader << '\n' << std::setprecision(17);
  for (const auto& r : records) {
    out << r.k << ',' << r.sigma << ',' << r.rel_residual << ',';
    if (r.err2) out << *r.err2;
    out << ',';
    if (r.err_inf) out << *r.err_inf;
    out << ',' << r.time_s << ',' << r.inner_iters << ',' << r.cg_iters << ',' << r.active_count << '\n';
  }
  if (!out) throw ConfigurationError("write failed: '" + path + "'");
}

std::vector<IterationRecord> read_run_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ConfigurationError(path + ": missing or wrong log header");
  std::vector<IterationRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 9) throw ConfigurationError(path + ":" + std::to_string(lineno) + ": expected 9 fields");
    try {
      IterationRecord r;
      r.k = std::stol(f[0]);
      r.sigma = std::stod(f[1]);
      r.rel_residual = std::stod(f[2]);
      r.err2 = parse_optional(f[3]);
      r.err_inf = parse_optional(f[4]);
      r.time_s = std::stod(f[5]);
      r.inner_iters = std::stol(f[6]);
      r.cg_iters = std::stol(f[7]);
      r.active_count = std::stol(f[8]);
      records.push_back(r);
    } catch (const std::logic_error&) {
      throw ConfigurationError(path + ":" + std::to_string(lineno) + ": malformed field");
    }
  }
  return records;
}

}  // namespace tvn
