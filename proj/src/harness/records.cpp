#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "robin/error.hpp"
#include "robin/harness.hpp"

namespace robin {

std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json RunRecord::to_json() const {
  return {{"config_hash", config_hash},
          {"timestamp", timestamp},
          {"command", command},
          {"inputs", inputs},
          {"outputs", outputs},
          {"tool_version", tool_version}};
}

RunRecord make_record(const std::string& command, const nlohmann::json& inputs) {
  RunRecord r;
  r.command = command;
  r.inputs = inputs;
  r.config_hash = robin::config_hash({{"command", command}, {"inputs", inputs}});
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  r.timestamp = buf;
  return r;
}

void write_record(const std::filesystem::path& dir, const RunRecord& record) {
  std::ofstream os(dir / "run.json");
  if (!os) throw Error(ErrorKind::InvalidParameter, "cannot write " + (dir / "run.json").string());
  os << record.to_json().dump(2) << '\n';
}

std::string csv_banner(const std::string& schema, const RunRecord& record) {
  return "# schema=" + schema + " config_hash=" + record.config_hash + "\n";
}

nlohmann::json spectrum_to_json(const SpectrumResult& s, const std::string& polygon, int k) {
  nlohmann::json j;
  j["polygon"] = polygon;
  j["beta"] = s.beta;
  j["k"] = k;
  j["h"] = s.mesh_h;
  j["eigenvalues"] = s.eigenvalues;
  j["residuals"] = s.residuals;
  j["extrapolated"] = s.extrapolated;
  j["error_estimate"] = s.error_estimate;
  j["converged"] = s.converged;
  if (!s.convergence_note.empty()) j["convergence_note"] = s.convergence_note;
  nlohmann::json rates = nlohmann::json::array();
  for (double r : s.observed_rate) rates.push_back(std::isfinite(r) ? nlohmann::json(r) : nlohmann::json(nullptr));
  j["observed_rate"] = rates;
  return j;
}

}  // namespace robin
