#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "robin/fem.hpp"
#include "robin/geometry.hpp"
#include "robin/optimizer.hpp"

namespace robin {

inline constexpr const char* kToolVersion = "1.0.0";

// ------------------------------------------------------------------ families

enum class Family { Pacman, Mountains, ShrinkingSlit };

Family family_from_string(const std::string& name);
std::string to_string(Family f);

/// Member n >= 0 of a degenerating family and its parameter.
///  pacman: unit square with a wedge notch of half-width 0.25 / 2^n at the
///          left wall, closing onto a slit of length 0.5 (7 sides).
///  mountains: pentagon (0,0),(2,0),(1.5,1),(1,d),(0.5,1) with d = 0.5 / 2^n.
///  shrinking_slit: unit square with a wall slit of length 0.4 / 4^n.
GeneralizedPolygon family_member(Family f, int n);
double family_parameter(Family f, int n);
/// H^c limit of the family.
GeneralizedPolygon family_limit(Family f);

// ----------------------------------------------------------------- records

/// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

struct RunRecord {
  std::string config_hash;
  std::string timestamp;  // UTC, ISO 8601
  std::string command;
  nlohmann::json inputs;
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;

  nlohmann::json to_json() const;
};

RunRecord make_record(const std::string& command, const nlohmann::json& inputs);
/// Writes run.json next to the outputs.
void write_record(const std::filesystem::path& dir, const RunRecord& record);
/// "# schema=<name>/<version> config_hash=<hash>" banner for CSV outputs.
std::string csv_banner(const std::string& schema, const RunRecord& record);

nlohmann::json spectrum_to_json(const SpectrumResult& s, const std::string& polygon, int k);

// -------------------------------------------------------------- experiments

struct StudyOptions {
  double h = 0.1;  // coarsest mesh size
  int levels = 3;
  MeshOptions mesh;
  SweepOptions sweep() const;
};

struct ConvergeRow {
  int step = 0;
  double parameter = 0.0;
  double hc_distance = 0.0;
  std::vector<double> lambdas;  // extrapolated
};

struct ConvergeReport {
  Family family = Family::Pacman;
  std::vector<ConvergeRow> rows;
  std::vector<double> limit_lambdas;
  int limit_components = 0;
  int limit_sides = 0;
  bool hc_strictly_decreasing = false;
  /// |lambda_k(P_n) - lambda_k(P)| per step.
  std::vector<std::vector<double>> gaps;
};

/// Degenerating family study; steps >= 3. hc_resolution 0 picks a value
/// proportional to each member's parameter.
ConvergeReport converge_family(Family f, int steps, double beta, int k, const StudyOptions& options,
                               double hc_resolution = 0.0);

struct DetachRow {
  double epsilon = 0.0;
  double hc_distance = 0.0;
  double area = 0.0;
  double gen_perimeter = 0.0;
  std::vector<double> lambdas;
};

struct DetachReport {
  std::vector<double> base_lambdas;
  double base_area = 0.0, base_perimeter = 0.0;
  std::vector<DetachRow> rows;
};

DetachReport detach_sweep(const GeneralizedPolygon& P, const std::vector<double>& epsilons, double beta, int k,
                          const StudyOptions& options);

// CLI verbs: each writes its artifacts plus run.json into out_dir.
RunRecord cmd_eigs(const std::filesystem::path& polygon_file, double beta, int k, const StudyOptions& options,
                   const std::filesystem::path& out_dir);
RunRecord cmd_cut_sweep(const std::filesystem::path& polygon_file, double beta, const std::vector<double>& epsilons,
                        const StudyOptions& options, const std::filesystem::path& out_dir);
RunRecord cmd_converge(Family family, int steps, double beta, int k, const StudyOptions& options,
                       const std::filesystem::path& out_dir);
RunRecord cmd_optimize(const std::filesystem::path& config_file, const std::filesystem::path& out_dir);
RunRecord cmd_detach_sweep(const std::filesystem::path& polygon_file, const std::vector<double>& epsilons, double beta,
                           int k, const StudyOptions& options, const std::filesystem::path& out_dir);
RunRecord cmd_fill_compare(const std::filesystem::path& polygon_file, double beta, int k, const StudyOptions& options,
                           const std::filesystem::path& out_dir);

}  // namespace robin
