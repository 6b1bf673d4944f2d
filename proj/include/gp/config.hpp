#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gp/field.hpp"

namespace gp {

/// Configuration or schema failure; carries the offending field path.
class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

/// Parallelism cap from the GP_THREADS environment variable (default 1).
int thread_cap();

/// Binary field snapshot: magic "GPF1", then dim:u32, n:u32, L:f64, t:f64,
/// representation:u8 (0 physical, 1 spectral), then row-major interleaved
/// (re, im) f64 pairs, all little-endian.
struct Snapshot {
  Field field;
  double t = 0.0;
};
void write_snapshot(const std::filesystem::path& path, const Field& f,
                    double t);
Snapshot read_snapshot(const std::filesystem::path& path);

/// a exp(-|x - c|^2 / (2 w^2)) exp(i m (x_1 - c_1)), with the displacement
/// taken to the nearest periodic image.
Field make_gaussian_datum(const GridPtr& grid, double amplitude, double width,
                          const std::array<double, 3>& center,
                          double modulation = 0.0);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::uint64_t fnv1a_file(const std::filesystem::path& path);

struct DatumConfig {
  std::string kind = "gaussian";  // or from_file
  double amplitude = 0.01;
  double width = 5.0;
  std::array<double, 3> center{-1.0, -1.0, -1.0};  // negative: box center
  double modulation = 0.0;
  std::string path;  // from_file only
};

struct ExperimentConfig {
  std::string name = "run";
  int dim = 2;
  int n = 64;
  double L = 50.0;
  DatumConfig datum;
  std::string task;
  nlohmann::json task_params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
};

/// Strict parse: unknown keys and wrong types throw ValidationError naming
/// the field path.
ExperimentConfig parse_config(const nlohmann::json& j);

Field build_datum(const ExperimentConfig& cfg);

/// Execute the configured task, writing every output plus manifest.json
/// (resolved config, version, per-file content hashes) under out_dir.
/// Returns 0 on success, 2 on validation failure, 3 on numerical abort.
int run(const ExperimentConfig& cfg);

}  // namespace gp
