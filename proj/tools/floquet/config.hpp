#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "floquet/greens.hpp"
#include "floquet/models.hpp"

namespace floquet::cli {

using json = nlohmann::json;

/// Schema violation; `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message, bool unknown_key = false)
      : std::runtime_error(key + ": " + message), key_(std::move(key)), unknown_(unknown_key) {}
  const std::string& key() const { return key_; }
  bool unknown_key() const { return unknown_; }

 private:
  std::string key_;
  bool unknown_;
};

enum class Task { spectrum, hfe, chern, greens, ness };

std::string_view to_string(Task task);

struct Numerics {
  int cutoff = 0;  // M; 0 = n_max + 6
  std::optional<int> n_max;
  int n_steps = 4096;
  int nk = 24;
  int nu_points = 401;
  int n_samples = 0;  // 0 = closed-form modes
  int k_points = 64;
  double k_min = -pi;
  double k_max = pi;
  double k_fixed = 0.0;
  int window = -1;  // -1 = M - n_max
  bool oracle_check = false;
  bool write_curvature = false;
  double chern_tolerance = 1e-3;
  double ness_tolerance = 1e-10;
};

struct NessOptions {
  int max_periods = 5000;
  int steps_per_period = 2048;
  int samples = 64;
};

struct RunConfig {
  json source;
  Model model;
  Task task = Task::spectrum;
  Numerics numerics;
  BathSpec bath;
  std::array<double, 2> k{0.0, 0.0};
  std::vector<Matrix> jumps;
  NessOptions ness;
  std::string output = "floquet_out";
  int workers = 1;

  int dim() const { return model.dim(); }
  /// Fourier modes at a momentum point, numerical when numerics.n_samples > 0.
  FourierModeSet modes(double kx, double ky) const;
  int n_max() const;
  int cutoff() const;
};

/// Throws ConfigError (exit code 2 territory).
RunConfig parse_config(const json& j);
json load_json_file(const std::string& path);

/// Sets a dotted key, creating intermediate objects.
void set_dotted(json& j, const std::string& dotted, json value);
/// "a.b=value"; the value is parsed as JSON, falling back to a string.
void apply_override(json& j, const std::string& assignment);

/// sha256 of the canonical (sorted-key, compact) serialization.
std::string config_hash(const json& j);

}  // namespace floquet::cli
