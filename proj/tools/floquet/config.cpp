#include "floquet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "floquet/sambe.hpp"

namespace floquet::cli {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::spectrum: return "spectrum";
    case Task::hfe: return "hfe";
    case Task::chern: return "chern";
    case Task::greens: return "greens";
    case Task::ness: return "ness";
  }
  return "?";
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key", true);
  }
}

double number(const json& obj, const std::string& path, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required key missing");
  }
  if (!it->is_number()) throw ConfigError(join(path, key), "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(join(path, key), "must be finite");
  return v;
}

double positive(const json& obj, const std::string& path, const std::string& key,
                std::optional<double> fallback = std::nullopt) {
  const double v = number(obj, path, key, fallback);
  if (!(v > 0.0)) throw ConfigError(join(path, key), "must be positive");
  return v;
}

int integer(const json& obj, const std::string& path, const std::string& key, int fallback,
            int minimum) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  const auto v = it->get<long long>();
  if (v < minimum || v > std::numeric_limits<int>::max()) {
    throw ConfigError(join(path, key), fmt::format("must be an integer >= {}", minimum));
  }
  return static_cast<int>(v);
}

bool boolean(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return it->get<bool>();
}

std::string string(const json& obj, const std::string& path, const std::string& key,
                   std::optional<std::string> fallback = std::nullopt) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "required key missing");
  }
  if (!it->is_string()) throw ConfigError(join(path, key), "expected a string");
  return it->get<std::string>();
}

Eigen::MatrixXd real_matrix(const json& rows, const std::string& path) {
  if (!rows.is_array() || rows.empty()) throw ConfigError(path, "expected a non-empty list of rows");
  const auto n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != n) {
      throw ConfigError(fmt::format("{}[{}]", path, i), "expected a square matrix");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number()) throw ConfigError(fmt::format("{}[{}][{}]", path, i, j), "expected a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

Matrix complex_matrix(const json& obj, const std::string& path,
                      const std::set<std::string>& extra = {}) {
  std::set<std::string> allowed{"re", "im"};
  allowed.insert(extra.begin(), extra.end());
  check_keys(obj, path, allowed);
  if (!obj.contains("re")) throw ConfigError(join(path, "re"), "required key missing");
  const Eigen::MatrixXd re = real_matrix(obj["re"], join(path, "re"));
  Matrix m = re.cast<cplx>();
  if (obj.contains("im")) {
    const Eigen::MatrixXd im = real_matrix(obj["im"], join(path, "im"));
    if (im.rows() != re.rows()) throw ConfigError(join(path, "im"), "shape differs from re");
    m += I * im.cast<cplx>();
  }
  return m;
}

FourierModeSet parse_custom_modes(const json& list, double omega) {
  const std::string path = "custom_modes";
  if (!list.is_array() || list.empty()) throw ConfigError(path, "expected a non-empty list");
  std::vector<std::pair<int, Matrix>> entries;
  int n_max = 0;
  Eigen::Index dim = -1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = fmt::format("{}[{}]", path, i);
    const auto& e = list[i];
    if (!e.is_object() || !e.contains("n") || !e["n"].is_number_integer()) {
      throw ConfigError(join(p, "n"), "expected an integer harmonic index");
    }
    const int n = e["n"].get<int>();
    Matrix m = complex_matrix(e, p, {"n"});
    if (dim < 0) dim = m.rows();
    if (m.rows() != dim) throw ConfigError(p, "matrix dimension differs from the first entry");
    n_max = std::max(n_max, std::abs(n));
    entries.emplace_back(n, std::move(m));
  }
  FourierModeSet modes(omega, n_max, static_cast<int>(dim));
  std::set<int> seen;
  for (const auto& [n, m] : entries) {
    if (!seen.insert(n).second) throw ConfigError(path, fmt::format("harmonic n = {} given twice", n));
    modes.set_mode(n, m);
  }
  if (modes.pairing_error() > 1e-12) {
    throw ConfigError(path, "H(t) must be Hermitian: H_{-n} = H_n^dagger is violated");
  }
  return modes;
}

}  // namespace

int RunConfig::n_max() const { return model.natural_n_max(); }

int RunConfig::cutoff() const {
  return numerics.cutoff > 0 ? numerics.cutoff : default_cutoff(n_max());
}

FourierModeSet RunConfig::modes(double kx, double ky) const {
  if (numerics.n_samples > 0 && model.kind != ModelKind::custom) {
    return fourier_modes(model.sampler(kx, ky), model.drive.omega, n_max(), numerics.n_samples);
  }
  return model.modes(kx, ky);
}

RunConfig parse_config(const json& j) {
  check_keys(j, "", {"model", "task", "hopping", "drive", "numerics", "bath", "k", "custom_modes",
                     "jump_operators", "ness", "output", "workers"});
  RunConfig cfg;
  cfg.source = j;

  const auto kind = parse_model_kind(string(j, "", "model"));
  if (!kind) throw ConfigError("model", "expected one of chain1d, dirac, honeycomb, custom");
  cfg.model.kind = *kind;

  const std::string task = string(j, "", "task");
  if (task == "spectrum") cfg.task = Task::spectrum;
  else if (task == "hfe") cfg.task = Task::hfe;
  else if (task == "chern") cfg.task = Task::chern;
  else if (task == "greens") cfg.task = Task::greens;
  else if (task == "ness") cfg.task = Task::ness;
  else throw ConfigError("task", "expected one of spectrum, hfe, chern, greens, ness");

  cfg.model.hopping = positive(j, "", "hopping", 1.0);

  if (!j.contains("drive")) throw ConfigError("drive", "required key missing");
  const auto& d = j["drive"];
  check_keys(d, "drive", {"omega", "amplitude", "polarization", "helicity"});
  cfg.model.drive.omega = positive(d, "drive", "omega");
  cfg.model.drive.amplitude = number(d, "drive", "amplitude", 0.0);
  if (cfg.model.drive.amplitude < 0.0) throw ConfigError("drive.amplitude", "must be non-negative");
  const auto pol = parse_polarization(string(d, "drive", "polarization", "circular"));
  if (!pol) throw ConfigError("drive.polarization", "expected linear or circular");
  cfg.model.drive.polarization = *pol;
  const auto helicity = d.find("helicity");
  if (helicity != d.end()) {
    if (!helicity->is_number_integer() || std::abs(helicity->get<long long>()) != 1) {
      throw ConfigError("drive.helicity", "expected +1 or -1");
    }
    cfg.model.drive.helicity = helicity->get<int>();
  }
  if (cfg.model.kind == ModelKind::dirac && cfg.model.drive.polarization != Polarization::circular) {
    throw ConfigError("drive.polarization", "the dirac model requires circular polarization");
  }
  // Periodic in k, so Brillouin-zone grids wrap; spectra are gauge independent.
  if (cfg.model.kind == ModelKind::honeycomb) cfg.model.gauge = BlochGauge::periodic;

  const json empty = json::object();
  const auto& n = j.contains("numerics") ? j["numerics"] : empty;
  check_keys(n, "numerics", {"M", "n_max", "n_steps", "Nk", "nu_points", "n_samples", "k_points",
                             "k_min", "k_max", "k_fixed", "window", "oracle_check",
                             "write_curvature", "tolerances"});
  auto& num = cfg.numerics;
  num.cutoff = integer(n, "numerics", "M", 0, 1);
  if (n.contains("n_max")) num.n_max = integer(n, "numerics", "n_max", 0, 1);
  num.n_steps = integer(n, "numerics", "n_steps", num.n_steps, 1);
  num.nk = integer(n, "numerics", "Nk", num.nk, 2);
  num.nu_points = integer(n, "numerics", "nu_points", num.nu_points, 1);
  num.n_samples = integer(n, "numerics", "n_samples", 0, 1);
  num.k_points = integer(n, "numerics", "k_points", num.k_points, 1);
  num.k_min = number(n, "numerics", "k_min", num.k_min);
  num.k_max = number(n, "numerics", "k_max", num.k_max);
  if (!(num.k_max > num.k_min)) throw ConfigError("numerics.k_max", "must exceed numerics.k_min");
  num.k_fixed = number(n, "numerics", "k_fixed", 0.0);
  num.window = integer(n, "numerics", "window", -1, 0);
  num.oracle_check = boolean(n, "numerics", "oracle_check", false);
  num.write_curvature = boolean(n, "numerics", "write_curvature", false);
  if (n.contains("tolerances")) {
    const auto& t = n["tolerances"];
    check_keys(t, "numerics.tolerances", {"chern", "ness"});
    num.chern_tolerance = positive(t, "numerics.tolerances", "chern", num.chern_tolerance);
    num.ness_tolerance = positive(t, "numerics.tolerances", "ness", num.ness_tolerance);
  }
  cfg.model.n_max = num.n_max;

  if (j.contains("bath")) {
    const auto& b = j["bath"];
    check_keys(b, "bath", {"gamma", "beta"});
    cfg.bath.gamma = positive(b, "bath", "gamma", cfg.bath.gamma);
    if (b.contains("beta") && b["beta"].is_string()) {
      if (b["beta"].get<std::string>() != "inf") throw ConfigError("bath.beta", "expected a number or \"inf\"");
      cfg.bath.beta = std::numeric_limits<double>::infinity();
    } else {
      cfg.bath.beta = positive(b, "bath", "beta", cfg.bath.beta);
    }
  }

  if (j.contains("k")) {
    const auto& k = j["k"];
    if (!k.is_array() || k.empty() || k.size() > 2) throw ConfigError("k", "expected [kx] or [kx, ky]");
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (!k[i].is_number()) throw ConfigError(fmt::format("k[{}]", i), "expected a number");
      cfg.k[i] = k[i].get<double>();
    }
  }

  if (cfg.model.kind == ModelKind::custom) {
    if (!j.contains("custom_modes")) throw ConfigError("custom_modes", "required for model custom");
    cfg.model.custom = parse_custom_modes(j["custom_modes"], cfg.model.drive.omega);
  } else if (j.contains("custom_modes")) {
    throw ConfigError("custom_modes", "only valid for model custom");
  }

  if (j.contains("jump_operators")) {
    const auto& list = j["jump_operators"];
    if (!list.is_array()) throw ConfigError("jump_operators", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = fmt::format("jump_operators[{}]", i);
      cfg.jumps.push_back(complex_matrix(list[i], p));
      if (cfg.jumps.back().rows() != cfg.dim()) {
        throw ConfigError(p, fmt::format("expected a {0}x{0} matrix", cfg.dim()));
      }
    }
  }
  if (j.contains("ness")) {
    const auto& s = j["ness"];
    check_keys(s, "ness", {"max_periods", "steps_per_period", "samples"});
    cfg.ness.max_periods = integer(s, "ness", "max_periods", cfg.ness.max_periods, 1);
    cfg.ness.steps_per_period = integer(s, "ness", "steps_per_period", cfg.ness.steps_per_period, 1);
    cfg.ness.samples = integer(s, "ness", "samples", cfg.ness.samples, 1);
  }

  cfg.output = string(j, "", "output", cfg.output);
  if (cfg.output.empty()) throw ConfigError("output", "must not be empty");
  cfg.workers = integer(j, "", "workers", 1, 1);

  switch (cfg.task) {
    case Task::chern:
      if (cfg.model.kind != ModelKind::honeycomb) {
        throw ConfigError("model", "task chern needs a periodic two-dimensional model (honeycomb)");
      }
      break;
    case Task::ness:
      if (cfg.jumps.empty()) throw ConfigError("jump_operators", "required for task ness");
      break;
    default: break;
  }
  if (cfg.numerics.cutoff > 0 && cfg.numerics.cutoff < cfg.n_max()) {
    throw ConfigError("numerics.M", fmt::format("must be >= n_max = {}", cfg.n_max()));
  }
  if (cfg.numerics.n_samples > 0 && cfg.numerics.n_samples < 4 * cfg.n_max() + 1) {
    throw ConfigError("numerics.n_samples", fmt::format("must be >= 4 n_max + 1 = {}", 4 * cfg.n_max() + 1));
  }
  return cfg;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", fmt::format("{} is not valid JSON: {}", path, e.what()));
  }
}

void set_dotted(json& j, const std::string& dotted, json value) {
  if (dotted.empty()) throw ConfigError("<override>", "empty key");
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(dotted, "malformed dotted key");
    if (!node->is_object()) throw ConfigError(dotted, "parent is not an object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("<override>", "expected key=value, got '" + assignment + "'");
  }
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_dotted(j, assignment.substr(0, eq), std::move(value));
}

std::string config_hash(const json& j) {
  const std::string canonical = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace floquet::cli
