#include "floquet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <unistd.h>

#include <fmt/format.h>

#include "floquet/greens.hpp"
#include "floquet/hfe.hpp"
#include "floquet/lindblad.hpp"
#include "floquet/propagator.hpp"
#include "floquet/sambe.hpp"
#include "floquet/topology.hpp"

namespace floquet::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return fmt::format("{:.15g}", v); }

json num_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// Momentum path for 1D sweeps; kx varies, ky = k_fixed. Custom models have no k.
std::vector<std::array<double, 2>> k_path(const RunConfig& cfg) {
  if (cfg.model.kind == ModelKind::custom) return {{0.0, 0.0}};
  const auto& n = cfg.numerics;
  std::vector<std::array<double, 2>> out;
  for (int i = 0; i < n.k_points; ++i) {
    out.push_back({n.k_min + (n.k_max - n.k_min) * i / n.k_points, n.k_fixed});
  }
  return out;
}

TaskOutput run_spectrum(const RunConfig& cfg) {
  TaskOutput res;
  const int cutoff = cfg.cutoff();
  const double omega = cfg.model.drive.omega;
  const auto path = k_path(cfg);
  std::vector<QuasienergySolution> bands;
  bool ambiguous = false;
  double oracle_dev = 0.0;
  for (const auto& k : path) {
    const auto modes = cfg.modes(k[0], k[1]);
    bands.push_back(physical_quasienergies(modes, cutoff));
    ambiguous = ambiguous || bands.back().ambiguous;
    if (cfg.numerics.oracle_check) {
      const Matrix u = evolve(cfg.model.sampler(k[0], k[1]), 0.0, cfg.model.drive.period(),
                              cfg.numerics.n_steps);
      oracle_dev = std::max(oracle_dev, circular_set_distance(quasienergies_from_monodromy(u, omega),
                                                              bands.back().folded, omega));
    }
  }
  if (ambiguous) res.warnings.push_back("replica identification ambiguous at some k-points");
  if (cfg.numerics.oracle_check) res.checks["monodromy_max_deviation"] = oracle_dev;

  const auto order = connect_bands(bands);
  std::string csv = "k,branch,n_replica,quasienergy,weight0\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (int b = 0; b < bands[i].size(); ++b) {
      const int s = order[i][static_cast<std::size_t>(b)];
      csv += fmt::format("{},{},{},{},{}\n", num(path[i][0]), b, bands[i].replica(s),
                         num(bands[i].folded(s)), num(bands[i].weight0(s)));
    }
  }
  res.files.emplace_back("spectrum.csv", std::move(csv));

  if (cfg.dim() == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& b : bands) {
      lo = std::min(lo, b.folded(0));
      hi = std::max(hi, b.folded(0));
    }
    res.summary = hi - lo;
  } else {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& b : bands) {
      for (int s = 0; s + 1 < b.size(); ++s) gap = std::min(gap, b.folded(s + 1) - b.folded(s));
    }
    res.summary = gap;
  }
  return res;
}

TaskOutput run_hfe(const RunConfig& cfg) {
  TaskOutput res;
  const auto& drive = cfg.model.drive;
  const auto report = van_vleck_hf(cfg.modes(cfg.k[0], cfg.k[1]));
  std::optional<double> j_eff, k_eff, gap;
  switch (cfg.model.kind) {
    case ModelKind::chain1d: j_eff = effective_hopping_1d(cfg.model.hopping, drive.amplitude); break;
    case ModelKind::dirac: gap = dirac_gap(drive.amplitude, drive.omega); break;
    case ModelKind::honeycomb: {
      const auto p = haldane_effective(cfg.model.hopping, drive.amplitude, drive.omega, 40,
                                       drive.helicity);
      j_eff = p.j_eff;
      k_eff = p.k_eff;
      break;
    }
    case ModelKind::custom: break;
  }
  const double correction_norm = report.correction.norm();
  json j = {{"J_eff", num_or_null(j_eff)},
            {"K_eff", num_or_null(k_eff)},
            {"dirac_gap", num_or_null(gap)},
            {"correction_norm", correction_norm},
            {"k", {cfg.k[0], cfg.k[1]}},
            {"effective_spectrum", std::vector<double>()}};
  const auto values = hermitian_eigen(report.total).values;
  for (Eigen::Index i = 0; i < values.size(); ++i) j["effective_spectrum"].push_back(values(i));
  res.files.emplace_back("hfe.json", j.dump(2) + "\n");
  switch (cfg.model.kind) {
    case ModelKind::chain1d: res.summary = *j_eff; break;
    case ModelKind::dirac: res.summary = *gap; break;
    case ModelKind::honeycomb: res.summary = *k_eff; break;
    case ModelKind::custom: res.summary = correction_norm; break;
  }
  return res;
}

TaskOutput run_chern(const RunConfig& cfg) {
  TaskOutput res;
  const auto grid = floquet_band_grid(
      [&cfg](double kx, double ky) { return cfg.modes(kx, ky); }, cfg.cutoff(), cfg.numerics.nk,
      honeycomb::reciprocal_vectors());
  json report = json::array();
  for (int b = 0; b < grid.n_bands; ++b) {
    const auto field = berry_curvature_grid(grid, b);
    for (const auto& w : field.warnings) {
      if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) {
        res.warnings.push_back(w);
      }
    }
    const auto c = chern_number(field, cfg.numerics.chern_tolerance);
    report.push_back({{"band", b}, {"chern", c.chern}, {"residual", c.residual}, {"min_gap", field.min_gap}});
    if (b == 0) res.summary = c.chern;
    if (cfg.numerics.write_curvature) {
      std::string csv = "kx,ky,F\n";
      for (int i = 0; i < grid.nk; ++i) {
        for (int jj = 0; jj < grid.nk; ++jj) {
          const auto k = grid.k(i, jj);
          csv += fmt::format("{},{},{}\n", num(k[0]), num(k[1]), num(field.flux(i, jj)));
        }
      }
      res.files.emplace_back(fmt::format("curvature_band{}.csv", b), std::move(csv));
    }
  }
  res.files.emplace(res.files.begin(), "chern.json", report.dump(2) + "\n");
  return res;
}

TaskOutput run_greens(const RunConfig& cfg) {
  TaskOutput res;
  const int cutoff = cfg.cutoff();
  const double omega = cfg.model.drive.omega;
  const int window =
      cfg.numerics.window >= 0 ? cfg.numerics.window : std::max(0, cutoff - cfg.n_max());
  const auto nu = fbz_frequency_grid(omega, cfg.numerics.nu_points);
  const auto path = k_path(cfg);
  std::string csv = "nu_unfolded,k,A,N\n";
  double weight = 0.0;
  for (const auto& k : path) {
    const auto grid = floquet_greens(cfg.modes(k[0], k[1]), cfg.bath, cutoff, nu);
    const auto a = spectral_function(grid, window);
    const auto n = occupation_function(grid, window);
    for (std::size_t i = 0; i < a.nu.size(); ++i) {
      csv += fmt::format("{},{},{},{}\n", num(a.nu[i]), num(k[0]), num(a.value[i]), num(n.value[i]));
      weight += a.value[i];
    }
  }
  res.summary = weight * omega / cfg.numerics.nu_points / static_cast<double>(path.size());
  res.files.emplace_back("greens.csv", std::move(csv));
  return res;
}

TaskOutput run_ness(const RunConfig& cfg) {
  TaskOutput res;
  const LindbladSystem sys{cfg.model.sampler(cfg.k[0], cfg.k[1]), cfg.jumps};
  const auto ness = find_ness(sys, cfg.model.drive.omega, cfg.numerics.ness_tolerance,
                              cfg.ness.max_periods, cfg.ness.steps_per_period, cfg.ness.samples);
  const int d = sys.dim();
  std::string csv = "t";
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) csv += fmt::format(",rho_re_{0}{1},rho_im_{0}{1}", i, j);
  }
  csv += "\n";
  double mean = 0.0;
  for (std::size_t s = 0; s < ness.t.size(); ++s) {
    csv += num(ness.t[s]);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        csv += fmt::format(",{},{}", num(ness.rho[s](i, j).real()), num(ness.rho[s](i, j).imag()));
      }
    }
    csv += "\n";
    if (s + 1 < ness.t.size()) mean += ness.rho[s](0, 0).real();
  }
  res.summary = mean / static_cast<double>(ness.t.size() - 1);
  res.checks["periods"] = ness.periods;
  res.checks["residual"] = ness.residual;
  res.files.emplace_back("ness.csv", std::move(csv));
  return res;
}

json load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
  json j = load_json_file(path);
  for (const auto& o : overrides) apply_override(j, o);
  return j;
}

struct PointResult {
  int code = exit_ok;
  std::string message;
  double summary = std::numeric_limits<double>::quiet_NaN();
};

/// Parse, execute, then write outputs and manifest. Nothing is written on failure.
PointResult run_pipeline(const json& config) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  try {
    cfg = parse_config(config);
  } catch (const ConfigError& e) {
    return {exit_schema, e.what()};
  }
  TaskOutput output;
  try {
    output = execute(cfg);
  } catch (const std::exception& e) {
    return {exit_solver, e.what()};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest = {{"toolkit_version", toolkit_version},
                   {"task", std::string(to_string(cfg.task))},
                   {"model", std::string(to_string(cfg.model.kind))},
                   {"config_sha256", config_hash(config)},
                   {"config", config},
                   {"wall_time_seconds", wall},
                   {"files", json::array()},
                   {"warnings", output.warnings},
                   {"checks", output.checks},
                   {"summary_metric", output.summary}};
  try {
    fs::create_directories(cfg.output);
    for (const auto& [name, contents] : output.files) {
      write_atomic((fs::path(cfg.output) / name).string(), contents);
      manifest["files"].push_back(name);
    }
    write_atomic((fs::path(cfg.output) / "manifest.json").string(), manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    return {exit_solver, std::string("writing outputs failed: ") + e.what()};
  }
  return {exit_ok, {}, output.summary};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

TaskOutput execute(const RunConfig& cfg) {
  switch (cfg.task) {
    case Task::spectrum: return run_spectrum(cfg);
    case Task::hfe: return run_hfe(cfg);
    case Task::chern: return run_chern(cfg);
    case Task::greens: return run_greens(cfg);
    case Task::ness: return run_ness(cfg);
  }
  throw std::logic_error("unhandled task");
}

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = fmt::format("{}.tmp.{}.{}", path, ::getpid(),
                                      std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp);
    }
  }
  fs::rename(tmp, path);
}

int run_command(const std::string& config_path, const std::vector<std::string>& overrides,
                std::ostream& out, std::ostream& err) {
  json config;
  try {
    config = load_with_overrides(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_schema;
  }
  const auto r = run_pipeline(config);
  if (r.code != exit_ok) {
    err << "error: " << r.message << "\n";
    return r.code;
  }
  out << fmt::format("ok: summary_metric = {}\n", num(r.summary));
  return exit_ok;
}

int validate_command(const std::string& config_path, const std::vector<std::string>& overrides,
                     std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_config(load_with_overrides(config_path, overrides));
    out << fmt::format("ok: task {} on model {}\n", to_string(cfg.task), to_string(cfg.model.kind));
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_schema;
  }
}

int sweep_command(const std::string& config_path, const std::string& parameter,
                  const std::string& values, const std::vector<std::string>& overrides,
                  std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  json base;
  RunConfig base_cfg;
  std::vector<std::string> texts;
  std::vector<double> numbers;
  int workers = 1;
  try {
    base = load_with_overrides(config_path, overrides);
    base_cfg = parse_config(base);

    for (const auto& raw : split(values, ',')) {
      const auto t = trim(raw);
      if (t.empty()) continue;
      const json v = json::parse(t, nullptr, false);
      if (v.is_discarded() || !v.is_number()) throw ConfigError("--values", "'" + t + "' is not a number");
      texts.push_back(t);
      numbers.push_back(v.get<double>());
    }
    if (texts.empty()) throw ConfigError("--values", "empty value list");
    if (std::set<std::string>(texts.begin(), texts.end()).size() != texts.size()) {
      throw ConfigError("--values", "duplicate values");
    }
    if (parameter == "output" || parameter == "workers") {
      throw ConfigError(parameter, "cannot be swept");
    }
    json probe = base;
    set_dotted(probe, parameter, numbers.front());
    try {
      parse_config(probe);
    } catch (const ConfigError& e) {
      if (e.unknown_key()) throw ConfigError(parameter, "not a config key");
    }
    std::string pointer = "/" + parameter;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    const json::json_pointer ptr(pointer);
    if (base.contains(ptr) && !base[ptr].is_number()) {
      throw ConfigError(parameter, "not a numeric config key");
    }

    workers = base_cfg.workers;
    if (const char* env = std::getenv("FLOQUET_WORKERS")) {
      const json v = json::parse(env, nullptr, false);
      if (v.is_discarded() || !v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError("FLOQUET_WORKERS", "expected a positive integer");
      }
      workers = static_cast<int>(v.get<long long>());
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_schema;
  } catch (const json::exception& e) {
    err << "error: " << parameter << ": " << e.what() << "\n";
    return exit_schema;
  }

  const fs::path root = base_cfg.output;
  std::vector<PointResult> results(texts.size());
  std::vector<std::string> dirs(texts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < texts.size(); i = next++) {
      dirs[i] = "value_" + texts[i];
      json point = base;
      set_dotted(point, parameter, numbers[i]);
      point["output"] = (root / dirs[i]).string();
      results[i] = run_pipeline(point);
    }
  };
  const int n_threads = std::min<int>(workers, static_cast<int>(texts.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "value,summary_metric\n";
  json points = json::array();
  int failures = 0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto& r = results[i];
    csv += fmt::format("{},{}\n", texts[i], r.code == exit_ok ? num(r.summary) : "nan");
    json p = {{"value", numbers[i]}, {"directory", dirs[i]}, {"exit_code", r.code},
              {"status", r.code == exit_ok ? "ok" : "failed"}};
    if (r.code != exit_ok) {
      p["error"] = r.message;
      ++failures;
      err << fmt::format("error: {} = {}: {}\n", parameter, texts[i], r.message);
    }
    points.push_back(std::move(p));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"toolkit_version", toolkit_version},
                   {"sweep_parameter", parameter},
                   {"config_sha256", config_hash(base)},
                   {"config", base},
                   {"workers", n_threads},
                   {"wall_time_seconds", wall},
                   {"files", {"sweep.csv"}},
                   {"points", points},
                   {"failures", failures}};
  try {
    fs::create_directories(root);
    write_atomic((root / "sweep.csv").string(), csv);
    write_atomic((root / "manifest.json").string(), manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: writing sweep outputs failed: " << e.what() << "\n";
    return exit_solver;
  }
  out << fmt::format("ok: {} of {} points succeeded\n", texts.size() - failures, texts.size());
  return failures == 0 ? exit_ok : exit_solver;
}

}  // namespace floquet::cli
