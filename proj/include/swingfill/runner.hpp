// Copyright 2026 The swingfill Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command layer behind the swingfill CLI: configuration, the five commands,
// and CSV / JSON rendering. Every command produces a table of rows; each row
// is an ordered JSON object whose keys are the CSV columns.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "swingfill/baselines.hpp"
#include "swingfill/channel.hpp"
#include "swingfill/continuous.hpp"
#include "swingfill/discrete.hpp"

namespace swingfill {

using Json = nlohmann::ordered_json;

/// Raised for invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SweepRange {
  double start = 20.0;
  double stop = 40.0;
  double step = 0.5;

  static SweepRange parse(const std::string& text) {
    SweepRange r;
    double* fields[3] = {&r.start, &r.stop, &r.step};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
      if (end == std::string::npos) throw ConfigError("sweep must be START:STOP:STEP, got '" + text + "'");
      try {
        std::size_t used = 0;
        const std::string part = text.substr(pos, end - pos);
        *fields[i] = std::stod(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw ConfigError("sweep must be START:STOP:STEP, got '" + text + "'");
      }
      pos = end + 1;
    }
    r.validate();
    return r;
  }

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("sweep step must be positive");
    if (!(stop >= start)) throw ConfigError("sweep stop must not be below start");
  }

  /// start, start + step, ... up to stop; each point computed from its index.
  std::vector<double> points() const {
    validate();
    std::vector<double> out;
    for (long i = 0;; ++i) {
      const double v = start + static_cast<double>(i) * step;
      if (v > stop + 1e-9 * step) break;
      out.push_back(v);
      if (out.size() > 1'000'000) throw ConfigError("sweep has more than a million points");
    }
    return out;
  }
};

struct RunConfig {
  std::string command = "solve";
  /// Schemes: criterion names, "levin-campello", "lsb-drop-L", "secc-7-4",
  /// "secc-7-4-discard", "secc-15-11". Empty means the command's default set.
  std::vector<std::string> schemes;
  int bits = 8;
  double sigma = 1.0;
  NoiseKind noise = NoiseKind::Gaussian;
  std::optional<double> psnr_db;
  std::optional<double> mse;
  std::optional<double> beta;
  std::optional<SweepRange> sweep;
  std::optional<std::string> corpus;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1'000'000;
  std::optional<std::vector<double>> swings;
  std::string format = "csv";
  std::optional<std::string> out;
  unsigned workers = 0;

  void validate() const {
    static const std::vector<std::string> commands = {"solve", "sweep", "compare", "simulate", "kkt-check"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
      throw ConfigError("unknown command '" + command + "'");
    if (bits < 1 || bits > WordFormat::kMaxBits) throw ConfigError("bits must be in 1..64");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
    if (psnr_db && mse) throw ConfigError("give either a PSNR or an MSE target, not both");
    if (mse && !(*mse > 0.0)) throw ConfigError("MSE target must be positive");
    if (beta && !(*beta > 0.0)) throw ConfigError("beta must be positive");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (samples < 1) throw ConfigError("samples must be at least 1");
    if (sweep) sweep->validate();
  }
};

/// Overlay the keys present in a JSON config object onto `cfg`.
inline void apply_json_config(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  static const std::vector<std::string> known = {"command", "criterion", "scheme", "bits",    "sigma",
                                                 "noise",   "psnr",      "mse",    "beta",    "sweep",
                                                 "corpus",  "seed",      "samples", "swings", "format",
                                                 "out",     "workers"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError("unknown config key '" + key + "'");
      if (key == "command") cfg.command = value.get<std::string>();
      if (key == "criterion" || key == "scheme") {
        if (value.is_array())
          cfg.schemes = value.get<std::vector<std::string>>();
        else
          cfg.schemes = {value.get<std::string>()};
      }
      if (key == "bits") cfg.bits = value.get<int>();
      if (key == "sigma") cfg.sigma = value.get<double>();
      if (key == "noise") cfg.noise = parse_noise_kind(value.get<std::string>());
      if (key == "psnr") cfg.psnr_db = value.get<double>();
      if (key == "mse") cfg.mse = value.get<double>();
      if (key == "beta") cfg.beta = value.get<double>();
      if (key == "sweep") {
        if (value.is_string()) {
          cfg.sweep = SweepRange::parse(value.get<std::string>());
        } else {
          SweepRange r;
          r.start = value.at("start").get<double>();
          r.stop = value.at("stop").get<double>();
          r.step = value.at("step").get<double>();
          r.validate();
          cfg.sweep = r;
        }
      }
      if (key == "corpus") cfg.corpus = value.get<std::string>();
      if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      if (key == "samples") cfg.samples = value.get<std::uint64_t>();
      if (key == "swings") cfg.swings = value.get<std::vector<double>>();
      if (key == "format") cfg.format = value.get<std::string>();
      if (key == "out") cfg.out = value.get<std::string>();
      if (key == "workers") cfg.workers = value.get<unsigned>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  apply_json_config(base, j);
  return base;
}

/// Round to 12 significant digits so that serialized output is byte-stable.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline Json num(double x) { return std::isfinite(x) ? Json(round12(x)) : Json(nullptr); }

inline Json num_array(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline Json swing_array(const SwingVector& s) { return num_array(s.values()); }

/// A scheme name parsed into what it runs.
struct Scheme {
  enum class Kind { Continuous, LevinCampello, LsbDrop, Secc74, Secc74Discard, Secc1511 };
  Kind kind = Kind::Continuous;
  Criterion criterion = Criterion::MinEnergy;
  int dropped = 0;
  std::string name;

  static Scheme parse(const std::string& name) {
    Scheme s;
    s.name = name;
    if (name == "levin-campello") {
      s.kind = Kind::LevinCampello;
    } else if (name.rfind("lsb-drop-", 0) == 0) {
      s.kind = Kind::LsbDrop;
      try {
        std::size_t used = 0;
        s.dropped = std::stoi(name.substr(9), &used);
        if (used != name.size() - 9) throw std::invalid_argument(name);
      } catch (const std::exception&) {
        throw ConfigError("scheme '" + name + "' needs an integer drop count, e.g. lsb-drop-3");
      }
    } else if (name == "secc-7-4") {
      s.kind = Kind::Secc74;
    } else if (name == "secc-7-4-discard") {
      s.kind = Kind::Secc74Discard;
    } else if (name == "secc-15-11") {
      s.kind = Kind::Secc1511;
    } else {
      try {
        s.criterion = parse_criterion(name);
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown scheme '" + name + "'");
      }
    }
    return s;
  }

  bool is_baseline() const { return kind != Kind::Continuous && kind != Kind::LevinCampello; }
};

namespace detail {

/// Evaluate fn(i) for i in [0, n) on a small thread pool; results keep index order.
template <class Fn>
std::vector<Json> parallel_rows(std::size_t n, unsigned workers, Fn fn) {
  std::vector<Json> rows(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) rows[i] = fn(i);
  };
  unsigned threads = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return rows;
}

inline std::vector<double> target_psnrs(const RunConfig& cfg, const WordFormat& format) {
  if (cfg.sweep) return cfg.sweep->points();
  if (cfg.mse) return {psnr_from_mse(*cfg.mse, format)};
  if (cfg.psnr_db) return {*cfg.psnr_db};
  throw ConfigError("give a target with --psnr, --mse or --sweep");
}

inline FidelitySpec fidelity_for(const RunConfig& cfg, const WordFormat& format, double psnr_db) {
  if (cfg.mse && !cfg.sweep) return FidelitySpec(*cfg.mse);
  return FidelitySpec::from_psnr(psnr_db, format);
}

/// Smallest swing s in [0, hi] with mse(s) <= budget, for nonincreasing mse.
template <class MseAt>
std::optional<double> smallest_swing(MseAt mse_at, double budget, double hi) {
  if (mse_at(0.0) <= budget) return 0.0;
  if (mse_at(hi) > budget) return std::nullopt;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (mse_at(mid) > budget ? lo : hi) = mid;
  }
  return hi;
}

inline Json base_row(double psnr_db, double budget, const std::string& scheme, const std::string& mode) {
  Json r;
  r["psnr_db"] = num(psnr_db);
  r["mse_budget"] = num(budget);
  r["scheme"] = scheme;
  r["mode"] = mode;
  r["status"] = "ok";
  r["message"] = "";
  for (const char* k : {"energy", "rho", "edp", "pasr", "achieved_mse", "achieved_psnr_db", "kkt_residual",
                        "water_level", "uniform_swing"})
    r[k] = nullptr;
  r["iterations"] = nullptr;
  r["capped_count"] = nullptr;
  for (const char* k : {"swings", "capped", "nonneg_duals", "cap_duals", "sand_depths"}) r[k] = nullptr;
  return r;
}

inline void fill_metrics(Json& r, const SwingVector& swings, double achieved_mse, const WordFormat& format) {
  r["energy"] = num(energy(swings));
  r["rho"] = num(max_swing(swings));
  r["edp"] = num(edp(swings));
  r["pasr"] = energy(swings) > 0.0 ? num(pasr(swings)) : Json(nullptr);
  r["achieved_mse"] = num(achieved_mse);
  r["achieved_psnr_db"] = achieved_mse > 0.0 ? num(psnr_from_mse(achieved_mse, format)) : Json(nullptr);
  r["swings"] = swing_array(swings);
}

inline Json fail_row(Json r, const std::string& status, const std::string& message) {
  r["status"] = status;
  r["message"] = message;
  return r;
}

/// One (target, scheme) evaluation. `detailed` adds duals for the solve command.
inline Json evaluate(const RunConfig& cfg, const Scheme& scheme, double psnr_db, bool detailed) {
  const WordFormat format(cfg.bits);
  const NoiseModel noise(cfg.noise, cfg.sigma);
  const FidelitySpec fid = fidelity_for(cfg, format, psnr_db);
  const double v = fid.mse_budget();
  const bool discrete = cfg.beta.has_value() && !scheme.is_baseline();
  Json r = base_row(psnr_db, v, scheme.name, scheme.is_baseline() ? "baseline" : discrete ? "discrete" : "continuous");
  try {
    if (discrete) {
      const Granularity beta(*cfg.beta * cfg.sigma);  // beta is given in units of sigma
      DiscreteResult res;
      if (scheme.kind == Scheme::Kind::LevinCampello)
        res = levin_campello(format, noise, fid, beta);
      else if (scheme.criterion == Criterion::MinEdp)
        res = sand_pour_water_fill(format, noise, fid, beta);
      else
        res = discrete_water_fill(scheme.criterion, format, noise, fid, beta);
      fill_metrics(r, res.swings, res.achieved_mse, format);
      r["iterations"] = res.iterations;
      if (detailed && scheme.criterion == Criterion::MinEdp && scheme.kind == Scheme::Kind::Continuous)
        r["cap_duals"] = num_array(res.cap_duals);
      return r;
    }
    if (scheme.kind == Scheme::Kind::Continuous) {
      const auto sol = solve(scheme.criterion, format, noise, fid);
      fill_metrics(r, sol.swings, sol.achieved_mse, format);
      r["status"] = sol.saturated ? "saturated" : "ok";
      r["kkt_residual"] = num(sol.kkt_residual);
      r["water_level"] = num(sol.water_level);
      r["capped_count"] = sol.capped_count();
      Json capped = Json::array();
      for (bool c : sol.capped) capped.push_back(c);
      r["capped"] = capped;
      if (detailed) {
        r["nonneg_duals"] = num_array(sol.nonneg_duals);
        r["cap_duals"] = num_array(sol.cap_duals);
        r["sand_depths"] = num_array(sol.sand_depths);
      }
      return r;
    }
    // Baselines: least uniform swing meeting the budget.
    const double hi = 40.0 * cfg.sigma;
    std::optional<double> swing;
    SwingVector swings;
    std::function<double(double)> mse_at;
    if (scheme.kind == Scheme::Kind::LsbDrop) {
      check_dropped_count(format, scheme.dropped);
      mse_at = [&](double s) { return lsb_dropping_mse(format, scheme.dropped, s, noise); };
      swing = smallest_swing(mse_at, v, hi);
      if (swing) {
        swings = lsb_dropping_swings(format, scheme.dropped, *swing);
        r["energy"] = num(lsb_dropping_energy(format, scheme.dropped, *swing));
      }
    } else {
      const HammingCode code = scheme.kind == Scheme::Kind::Secc1511 ? HammingCode::h1511() : HammingCode::h74();
      const auto layout = scheme.kind == Scheme::Kind::Secc1511
                              ? SelectiveEccLayout::round_robin(format, 4, code)
                              : SelectiveEccLayout::single_word(format, code, scheme.kind == Scheme::Kind::Secc74Discard);
      mse_at = [&, layout, code](double s) { return selective_ecc_mse(layout, code, s, noise); };
      swing = smallest_swing(mse_at, v, hi);
      if (swing) {
        r["energy"] = num(selective_ecc_energy(layout, *swing));
        r["rho"] = num(*swing);
        r["edp"] = num(selective_ecc_energy(layout, *swing) * *swing);
      }
    }
    if (!swing) return fail_row(r, "infeasible", "target PSNR is above the scheme's ceiling");
    const double m = mse_at(*swing);
    if (scheme.kind == Scheme::Kind::LsbDrop) {
      fill_metrics(r, swings, m, format);
    } else {
      r["achieved_mse"] = num(m);
      r["achieved_psnr_db"] = m > 0.0 ? num(psnr_from_mse(m, format)) : Json(nullptr);
    }
    r["uniform_swing"] = num(*swing);
    return r;
  } catch (const Infeasible& e) {
    return fail_row(r, "infeasible", e.what());
  } catch (const std::exception& e) {
    return fail_row(r, "failed", e.what());
  }
}

inline std::vector<Scheme> schemes_or(const RunConfig& cfg, const std::vector<std::string>& fallback) {
  std::vector<Scheme> out;
  for (const auto& name : cfg.schemes.empty() ? fallback : cfg.schemes) out.push_back(Scheme::parse(name));
  for (const auto& s : out)
    if (s.kind == Scheme::Kind::LevinCampello && !cfg.beta) throw ConfigError("levin-campello needs --beta");
  return out;
}

inline bool row_ok(const Json& r) { return r["status"] == "ok" || r["status"] == "saturated"; }

}  // namespace detail

/// Result of one command: ordered rows plus a header with the run settings.
struct CommandResult {
  std::string command;
  Json settings;
  std::vector<std::string> columns;
  std::vector<Json> rows;
  bool ok = true;
};

inline Json settings_of(const RunConfig& cfg) {
  Json s;
  s["bits"] = cfg.bits;
  s["sigma"] = num(cfg.sigma);
  s["noise"] = std::string(to_string(cfg.noise));
  s["beta"] = cfg.beta ? num(*cfg.beta) : Json(nullptr);
  s["seed"] = cfg.seed;
  return s;
}

inline std::vector<std::string> solution_columns() {
  return {"psnr_db",      "mse_budget",       "scheme",       "mode",        "status",        "message",
          "energy",       "rho",              "edp",          "pasr",        "achieved_mse",  "achieved_psnr_db",
          "kkt_residual", "water_level",      "uniform_swing", "iterations", "capped_count",  "swings",
          "capped",       "nonneg_duals",     "cap_duals",    "sand_depths"};
}

inline CommandResult cmd_solve(const RunConfig& cfg) {
  const WordFormat format(cfg.bits);
  const auto schemes = detail::schemes_or(cfg, {"min-energy"});
  if (cfg.sweep) throw ConfigError("solve takes a single target; use sweep for a range");
  const auto targets = detail::target_psnrs(cfg, format);
  CommandResult res{"solve", settings_of(cfg), solution_columns(), {}, true};
  for (const auto& s : schemes) res.rows.push_back(detail::evaluate(cfg, s, targets.front(), true));
  for (const auto& r : res.rows) res.ok = res.ok && detail::row_ok(r);
  return res;
}

inline CommandResult run_grid(const RunConfig& cfg, const std::string& command, const std::vector<Scheme>& schemes) {
  const WordFormat format(cfg.bits);
  RunConfig grid_cfg = cfg;
  if (!grid_cfg.sweep && !grid_cfg.psnr_db && !grid_cfg.mse) grid_cfg.sweep = SweepRange{};
  const auto targets = detail::target_psnrs(grid_cfg, format);
  const std::size_t ns = schemes.size();
  CommandResult res{command, settings_of(cfg), solution_columns(), {}, true};
  res.rows = detail::parallel_rows(targets.size() * ns, cfg.workers, [&](std::size_t i) {
    return detail::evaluate(grid_cfg, schemes[i % ns], targets[i / ns], false);
  });
  for (const auto& r : res.rows) res.ok = res.ok && detail::row_ok(r);
  return res;
}

inline CommandResult cmd_sweep(const RunConfig& cfg) {
  return run_grid(cfg, "sweep", detail::schemes_or(cfg, {"min-energy", "max-speed", "min-edp"}));
}

/// Energy each scheme needs to reach each PSNR on the grid. Baselines whose
/// PSNR ceiling is below a target are reported as infeasible there, which is
/// expected and does not fail the command.
inline CommandResult cmd_compare(const RunConfig& cfg) {
  auto res = run_grid(cfg, "compare",
                      detail::schemes_or(cfg, {"min-energy", "max-speed", "lsb-drop-1", "lsb-drop-2", "lsb-drop-3",
                                               "lsb-drop-4", "secc-7-4", "secc-15-11"}));
  res.columns.push_back("dominated_by_optimum");
  std::map<std::string, double> optimum;
  for (const auto& r : res.rows)
    if (r["scheme"] == "min-energy" && detail::row_ok(r)) optimum[r["psnr_db"].dump()] = r["energy"].get<double>();
  res.ok = true;
  for (auto& r : res.rows) {
    const auto it = optimum.find(r["psnr_db"].dump());
    if (r["status"] == "ok" && it != optimum.end() && !r["energy"].is_null())
      r["dominated_by_optimum"] = it->second <= r["energy"].get<double>() * (1 + 1e-9);
    else
      r["dominated_by_optimum"] = nullptr;
    if (r["status"] == "failed" || (r["scheme"] == "min-energy" && !detail::row_ok(r))) res.ok = false;
  }
  return res;
}

inline CommandResult cmd_kkt_check(const RunConfig& cfg) {
  const auto schemes = detail::schemes_or(cfg, {"min-energy", "max-speed", "min-edp"});
  for (const auto& s : schemes)
    if (s.kind != Scheme::Kind::Continuous) throw ConfigError("kkt-check applies to the three criteria only");
  RunConfig c = cfg;
  c.beta.reset();
  auto res = run_grid(c, "kkt-check", schemes);
  res.columns = {"psnr_db", "mse_budget", "scheme", "status", "message", "kkt_residual", "threshold", "pass"};
  res.ok = true;
  for (auto& r : res.rows) {
    Json slim;
    for (const auto& col : res.columns)
      if (r.contains(col)) slim[col] = r[col];
    slim["threshold"] = 1e-6;
    const bool pass = detail::row_ok(r) && !r["kkt_residual"].is_null() && r["kkt_residual"].get<double>() < 1e-6;
    slim["pass"] = pass;
    res.ok = res.ok && pass;
    r = std::move(slim);
  }
  return res;
}

inline CommandResult cmd_simulate(const RunConfig& cfg) {
  const WordFormat format(cfg.bits);
  const NoiseModel noise(cfg.noise, cfg.sigma);
  if (cfg.bits > kMaxSimBits) throw ConfigError("simulation supports up to 32-bit words");
  Source source = UniformSource{};
  std::optional<SourceStats> stats;
  if (cfg.corpus) {
    CorpusSource corpus{load_corpus(*cfg.corpus, cfg.bits)};
    stats = extract_source_stats(corpus.words, cfg.bits);
    source = std::move(corpus);
  }
  SimConfig sim;
  sim.samples = cfg.samples;
  sim.seed = cfg.seed;
  sim.workers = cfg.workers;

  CommandResult res{"simulate", settings_of(cfg),
                    {"psnr_db", "scheme", "status", "message", "source", "samples", "analytic_mse",
                     "analytic_psnr_db", "mc_mse", "std_error", "mc_psnr_db", "delta_db", "mean_abs_error",
                     "swings"},
                    {},
                    true};
  auto simulate_row = [&](std::optional<double> target, const std::string& scheme, std::optional<SwingVector> swings,
                          const std::string& failure) {
    Json r;
    r["psnr_db"] = target ? num(*target) : Json(nullptr);
    r["scheme"] = scheme;
    r["status"] = "ok";
    r["message"] = failure;
    r["source"] = cfg.corpus ? *cfg.corpus : std::string("uniform");
    r["samples"] = cfg.samples;
    for (const char* k : {"analytic_mse", "analytic_psnr_db", "mc_mse", "std_error", "mc_psnr_db", "delta_db",
                          "mean_abs_error", "swings"})
      r[k] = nullptr;
    if (!swings) {
      r["status"] = "failed";
      return r;
    }
    const double analytic = stats ? mse_nonuniform(*swings, noise, *stats) : mse_uniform(*swings, noise);
    const auto est = monte_carlo_mse(*swings, noise, sim, source);
    r["analytic_mse"] = num(analytic);
    r["analytic_psnr_db"] = analytic > 0.0 ? num(psnr_from_mse(analytic, format)) : Json(nullptr);
    r["mc_mse"] = num(est.mean);
    r["std_error"] = est.std_error ? num(*est.std_error) : Json(nullptr);
    if (est.mean > 0.0) {
      r["mc_psnr_db"] = num(psnr_from_mse(est.mean, format));
      r["delta_db"] = analytic > 0.0 ? num(psnr_from_mse(est.mean, format) - psnr_from_mse(analytic, format))
                                     : Json(nullptr);
    }
    r["mean_abs_error"] = num(est.mean_abs_error);
    r["swings"] = swing_array(*swings);
    return r;
  };

  if (cfg.swings) {
    if (static_cast<int>(cfg.swings->size()) != cfg.bits)
      throw ConfigError("--swings must list exactly one swing per bit");
    res.rows.push_back(simulate_row(std::nullopt, "custom", SwingVector(*cfg.swings), ""));
  } else {
    const auto schemes = detail::schemes_or(cfg, {"min-energy"});
    for (const auto& s : schemes)
      if (s.is_baseline()) throw ConfigError("simulate runs the optimizers or explicit --swings");
    for (double target : detail::target_psnrs(cfg, format)) {
      for (const auto& s : schemes) {
        const Json solved = detail::evaluate(cfg, s, target, false);
        if (!detail::row_ok(solved)) {
          res.rows.push_back(simulate_row(target, s.name, std::nullopt, solved["message"].get<std::string>()));
          continue;
        }
        res.rows.push_back(simulate_row(target, s.name, SwingVector(solved["swings"].get<std::vector<double>>()), ""));
      }
    }
  }
  for (const auto& r : res.rows) res.ok = res.ok && r["status"] == "ok";
  return res;
}

inline CommandResult run_command(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "solve") return cmd_solve(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  if (cfg.command == "compare") return cmd_compare(cfg);
  if (cfg.command == "simulate") return cmd_simulate(cfg);
  return cmd_kkt_check(cfg);
}

namespace detail {

inline std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_field(v[i]);
    return s;
  }
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

inline void write_csv(const CommandResult& res, std::ostream& out) {
  for (std::size_t i = 0; i < res.columns.size(); ++i) out << (i ? "," : "") << res.columns[i];
  out << '\n';
  for (const auto& r : res.rows) {
    for (std::size_t i = 0; i < res.columns.size(); ++i)
      out << (i ? "," : "") << (r.contains(res.columns[i]) ? detail::csv_field(r[res.columns[i]]) : "");
    out << '\n';
  }
}

inline void write_json(const CommandResult& res, std::ostream& out) {
  Json doc;
  doc["command"] = res.command;
  doc["settings"] = res.settings;
  doc["ok"] = res.ok;
  doc["columns"] = res.columns;
  Json rows = Json::array();
  for (const auto& r : res.rows) {
    Json ordered;
    for (const auto& col : res.columns) ordered[col] = r.contains(col) ? r[col] : Json(nullptr);
    rows.push_back(std::move(ordered));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

inline void write_result(const CommandResult& res, const std::string& format, std::ostream& out) {
  if (format == "json")
    write_json(res, out);
  else
    write_csv(res, out);
}

}  // namespace swingfill
