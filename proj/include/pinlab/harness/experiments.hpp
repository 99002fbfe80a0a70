#ifndef PINLAB_HARNESS_EXPERIMENTS_HPP
#define PINLAB_HARNESS_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pinlab/disorder.hpp"
#include "pinlab/gibbs.hpp"
#include "pinlab/harness/config.hpp"
#include "pinlab/polymer.hpp"
#include "pinlab/renewal.hpp"
#include "pinlab/rng.hpp"
#include "pinlab/stats.hpp"
#include "pinlab/subordinator.hpp"
#include "pinlab/varmax.hpp"

namespace pinlab::harness {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Worker count: hardware concurrency, capped by PINLAB_THREADS.
inline std::size_t worker_count() {
  std::size_t n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PINLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min(n, static_cast<std::size_t>(v));
  }
  return n;
}

/// Runs fn(0..n-1) on the worker pool; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// parallel_for with results stored by index.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string num(std::size_t v) { return std::to_string(v); }

inline std::string join_row(std::initializer_list<std::string> fields) {
  std::string s;
  for (const auto& f : fields) {
    if (!s.empty()) s += ',';
    s += f;
  }
  return s;
}

inline std::vector<double> parse_row(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) v.push_back(std::stod(f));
  return v;
}

/// One unit of resumable output: a CSV file built from `tasks` independent rows.
struct CellSpec {
  std::string name;
  std::size_t tasks = 1;
  std::function<std::vector<std::string>(std::size_t)> task;
};

struct ExperimentReport {
  Json config;
  std::string header;
  std::vector<std::string> rows;
  Json summary;
  std::size_t cells_computed = 0;
  std::size_t cells_reused = 0;
};

namespace detail {

inline void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

inline std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Rows of a completed cell file, or nothing when it is absent or malformed.
inline std::optional<std::vector<std::string>> load_cell(const fs::path& path, const std::string& header) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != header) return std::nullopt;
  std::vector<std::string> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  return rows;
}

inline std::string cell_file_name(std::string name) {
  for (auto& ch : name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '_' || ch == '=')) ch = '_';
  return name + ".csv";
}

inline Json provenance_config(const ExperimentConfig& cfg) {
  Json j = cfg.to_json();
  j.erase("out_dir");
  return j;
}

inline Json quantile_summary(const std::vector<double>& xs) {
  Json j;
  j["count"] = xs.size();
  if (xs.empty()) return j;
  j["min"] = *std::min_element(xs.begin(), xs.end());
  j["q05"] = stats::quantile(xs, 0.05);
  j["q25"] = stats::quantile(xs, 0.25);
  j["median"] = stats::median(xs);
  j["q75"] = stats::quantile(xs, 0.75);
  j["q95"] = stats::quantile(xs, 0.95);
  j["max"] = *std::max_element(xs.begin(), xs.end());
  return j;
}

// ---------------------------------------------------------------------------
// Individual experiments: each supplies a header, its cells and a summary
// computed from the parsed rows (so fresh and resumed runs agree exactly).

struct Plan {
  std::string tag;
  std::string header;
  std::vector<CellSpec> cells;
  std::function<Json(const std::vector<std::vector<double>>&)> summarize;
};

/// Maximizer of the continuum problem on the first k atoms.
inline VarSolution continuum_maximizer(const ContinuumDisorder& c, double beta_hat, double gamma, double c_entropy) {
  const auto L = EnergyLandscape::from_unsorted(c.Y, c.M, beta_hat, gamma, c_entropy);
  return solve_dp(L);
}

/// Maximizer of the discrete problem with positions n/N and weights M_disc.
inline VarSolution discrete_maximizer(const CoupledDisorder& d, double beta_hat, double gamma, double c_entropy) {
  std::vector<double> pos(d.N() - 1);
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = d.Y_disc(i);
  const auto L = EnergyLandscape::from_unsorted(pos, d.M_disc(), beta_hat, gamma, c_entropy);
  return solve_dp(L);
}

inline Plan plan_convergence(const ExperimentConfig& cfg) {
  Plan p;
  p.tag = "convergence";
  p.header = "N,replica,d_H";
  const DisorderLaw law{cfg.alpha.front(), 1.0};
  const double gamma = cfg.gamma.front();
  const std::size_t k = cfg.k_list.front();
  for (auto N : cfg.N_list) {
    CellSpec c;
    c.name = "N=" + num(N);
    c.tasks = cfg.replicas;
    c.task = [=](std::size_t r) {
      Stream rng = Stream::derive(cfg.seed, "convergence", r);
      const auto d = sample_coupled(law, N, k, rng);
      const auto cont = continuum_maximizer(d.continuum(k), cfg.beta_hat, gamma, 1.0);
      const auto disc = discrete_maximizer(d, cfg.beta_hat, gamma, 1.0);
      return std::vector<std::string>{join_row({num(N), num(r), num(hausdorff(disc.maximizer, cont.maximizer))})};
    };
    p.cells.push_back(std::move(c));
  }
  p.summarize = [N_list = cfg.N_list](const std::vector<std::vector<double>>& rows) {
    Json table = Json::array();
    std::vector<double> med, med_se;
    for (auto N : N_list) {
      std::vector<double> d;
      for (const auto& r : rows)
        if (static_cast<std::size_t>(r[0]) == N) d.push_back(r[2]);
      const double m = stats::median(d);
      // Median standard error from the interquartile range (normal-scale IQR / 1.349).
      const double iqr = stats::quantile(d, 0.75) - stats::quantile(d, 0.25);
      const double se = 1.2533 * (iqr / 1.349) / std::sqrt(static_cast<double>(d.size()));
      med.push_back(m);
      med_se.push_back(se);
      Json row;
      row["N"] = N;
      row["replicas"] = d.size();
      row["median_d_H"] = m;
      row["median_se"] = se;
      row["mean_d_H"] = stats::mean(d);
      table.push_back(row);
    }
    std::size_t inversions = 0, significant = 0;
    for (std::size_t i = 1; i < med.size(); ++i) {
      if (med[i] > med[i - 1]) ++inversions;
      if (med[i] - med[i - 1] > 2.0 * std::hypot(med_se[i], med_se[i - 1])) ++significant;
    }
    Json s;
    s["median_table"] = table;
    s["inversions"] = inversions;
    s["significant_inversions"] = significant;
    return s;
  };
  return p;
}

inline Plan plan_concentration(const ExperimentConfig& cfg) {
  Plan p;
  p.tag = "concentration";
  p.header = "N,n_samples,hits,p_hat,wilson_lo,wilson_hi,ref_size";
  const DisorderLaw law{cfg.alpha.front(), 1.0};
  const double gamma = cfg.gamma.front();
  const std::size_t k = cfg.k_list.front();
  const std::size_t n_max = std::max(cfg.n_max, *std::max_element(cfg.N_list.begin(), cfg.N_list.end()));
  auto renewal = std::make_shared<RenewalLaw>(build_law(gamma, cfg.c, cfg.rho, cfg.K_inf, n_max));
  for (auto N : cfg.N_list) {
    CellSpec c;
    c.name = "N=" + num(N);
    c.tasks = 1;
    c.task = [=](std::size_t) {
      // Replica 0 of the coupling: every N sees the same disorder.
      Stream rng = Stream::derive(cfg.seed, "concentration", 0);
      const auto d = sample_coupled(law, N, k, rng);
      double beta_hat = cfg.beta_hat;
      if (cfg.beta_hat_relative) {
        const auto cont = d.continuum(k);
        beta_hat *= beta_critical(cont.Y, cont.M, gamma, cfg.c);
      }
      const auto ref = discrete_maximizer(d, beta_hat, gamma, cfg.c);
      PinningModel model{*renewal, d.omega(), beta_hat * std::pow(static_cast<double>(N), gamma) / d.b_N(), cfg.h,
                         N, std::nullopt};
      const PartitionTable table(model);
      Stream gibbs_rng = Stream::derive(cfg.seed, "concentration-gibbs", N);
      const auto est = concentration_probability(table, ref.maximizer, cfg.delta, cfg.n_samples, gibbs_rng);
      return std::vector<std::string>{join_row({num(N), num(cfg.n_samples), num(est.hits), num(est.estimate),
                                                num(est.lower), num(est.upper), num(ref.maximizer.size())})};
    };
    p.cells.push_back(std::move(c));
  }
  p.summarize = [gamma](const std::vector<std::vector<double>>& rows) {
    std::vector<double> x, y, w;
    Json table = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["N"] = static_cast<std::size_t>(r[0]);
      row["p_hat"] = r[3];
      row["wilson"] = {r[4], r[5]};
      table.push_back(row);
      if (r[2] <= 0) continue;
      const double n = r[1], hits = r[2];
      x.push_back(std::pow(r[0], gamma));
      y.push_back(std::log(r[3]));
      // Delta-method inverse variance of log p_hat.
      w.push_back(hits / std::max(1.0 - hits / n, 1.0 / n));
    }
    Json s;
    s["table"] = table;
    s["cells_in_fit"] = x.size();
    if (x.size() >= 3) {
      const auto fit = stats::fit_line(x, y, w);
      const auto [lo, hi] = fit.slope_interval(0.95);
      s["slope"] = fit.slope;
      s["slope_se"] = fit.slope_se;
      s["slope_ci95"] = {lo, hi};
      s["nu_hat"] = -fit.slope;
      s["negative_at_95"] = hi < 0;
    } else {
      s["slope"] = nullptr;
      s["negative_at_95"] = false;
    }
    return s;
  };
  return p;
}

inline Plan plan_threshold_pinning(const ExperimentConfig& cfg) {
  Plan p;
  p.tag = "threshold-pinning";
  p.header = "alpha,gamma,k,replica,beta_c";
  for (double alpha : cfg.alpha)
    for (double gamma : cfg.gamma)
      for (auto k : cfg.k_list) {
        CellSpec c;
        c.name = "alpha=" + num(alpha) + "_gamma=" + num(gamma) + "_k=" + num(k);
        c.tasks = cfg.replicas;
        c.task = [=](std::size_t r) {
          Stream rng = Stream::derive(cfg.seed, "threshold-pinning", r);
          const auto cont = sample_continuum(DisorderLaw{alpha, 1.0}, k, rng);
          const double bc = beta_critical(cont.Y, cont.M, gamma, 1.0);
          return std::vector<std::string>{join_row({num(alpha), num(gamma), num(k), num(r), num(bc)})};
        };
        p.cells.push_back(std::move(c));
      }
  p.summarize = [cfg](const std::vector<std::vector<double>>& rows) {
    Json cells = Json::array();
    bool all_positive = true;
    Json stability = Json::array();
    for (double alpha : cfg.alpha)
      for (double gamma : cfg.gamma) {
        std::vector<double> q05;
        for (auto k : cfg.k_list) {
          std::vector<double> bc;
          for (const auto& r : rows)
            if (r[0] == alpha && r[1] == gamma && static_cast<std::size_t>(r[2]) == k) bc.push_back(r[4]);
          for (double b : bc) all_positive = all_positive && b > 0;
          Json cell = quantile_summary(bc);
          cell["alpha"] = alpha;
          cell["gamma"] = gamma;
          cell["k"] = k;
          cells.push_back(cell);
          q05.push_back(stats::quantile(bc, 0.05));
        }
        Json st;
        st["alpha"] = alpha;
        st["gamma"] = gamma;
        st["q05_by_k"] = q05;
        st["q05_relative_change"] = std::abs(q05.back() / q05.front() - 1.0);
        stability.push_back(st);
      }
    Json s;
    s["cells"] = cells;
    s["all_positive"] = all_positive;
    s["stability"] = stability;
    return s;
  };
  return p;
}

inline Plan plan_threshold_polymer(const ExperimentConfig& cfg) {
  Plan p;
  p.tag = "threshold-polymer";
  p.header = "alpha,k,replica,beta_c";
  for (double alpha : cfg.alpha)
    for (auto k : cfg.k_list) {
      CellSpec c;
      c.name = "alpha=" + num(alpha) + "_k=" + num(k);
      c.tasks = cfg.replicas;
      c.task = [=](std::size_t r) {
        Stream rng = Stream::derive(cfg.seed, "threshold-polymer", r);
        const auto env = sample_environment(alpha, k, rng);
        return std::vector<std::string>{
            join_row({num(alpha), num(k), num(r), num(polymer_beta_critical(env))})};
      };
      p.cells.push_back(std::move(c));
    }
  p.summarize = [cfg](const std::vector<std::vector<double>>& rows) {
    Json cells = Json::array();
    Json trend = Json::array();
    for (double alpha : cfg.alpha) {
      std::vector<double> medians;
      for (auto k : cfg.k_list) {
        std::vector<double> bc;
        for (const auto& r : rows)
          if (r[0] == alpha && static_cast<std::size_t>(r[1]) == k) bc.push_back(r[3]);
        Json cell = quantile_summary(bc);
        cell["alpha"] = alpha;
        cell["k"] = k;
        cells.push_back(cell);
        medians.push_back(stats::median(bc));
      }
      bool decreasing = medians.size() >= 2;
      for (std::size_t i = 1; i < medians.size(); ++i) decreasing = decreasing && medians[i] < medians[i - 1];
      Json t;
      t["alpha"] = alpha;
      t["median_by_k"] = medians;
      t["strictly_decreasing"] = decreasing;
      t["relative_change_first_last"] = std::abs(medians.back() / medians.front() - 1.0);
      trend.push_back(t);
    }
    Json s;
    s["cells"] = cells;
    s["trend"] = trend;
    return s;
  };
  return p;
}

inline Plan plan_renewal(const ExperimentConfig& cfg) {
  Plan p;
  p.tag = "renewal-asymptotics";
  p.header = "n,K,u,q_shift_ratio,q2_ratio,q3_ratio,u_over_K";
  const double gamma = cfg.gamma.front();
  auto law = std::make_shared<RenewalLaw>(build_law(gamma, cfg.c, cfg.rho, cfg.K_inf, cfg.n_max));
  CellSpec c;
  c.name = "renewal";
  c.tasks = cfg.N_list.size();
  c.task = [=, n_list = cfg.N_list](std::size_t i) {
    const auto d = subexp_diagnostics(*law, n_list[i], cfg.k_shift);
    return std::vector<std::string>{join_row({num(d.n), num(d.K), num(d.u), num(d.shift_ratio), num(d.q2_ratio),
                                              num(d.q3_ratio), num(d.u_over_K)})};
  };
  p.cells.push_back(std::move(c));
  p.summarize = [K_inf = cfg.K_inf](const std::vector<std::vector<double>>& rows) {
    Json table = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["n"] = static_cast<std::size_t>(r[0]);
      row["u_over_K"] = r[6];
      row["q2_ratio"] = r[4];
      row["q3_ratio"] = r[5];
      row["q_shift_ratio"] = r[3];
      table.push_back(row);
    }
    Json s;
    s["table"] = table;
    if (K_inf > 0) {
      const double target = 1.0 / (K_inf * K_inf);
      s["u_over_K_limit"] = target;
      s["u_over_K_relative_error_at_largest_n"] = std::abs(rows.back()[6] / target - 1.0);
    }
    s["q2_ratio_limit"] = 2.0;
    s["q3_ratio_limit"] = 3.0;
    return s;
  };
  return p;
}

/// Geometric grid of `points` times in [1e-4, 1e-1].
inline std::vector<double> growth_grid(std::size_t points) {
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i)
    t[i] = std::pow(10.0, -4.0 + 3.0 * static_cast<double>(i) / static_cast<double>(points - 1));
  return t;
}

inline Plan plan_subordinator(const ExperimentConfig& cfg) {
  Plan p;
  p.tag = "subordinator-growth";
  p.header = "alpha,q,grid_points,replica,sup_ratio";
  const std::size_t k = cfg.k_list.front();
  const std::vector<std::size_t> grids{cfg.grid_points, cfg.grid_points * cfg.grid_refine};
  for (double alpha : cfg.alpha)
    for (auto g : grids) {
      CellSpec c;
      c.name = "alpha=" + num(alpha) + "_grid=" + num(g);
      c.tasks = cfg.replicas;
      c.task = [=](std::size_t r) {
        Stream rng = Stream::derive(cfg.seed, "subordinator-growth", r);
        const auto s = MarkedPointSet::from_continuum(sample_continuum(DisorderLaw{alpha, 1.0}, k, rng));
        const auto grid = growth_grid(g);
        return std::vector<std::string>{
            join_row({num(alpha), num(cfg.q), num(g), num(r), num(growth_check(s, alpha, cfg.q, grid))})};
      };
      p.cells.push_back(std::move(c));
    }
  p.summarize = [cfg, grids](const std::vector<std::vector<double>>& rows) {
    Json cells = Json::array();
    Json stability = Json::array();
    for (double alpha : cfg.alpha) {
      std::vector<double> p95;
      for (auto g : grids) {
        std::vector<double> v;
        for (const auto& r : rows)
          if (r[0] == alpha && static_cast<std::size_t>(r[2]) == g) v.push_back(r[4]);
        Json cell = quantile_summary(v);
        cell["alpha"] = alpha;
        cell["grid_points"] = g;
        cells.push_back(cell);
        p95.push_back(stats::quantile(v, 0.95));
      }
      Json st;
      st["alpha"] = alpha;
      st["p95_by_grid"] = p95;
      st["p95_ratio"] = std::max(p95[0], p95[1]) / std::min(p95[0], p95[1]);
      stability.push_back(st);
    }
    Json s;
    s["cells"] = cells;
    s["stability"] = stability;
    return s;
  };
  return p;
}

inline Plan make_plan(const ExperimentConfig& cfg) {
  const auto& e = cfg.experiment;
  if (e == "convergence") return plan_convergence(cfg);
  if (e == "concentration") return plan_concentration(cfg);
  if (e == "threshold-pinning") return plan_threshold_pinning(cfg);
  if (e == "threshold-polymer") return plan_threshold_polymer(cfg);
  if (e == "renewal-asymptotics") return plan_renewal(cfg);
  return plan_subordinator(cfg);
}

}  // namespace detail

/// Runs (or resumes) an experiment. Layout under out_dir:
///   config.json          config echo and version
///   cells/<cell>.csv     one file per cell, written atomically, reused on rerun
///   results.csv          all rows in canonical order
///   summary.json         config, version and aggregated statistics
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const fs::path out(cfg.out_dir);
  const fs::path cells_dir = out / "cells";
  std::error_code ec;
  fs::create_directories(cells_dir, ec);
  if (ec || !fs::is_directory(cells_dir)) throw IoError("cannot create output directory '" + cells_dir.string() + "'");

  Json provenance;
  provenance["version"] = std::string(kVersion);
  provenance["config"] = detail::provenance_config(cfg);
  const fs::path config_path = out / "config.json";
  if (fs::exists(config_path)) {
    Json previous;
    try {
      previous = Json::parse(detail::read_file(config_path));
    } catch (const nlohmann::json::exception&) {
      throw IoError("unreadable '" + config_path.string() + "'");
    }
    if (previous != provenance)
      throw ConfigError("config: out_dir '" + cfg.out_dir + "' holds results of a different config or version");
  } else {
    detail::write_atomic(config_path, provenance.dump(2) + "\n");
  }

  // Plans may build tables that enforce module preconditions.
  detail::Plan plan;
  try {
    plan = detail::make_plan(cfg);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  ExperimentReport report;
  report.config = provenance["config"];
  report.header = plan.header;

  std::vector<std::optional<std::vector<std::string>>> done(plan.cells.size());
  struct TaskRef {
    std::size_t cell, index;
  };
  std::vector<TaskRef> pending;
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    done[c] = detail::load_cell(cells_dir / detail::cell_file_name(plan.cells[c].name), plan.header);
    if (done[c]) {
      ++report.cells_reused;
      continue;
    }
    for (std::size_t t = 0; t < plan.cells[c].tasks; ++t) pending.push_back({c, t});
  }

  // Tasks run on the pool; a cell is written as soon as its last task is
  // back, so an interrupted run resumes from the finished cells.
  std::vector<std::vector<std::string>> results(pending.size());
  std::vector<std::size_t> remaining(plan.cells.size(), 0), first(plan.cells.size(), 0);
  for (std::size_t i = pending.size(); i-- > 0;) {
    ++remaining[pending[i].cell];
    first[pending[i].cell] = i;
  }
  std::mutex write_mutex;
  auto finish_cell = [&](std::size_t c) {
    std::vector<std::string> rows;
    std::string content = plan.header + "\n";
    for (std::size_t t = 0; t < plan.cells[c].tasks; ++t)
      for (auto& line : results[first[c] + t]) {
        content += line + "\n";
        rows.push_back(std::move(line));
      }
    detail::write_atomic(cells_dir / detail::cell_file_name(plan.cells[c].name), content);
    done[c] = std::move(rows);
    ++report.cells_computed;
  };
  try {
    parallel_for(pending.size(), [&](std::size_t i) {
      auto rows = plan.cells[pending[i].cell].task(pending[i].index);
      std::lock_guard lock(write_mutex);
      results[i] = std::move(rows);
      if (--remaining[pending[i].cell] == 0) finish_cell(pending[i].cell);
    });
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }

  std::string all = plan.header + "\n";
  std::vector<std::vector<double>> parsed;
  for (auto& cell : done)
    for (auto& line : *cell) {
      all += line + "\n";
      parsed.push_back(parse_row(line));
      report.rows.push_back(line);
    }
  detail::write_atomic(out / "results.csv", all);

  report.summary["version"] = std::string(kVersion);
  report.summary["experiment"] = cfg.experiment;
  report.summary["config"] = provenance["config"];
  report.summary["results"] = plan.summarize(parsed);
  detail::write_atomic(out / "summary.json", report.summary.dump(2) + "\n");
  return report;
}

}  // namespace pinlab::harness

#endif  // PINLAB_HARNESS_EXPERIMENTS_HPP
