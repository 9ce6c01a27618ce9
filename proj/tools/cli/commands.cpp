#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "cli/writers.hpp"
#include "xxtsi/analysis.hpp"
#include "xxtsi/error.hpp"
#include "xxtsi/kernels.hpp"
#include "xxtsi/oracle.hpp"

namespace xxtsi::cli {

using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

struct Column {
  const char* name;
  unsigned bit;
};

const Column kColumns[] = {{"mz", kMetricMz},        {"c_l1_scaled", kMetricCl1}, {"ssp", kMetricSsp},
                           {"ee_half", kMetricEe},   {"conc_nn", kMetricConc},    {"conc_nnn", kMetricConc}};

std::string path_in(const RunConfig& cfg, const std::string& file) {
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

int worker_count(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

ModelParams base_params(const RunConfig& cfg) {
  ModelParams p;
  p.alpha = cfg.alpha.values.front();
  p.h = cfg.h.values.front();
  p.n_sites = cfg.n_sites.front();
  p.boundary = cfg.boundary;
  return p;
}

MetricOptions metric_options(const RunConfig& cfg) { return {cfg.metrics, cfg.ssp_radius}; }

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class Run {
 public:
  Run(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log), t0_(Clock::now()) {
    ensure_output_dir(cfg.out_dir);
  }

  void emit(const std::string& file, const std::string& contents) {
    write_file(path_in(cfg_, file), contents);
    files_.push_back(file);
  }

  // per-point failures are reported and turn the exit status numerical
  void note_failures(const std::vector<MetricsRecord>& recs) {
    for (const auto& r : recs) {
      if (r.error.empty()) continue;
      failures_.push_back({{"alpha", r.alpha}, {"h", r.h}, {"n_sites", r.n_sites}, {"error", r.error}});
      log_ << "warning: alpha=" << format_double(r.alpha) << " h=" << format_double(r.h) << " n=" << r.n_sites
           << ": " << r.error << '\n';
    }
  }

  json& extra() { return extra_; }

  int finish(int status = kExitOk) {
    const double wall = std::chrono::duration<double>(Clock::now() - t0_).count();
    json m;
    m["subcommand"] = cfg_.subcommand;
    m["version"] = XXTSI_VERSION;
    m["timestamp"] = utc_now();
    m["wall_time_s"] = wall;
    m["isa"] = kernels::to_string(kernels::active());
    json c;
    for (const auto& [k, v] : cfg_.raw) c[k] = v;
    m["config"] = c;
    m["resolved"] = {{"alpha", cfg_.alpha.values},
                     {"h", cfg_.h.values},
                     {"n_sites", cfg_.n_sites},
                     {"metrics", metrics_to_string(cfg_.metrics)},
                     {"ssp_radius", cfg_.ssp_radius ? json(*cfg_.ssp_radius) : json("exact")},
                     {"boundary", to_string(cfg_.boundary)},
                     {"formats", formats_to_string(cfg_.formats)},
                     {"workers", worker_count(cfg_)}};
    for (auto& [k, v] : extra_.items()) m[k] = v;
    m["failures"] = failures_;
    files_.push_back("manifest.json");
    m["files"] = files_;
    write_file(path_in(cfg_, "manifest.json"), m.dump(2) + "\n");
    if (!failures_.empty() && status == kExitOk) status = kExitNumerical;
    log_ << cfg_.subcommand << ": wrote " << files_.size() << " file(s) to " << cfg_.out_dir << " in "
         << std::round(wall * 100) / 100 << " s\n";
    return status;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& log_;
  Clock::time_point t0_;
  std::vector<std::string> files_;
  json failures_ = json::array();
  json extra_ = json::object();
};

std::string csv_of(void (*fn)(std::ostream&, const std::vector<MetricsRecord>&),
                   const std::vector<MetricsRecord>& rows) {
  std::ostringstream os;
  fn(os, rows);
  return os.str();
}

json fit_json(const ScalingFit& f) {
  json j;
  j["model"] = to_string(f.model);
  j["slope"] = num(f.a);
  j["intercept"] = num(f.b);
  j["rms_residual"] = num(f.rms_residual);
  j["candidate_rms"] = {{"linear", num(f.candidate_rms[0])},
                        {"sqrt", num(f.candidate_rms[1])},
                        {"log", num(f.candidate_rms[2])}};
  return j;
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, log);
  const SweepResult r =
      sweep(base_params(cfg), SweepAxis::over_grid(cfg.alpha.values, cfg.h.values), metric_options(cfg),
            worker_count(cfg));
  run.note_failures(r.records);
  if (cfg.formats & kFormatCsv) run.emit("grid.csv", csv_of(write_grid_csv, r.records));

  if (cfg.formats & kFormatSvg) {
    const auto& as = cfg.alpha.values;
    const auto& hs = cfg.h.values;
    auto map_of = [&](const std::string& title, auto get) {
      Heatmap m;
      m.title = title;
      m.xs = as;
      m.ys = hs;
      m.values.resize(as.size() * hs.size());
      for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = 0; j < hs.size(); ++j) m.values[j * as.size() + i] = get(r.records[i * hs.size() + j]);
      return m;
    };
    const std::string suffix = " (N=" + std::to_string(cfg.n_sites.front()) + ")";
    Heatmap phase = map_of("phase" + suffix, [](const MetricsRecord& rec) -> std::optional<double> {
      if (!rec.phase) return std::nullopt;
      return static_cast<double>(rec.phase->phase);
    });
    phase.categorical = true;
    std::ostringstream os;
    write_svg(os, phase);
    run.emit("phase.svg", os.str());
    for (const auto& col : kColumns) {
      if (!(cfg.metrics & col.bit)) continue;
      const std::string name = col.name;
      Heatmap m = map_of(name + suffix, [&](const MetricsRecord& rec) { return metric_value(rec, name); });
      std::ostringstream s;
      write_svg(s, m);
      run.emit(name + ".svg", s.str());
    }
  }
  run.extra()["points"] = r.records.size();
  run.extra()["memo_hits"] = r.memo_hits;
  return run.finish();
}

int cmd_line(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, log);
  const bool over_alpha = cfg.alpha.values.size() > 1;
  const SweepAxis axis =
      over_alpha ? SweepAxis::over_alpha(cfg.alpha.values) : SweepAxis::over_h(cfg.h.values);
  const SweepResult r = sweep(base_params(cfg), axis, metric_options(cfg), worker_count(cfg));
  run.note_failures(r.records);
  if (cfg.formats & kFormatCsv) run.emit("line.csv", csv_of(write_grid_csv, r.records));

  if (cfg.formats & kFormatJson) {
    const auto& xs = over_alpha ? cfg.alpha.values : cfg.h.values;
    json j;
    j["axis"] = over_alpha ? "alpha" : "h";
    if (over_alpha) j["h"] = cfg.h.values.front();
    else j["alpha"] = cfg.alpha.values.front();
    j["n_sites"] = cfg.n_sites.front();
    j["grid_step"] = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    j["rule"] = "local maxima of |centred difference| above 5x the median over non-flat points";
    if (!over_alpha) j["critical_fields"] = critical_fields(cfg.alpha.values.front());
    json det = json::object();
    for (const auto& col : kColumns) {
      if (!(cfg.metrics & col.bit)) continue;
      try {
        json list = json::array();
        for (const auto& c : detect_transitions(r, col.name))
          list.push_back({{"location", c.location}, {"uncertainty", c.uncertainty}, {"strength", num(c.strength)}});
        det[col.name] = list;
      } catch (const InvalidArgument& e) {
        det[col.name] = {{"error", e.what()}};
      }
    }
    j["transitions"] = det;
    run.emit("detected-transitions.json", j.dump(2) + "\n");
  }
  run.extra()["points"] = r.records.size();
  run.extra()["memo_hits"] = r.memo_hits;
  return run.finish();
}

int cmd_scaling(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, log);
  const SweepResult r =
      sweep(base_params(cfg), SweepAxis::over_n(cfg.n_sites), metric_options(cfg), worker_count(cfg));
  run.note_failures(r.records);
  if (cfg.formats & kFormatCsv) run.emit("scaling.csv", csv_of(write_scaling_csv, r.records));

  if (cfg.formats & kFormatJson) {
    json j;
    j["alpha"] = cfg.alpha.values.front();
    j["h"] = cfg.h.values.front();
    j["n_sites"] = cfg.n_sites;
    json fits = json::object();
    auto fit_metric = [&](const std::string& name, auto get) {
      std::vector<double> xs, ys;
      for (const auto& rec : r.records) {
        auto v = get(rec);
        if (!v) {
          fits[name] = {{"error", "metric missing at n=" + std::to_string(rec.n_sites)}};
          return;
        }
        xs.push_back(rec.n_sites);
        ys.push_back(*v);
      }
      try {
        fits[name] = fit_json(scaling_fit(xs, ys));
      } catch (const InvalidArgument& e) {
        fits[name] = {{"error", e.what()}};
      }
    };
    // the fit sees exactly the value printed in the csv column
    if (cfg.metrics & kMetricCl1)
      fit_metric("c_l1", [](const MetricsRecord& rec) -> std::optional<double> {
        if (!rec.c_l1_scaled) return std::nullopt;
        return *rec.c_l1_scaled * rec.n_sites;
      });
    if (cfg.metrics & kMetricSsp) fit_metric("ssp", [](const MetricsRecord& rec) { return rec.ssp; });
    if (cfg.metrics & kMetricEe) fit_metric("ee_half", [](const MetricsRecord& rec) { return rec.ee_half; });
    j["fits"] = fits;

    if (cfg.metrics & kMetricEe) {
      ModelParams p = base_params(cfg);
      p.n_sites = cfg.n_sites.back();
      json cc;
      cc["n_sites"] = p.n_sites;
      cc["block_min"] = kCentralChargeMinBlock;
      cc["block_max"] = p.n_sites / 2;
      try {
        std::vector<int> ls;
        for (int l = kCentralChargeMinBlock; l <= p.n_sites / 2; ++l) ls.push_back(l);
        const ScalingFit f = central_charge(p, ls);
        cc["c"] = num(*f.derived_constant);
        cc["c_bits"] = num(*f.c_bits);
        cc["intercept"] = num(f.b);
        cc["rms_residual"] = num(f.rms_residual);
        cc["note"] = "c from natural-log entropy vs ln chord length; c_bits = c / ln 2";
      } catch (const InvalidArgument& e) {
        cc["error"] = e.what();
      }
      j["central_charge"] = cc;
    }
    run.emit("fits.json", j.dump(2) + "\n");
  }
  run.extra()["points"] = r.records.size();
  return run.finish();
}

int cmd_oracle(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, log);
  std::vector<ModelParams> pts;
  for (int n : cfg.n_sites)
    for (double a : cfg.alpha.values)
      for (double h : cfg.h.values) {
        ModelParams p;
        p.alpha = a;
        p.h = h;
        p.n_sites = n;
        p.boundary = cfg.boundary;
        pts.push_back(p);
      }
  const auto rows = compare_report(pts);
  std::ostringstream os;
  write_compare_csv(os, rows);
  run.emit("compare.csv", os.str());
  int pass = 0, fail = 0, skipped = 0;
  for (const auto& r : rows) {
    if (r.skipped) ++skipped;
    else if (r.pass) ++pass;
    else ++fail;
    if (!r.skipped && !r.pass)
      log << "mismatch: alpha=" << format_double(r.params.alpha) << " h=" << format_double(r.params.h)
          << " n=" << r.params.n_sites << " max delta " << format_double(r.max_delta) << " > "
          << format_double(r.tolerance) << '\n';
  }
  log << "oracle: " << pass << " pass, " << fail << " fail, " << skipped << " skipped\n";
  run.extra()["oracle"] = {{"pass", pass}, {"fail", fail}, {"skipped", skipped}};
  return run.finish(fail ? kExitOracleMismatch : kExitOk);
}

int cmd_critical(const RunConfig& cfg, std::ostream& log) {
  Run run(cfg, log);
  std::ostringstream os;
  write_critical_csv(os, cfg.alpha.values);
  run.emit("critical.csv", os.str());
  return run.finish();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"xxtsi: XX chain with three-spin interaction, free-fermion metrics and ED oracle"};
  app.set_version_flag("--version", std::string(XXTSI_VERSION));
  app.require_subcommand(1);
  // --h is the field, so help is long-form only
  app.set_help_flag("--help", "print this help and exit");

  struct Flags {
    std::map<std::string, std::string> values;
    std::string config;
  };
  static const std::pair<const char*, const char*> kSubs[] = {
      {"sweep", "2-D alpha x h grid: grid.csv, manifest.json, SVG heatmaps"},
      {"line", "1-D sweep in alpha or h: line.csv, detected-transitions.json"},
      {"scaling", "metrics over a list of chain lengths: scaling.csv, fits.json"},
      {"oracle", "fermionic pipeline against exact diagonalization (n <= 14): compare.csv"},
      {"critical", "analytic critical fields per alpha: critical.csv"},
  };
  static const std::pair<const char*, const char*> kFlagHelp[] = {
      {"alpha", "scalar, comma list or lo:hi:steps"},
      {"h", "scalar, comma list or lo:hi:steps"},
      {"n", "chain length or comma list"},
      {"metrics", "mz,c_l1,ssp,ee,conc or all"},
      {"ssp-radius", "truncate the SSP sum at this distance (tail bound checked)"},
      {"out", "output directory"},
      {"formats", "subset of csv,json,svg"},
      {"workers", "worker threads, 0 = all cores"},
      {"boundary", "exact (parity-resolved) or grid (single paper grid)"},
  };

  std::map<std::string, Flags> flags;
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::vector<std::pair<CLI::App*, std::string>> subs;
  for (auto [name, desc] : kSubs) {
    CLI::App* sc = app.add_subcommand(name, desc);
    for (auto [flag, help] : kFlagHelp) sc->add_option(std::string("--") + flag, raw[name][flag], help);
    sc->add_option("--config", flags[name].config, "key=value file; flags override it");
    subs.emplace_back(sc, name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (auto& [sc, name] : subs) {
      if (!sc->parsed()) continue;
      std::map<std::string, std::string> given;
      for (auto [flag, help] : kFlagHelp)
        if (sc->count(std::string("--") + flag)) given[flag] = raw[name][flag];
      std::map<std::string, std::string> file;
      if (!flags[name].config.empty()) file = read_config_file(flags[name].config);
      const RunConfig cfg = make_config(name, file, given);
      if (name == "sweep") return cmd_sweep(cfg, err);
      if (name == "line") return cmd_line(cfg, err);
      if (name == "scaling") return cmd_scaling(cfg, err);
      if (name == "oracle") return cmd_oracle(cfg, err);
      return cmd_critical(cfg, err);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace xxtsi::cli
