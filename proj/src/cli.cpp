#include "hypwave/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "hypwave/config.hpp"
#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kSubcommands{"net",      "propagate", "sample", "covariance", "gaussianity",
                                            "meanphase", "diagnose",  "oracle", "report"};

std::string h_tag(double h) { return "h" + format_double(h); }

// Collects the files of one run; each is written once and listed in the
// manifest with its git blob digest.
class Run {
 public:
  Run(ExperimentConfig cfg, std::string subcommand)
      : cfg_(std::move(cfg)), hash_(config_hash(cfg_)), subcommand_(std::move(subcommand)) {}

  const ExperimentConfig& cfg() const { return cfg_; }

  Json document() const { return {{"config_sha256", hash_}}; }

  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  void write_csv(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ostringstream os;
    os << "# config_sha256=" << hash_ << '\n';
    body(os);
    write(name, os.str());
  }

  Json finish() {
    Json files = Json::array();
    for (const auto& [name, digest] : written_) files.push_back({{"name", name}, {"git_blob_sha1", digest}});
    Json m = document();
    m["subcommand"] = subcommand_;
    m["config"] = canonical_json(cfg_);
    m["files"] = files;
    write("manifest.json", m.dump(2) + "\n");
    return m;
  }

 private:
  void write(const std::string& name, const std::string& content) {
    const fs::path dir(cfg_.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!(f << content) || !f.flush()) throw ResourceError("cannot write " + (dir / name).string());
    written_.emplace_back(name, git_blob_sha1(content));
  }

  ExperimentConfig cfg_;
  std::string hash_;
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> written_;
};

std::vector<DiskPoint> points_for(const ExperimentConfig& cfg, const PropagationJob& job, int n) {
  return select_points(job, make_screening_job(cfg, job.h()), cfg.diagnostics, n, cfg.seed);
}

std::vector<std::vector<LocalFieldSample>> ensemble_for(const ExperimentConfig& cfg, const PropagationJob& job) {
  const auto points = points_for(cfg, job, cfg.ensemble.n_x);
  return sample_ensemble(job, points, cfg.ensemble.n_omega, make_grid(cfg.ensemble), cfg.seed, cfg.jobs);
}

Json net(Run& run) {
  const auto& cfg = run.cfg();
  Json nets = Json::array();
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    nets.push_back({{"h", h},
                    {"job", to_json(job)},
                    {"admissibility", to_json(verify_hypotheses(job.potential(), job.delta(), cfg.model.eps0, 5.0))}});
  }
  Json doc = run.document();
  doc["nets"] = nets;
  run.write_json("net.json", doc);
  return nets;
}

void propagate(Run& run) {
  const auto& cfg = run.cfg();
  Json per_h = Json::array();
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    Json pts = Json::array();
    for (const DiskPoint& x : points_for(cfg, job, cfg.ensemble.n_x)) {
      const LiftSet lifts = enumerate_lifts(x, job.t(), job.state());
      std::vector<DiskPoint> where;
      for (const auto& l : lifts.elements) where.push_back(l.point);
      const auto cut = excision_sets(where, job, default_eps(job.beta()));
      Json contributions = Json::array();
      for (const auto& c : lift_contributions(job, lifts, FrameChart(x), cut)) contributions.push_back(to_json(c));
      pts.push_back({{"x", to_json(x)}, {"lift_count", lifts.size()}, {"lifts", contributions}});
    }
    per_h.push_back({{"h", h}, {"job", to_json(job)}, {"points", pts}});
  }
  Json doc = run.document();
  doc["propagation"] = per_h;
  run.write_json("propagate.json", doc);
}

void sample(Run& run) {
  const auto& cfg = run.cfg();
  for (double h : cfg.h_list) {
    const auto ens = ensemble_for(cfg, make_job(cfg, h));
    std::vector<LocalFieldSample> all;
    for (const auto& per : ens) all.insert(all.end(), per.begin(), per.end());
    run.write_csv("field_" + h_tag(h) + ".csv", [&](std::ostream& os) { write_field_csv(os, all); });
  }
}

Json field_summary(const FieldStatistics& s) {
  return {{"h", s.h},
          {"max_deviation", s.max_deviation},
          {"within_band", s.within_band},
          {"mean_lift_count", s.mean_lifts},
          {"gaussianity", to_json(s.gaussianity)}};
}

std::vector<FieldStatistics> field_statistics_all(const ExperimentConfig& cfg) {
  std::vector<FieldStatistics> out;
  for (double h : cfg.h_list) out.push_back(field_statistics(ensemble_for(cfg, make_job(cfg, h)), h));
  return out;
}

bool non_increasing(const std::vector<FieldStatistics>& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].max_deviation > s[i - 1].max_deviation) return false;
  }
  return true;
}

Json covariance_json(const std::vector<FieldStatistics>& stats) {
  Json per_h = Json::array();
  for (const auto& s : stats) {
    Json j = field_summary(s);
    j["covariance"] = to_json(s.covariance);
    per_h.push_back(j);
  }
  return {{"per_h", per_h}, {"max_deviation_non_increasing", non_increasing(stats)}};
}

void covariance(Run& run) {
  const auto stats = field_statistics_all(run.cfg());
  for (const auto& s : stats) {
    run.write_csv("covariance_" + h_tag(s.h) + ".csv",
                  [&](std::ostream& os) { write_covariance_csv(os, s.covariance, BerryKernel{}); });
  }
  Json doc = run.document();
  doc.update(covariance_json(stats));
  run.write_json("covariance.json", doc);
}

void gaussianity(Run& run) {
  Json per_h = Json::array();
  for (const auto& s : field_statistics_all(run.cfg())) {
    per_h.push_back({{"h", s.h}, {"probe", "y = 0"}, {"report", to_json(s.gaussianity)}});
  }
  Json doc = run.document();
  doc["per_h"] = per_h;
  run.write_json("gaussianity.json", doc);
}

Json mean_phase_json(const ExperimentConfig& cfg) {
  Json per_h = Json::array();
  double prev = 0.0;
  bool decreasing = true;
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    const auto s = mean_phase_summary(job, points_for(cfg, job, cfg.mean_phase.points), cfg.mean_phase.draws, cfg.jobs);
    if (!per_h.empty() && s.mean_value >= prev) decreasing = false;
    prev = s.mean_value;
    Json pts = Json::array();
    for (const auto& r : s.per_point) pts.push_back(to_json(r));
    per_h.push_back({{"h", h}, {"mean_value", s.mean_value}, {"stderr", s.std_error}, {"per_point", pts}});
  }
  return {{"per_h", per_h}, {"decreasing", decreasing}};
}

void meanphase(Run& run) {
  Json doc = run.document();
  doc.update(mean_phase_json(run.cfg()));
  run.write_json("meanphase.json", doc);
}

Json diagnose_json(const ExperimentConfig& cfg) {
  const DiagnosticSettings& d = cfg.diagnostics;
  const double T0 = d.T0 ? *d.T0 : injectivity_radius();
  Json per_h = Json::array();
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    const auto probe = bad_fraction(make_bad_set_job(cfg, h), T0, d.T, d.gamma, d.n_probes, cfg.seed);
    per_h.push_back({{"h", h},
                     {"approach_threshold", approach_threshold(job, default_eps(job.beta()))},
                     {"bad_set", to_json(probe)}});
  }
  return {{"per_h", per_h}};
}

void diagnose(Run& run) {
  Json doc = run.document();
  doc.update(diagnose_json(run.cfg()));
  run.write_json("diagnose.json", doc);
}

BerrySelfTest oracle(Run& run) {
  const auto& cfg = run.cfg();
  const BerrySelfTest b = berry_self_test(cfg.berry, cfg.seed, cfg.jobs);
  const BerryKernel k{cfg.berry.lambda, 2};
  run.write_csv("oracle.csv", [&](std::ostream& os) { write_covariance_csv(os, b.covariance, k); });
  Json doc = run.document();
  doc["pass"] = b.pass;
  doc["outside_band"] = b.outside_band;
  doc["gaussianity"] = to_json(b.gaussianity);
  doc["covariance"] = to_json(b.covariance);
  run.write_json("oracle.json", doc);
  return b;
}

void report(Run& run) {
  const auto& cfg = run.cfg();
  const auto stats = field_statistics_all(cfg);
  const BerrySelfTest b = berry_self_test(cfg.berry, cfg.seed, cfg.jobs);
  Json doc = run.document();
  doc["oracle"] = {{"pass", b.pass}, {"outside_band", b.outside_band}, {"gaussianity", to_json(b.gaussianity)}};
  doc["field"] = covariance_json(stats);
  doc["meanphase"] = mean_phase_json(cfg);
  doc["diagnose"] = diagnose_json(cfg);
  run.write_json("report.json", doc);
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Randomly perturbed wave propagation on the Bolza surface", "hypwave");
  std::string config_path, subcommand, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  app.add_option("subcommand,--subcommand", subcommand, "one of net, propagate, sample, covariance, gaussianity, "
                                                        "meanphase, diagnose, oracle, report")
      ->required();
  app.add_option("--config", config_path, "TOML configuration");
  app.add_option("--seed", seed, "experiment seed (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads, 0 for all cores");
  app.add_option("--out", out_dir, "output directory");

  ExperimentConfig cfg;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end()) {
      throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    check_admissibility(cfg);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    error_json(err, e.kind(), e.what());
    return kExitConfig;
  }

  try {
    Run run(cfg, subcommand);
    bool ok = true;
    if (subcommand == "net") net(run);
    if (subcommand == "propagate") propagate(run);
    if (subcommand == "sample") sample(run);
    if (subcommand == "covariance") covariance(run);
    if (subcommand == "gaussianity") gaussianity(run);
    if (subcommand == "meanphase") meanphase(run);
    if (subcommand == "diagnose") diagnose(run);
    if (subcommand == "oracle") ok = oracle(run).pass;
    if (subcommand == "report") report(run);
    out << run.finish().dump(2) << '\n';
    if (!ok) {
      error_json(err, "self_test_failed", "the Berry sampler does not reproduce its kernel");
      return kExitRuntime;
    }
    return kExitOk;
  } catch (const Error& e) {
    error_json(err, e.kind(), e.what());
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what());
  }
  return kExitRuntime;
}

}  // namespace hypwave
