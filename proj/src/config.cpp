#include "hypwave/config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

// Reads the keys of one table and remembers which were used, so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const toml::table& table, std::string name) : table_(table), name_(std::move(name)) {}

  void number(const char* key, double& out) {
    if (const auto* node = take(key)) {
      if (const auto v = node->value<double>()) {
        out = *v;
      } else {
        fail(key, "a number");
      }
    }
  }

  void number(const char* key, std::optional<double>& out) {
    if (table_.contains(key)) {
      double v = 0.0;
      number(key, v);
      out = v;
    }
  }

  void integer(const char* key, int& out, int min = 1) {
    std::int64_t v = out;
    integer64(key, v);
    if (v < min || v > std::numeric_limits<int>::max()) {
      throw ConfigError(path(key) + " must be an integer >= " + std::to_string(min));
    }
    out = static_cast<int>(v);
  }

  void seed(const char* key, std::uint64_t& out) {
    std::int64_t v = static_cast<std::int64_t>(out);
    integer64(key, v);
    if (v < 0) throw ConfigError(path(key) + " must not be negative");
    out = static_cast<std::uint64_t>(v);
  }

  void string(const char* key, std::string& out) {
    if (const auto* node = take(key)) {
      if (const auto v = node->value<std::string>()) {
        out = *v;
      } else {
        fail(key, "a string");
      }
    }
  }

  const toml::table* table(const char* key) {
    if (const auto* node = take(key)) {
      if (const auto* t = node->as_table()) return t;
      fail(key, "a table");
    }
    return nullptr;
  }

  const toml::array* array(const char* key) {
    if (const auto* node = take(key)) {
      if (const auto* a = node->as_array()) return a;
      fail(key, "an array");
    }
    return nullptr;
  }

  void finish() const {
    for (const auto& [k, v] : table_) {
      if (!used_.count(std::string(k.str()))) throw ConfigError("unknown key " + path(std::string(k.str())));
    }
  }

  std::string path(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

 private:
  const toml::node* take(const char* key) {
    used_.insert(key);
    return table_.get(key);
  }

  void integer64(const char* key, std::int64_t& out) {
    if (const auto* node = take(key)) {
      if (!node->is_integer()) fail(key, "an integer");
      out = node->as_integer()->get();
    }
  }

  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError(path(key) + " must be " + what);
  }

  const toml::table& table_;
  std::string name_;
  std::set<std::string> used_;
};

void read_model(Section s, ModelSettings& m) {
  s.number("beta", m.beta);
  std::optional<double> alpha;
  s.number("alpha", alpha);
  s.number("delta", m.delta);
  if (alpha && m.delta) throw ConfigError("set either model.alpha or model.delta, not both");
  if (alpha) m.alpha = *alpha;
  s.number("eps0", m.eps0);
  s.number("horizon_const", m.horizon_const);
  s.number("t_factor", m.t_factor);
  s.number("t", m.t);
  std::string kase = to_string(m.kase), omega = to_string(m.omega);
  s.string("potential_case", kase);
  s.string("omega_distribution", omega);
  m.kase = parse_potential_case(kase);
  m.omega = parse_omega_distribution(omega);
  std::string bump = m.bump.name(), amplitude = m.amplitude.name();
  double bump_plateau = m.bump.plateau, amplitude_plateau = m.amplitude.plateau;
  s.string("bump", bump);
  s.number("bump_plateau", bump_plateau);
  s.string("amplitude_profile", amplitude);
  s.number("amplitude_plateau", amplitude_plateau);
  m.bump = BumpProfile::parse(bump, bump_plateau);
  m.amplitude = BumpProfile::parse(amplitude, amplitude_plateau);
  s.number("mesh_fraction", m.mesh_fraction);
  s.seed("net_seed", m.net_seed);
  s.number("boundary_angle", m.boundary_angle);
  s.number("amplitude_fraction", m.amplitude_fraction);
  s.finish();
}

void read_ensemble(Section s, EnsembleSettings& e) {
  s.integer("n_omega", e.n_omega);
  s.integer("n_x", e.n_x);
  s.integer("grid_points", e.grid_points);
  s.number("grid_step", e.grid_step);
  s.finish();
}

void read_diagnostics(Section s, DiagnosticSettings& d) {
  s.number("T0", d.T0);
  s.number("T", d.T);
  s.number("gamma", d.gamma);
  s.number("horizon_const", d.horizon_const);
  s.integer("n_probes", d.n_probes);
  s.number("amplitude_fraction", d.amplitude_fraction);
  s.finish();
}

void read_berry(Section s, BerrySettings& b) {
  s.number("lambda", b.lambda);
  s.integer("n_waves", b.n_waves);
  s.integer("draws", b.draws, 2);
  s.integer("separations", b.separations, 2);
  s.number("r_max", b.r_max);
  s.finish();
}

void read_mean_phase(Section s, MeanPhaseSettings& m) {
  s.integer("draws", m.draws);
  s.integer("points", m.points);
  s.finish();
}

std::string digest_hex(std::string_view data, const EVP_MD* md) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out, &len, md, nullptr) != 1) throw ResourceError("digest failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[out[i] >> 4];
    s += hex[out[i] & 15];
  }
  return s;
}

Json profile_json(const BumpProfile& p) { return {{"kind", p.name()}, {"plateau", p.plateau}}; }

}  // namespace

ExperimentConfig parse_config(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML syntax: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(os.str());
  }
  ExperimentConfig cfg;
  Section top(root, "");
  if (const auto* hs = top.array("h_list")) {
    cfg.h_list.clear();
    for (const auto& node : *hs) {
      const auto v = node.value<double>();
      if (!v) throw ConfigError("h_list must hold numbers");
      cfg.h_list.push_back(*v);
    }
    if (cfg.h_list.empty()) throw ConfigError("h_list must not be empty");
  }
  top.seed("seed", cfg.seed);
  int jobs = static_cast<int>(cfg.jobs);
  top.integer("jobs", jobs, 0);
  cfg.jobs = static_cast<unsigned>(jobs);
  top.string("out_dir", cfg.out_dir);
  if (const auto* t = top.table("model")) read_model(Section(*t, "model"), cfg.model);
  if (const auto* t = top.table("ensemble")) read_ensemble(Section(*t, "ensemble"), cfg.ensemble);
  if (const auto* t = top.table("diagnostics")) read_diagnostics(Section(*t, "diagnostics"), cfg.diagnostics);
  if (const auto* t = top.table("berry")) read_berry(Section(*t, "berry"), cfg.berry);
  if (const auto* t = top.table("meanphase")) read_mean_phase(Section(*t, "meanphase"), cfg.mean_phase);
  top.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

Json canonical_json(const ExperimentConfig& cfg) {
  const ModelSettings& m = cfg.model;
  const DiagnosticSettings& d = cfg.diagnostics;
  Json j;
  j["surface"] = "bolza";
  j["h_list"] = cfg.h_list;
  j["seed"] = cfg.seed;
  j["model"] = {{"beta", m.beta},
                {"alpha", m.delta ? Json(nullptr) : Json(m.alpha)},
                {"delta", m.delta ? Json(*m.delta) : Json(nullptr)},
                {"eps0", m.eps0},
                {"horizon_const", m.horizon_const},
                {"t_factor", m.t ? Json(nullptr) : Json(m.t_factor)},
                {"t", m.t ? Json(*m.t) : Json(nullptr)},
                {"potential_case", to_string(m.kase)},
                {"omega_distribution", to_string(m.omega)},
                {"bump", profile_json(m.bump)},
                {"mesh_fraction", m.mesh_fraction},
                {"net_seed", m.net_seed},
                {"boundary_angle", m.boundary_angle},
                {"amplitude_fraction", m.amplitude_fraction},
                {"amplitude_profile", profile_json(m.amplitude)}};
  j["ensemble"] = {{"n_omega", cfg.ensemble.n_omega},
                   {"n_x", cfg.ensemble.n_x},
                   {"grid_points", cfg.ensemble.grid_points},
                   {"grid_step", cfg.ensemble.grid_step}};
  j["diagnostics"] = {{"T0", d.T0 ? Json(*d.T0) : Json(nullptr)},
                      {"T", d.T},
                      {"gamma", d.gamma},
                      {"horizon_const", d.horizon_const},
                      {"n_probes", d.n_probes},
                      {"amplitude_fraction", d.amplitude_fraction}};
  j["berry"] = {{"lambda", cfg.berry.lambda},
                {"n_waves", cfg.berry.n_waves},
                {"draws", cfg.berry.draws},
                {"separations", cfg.berry.separations},
                {"r_max", cfg.berry.r_max}};
  j["meanphase"] = {{"draws", cfg.mean_phase.draws}, {"points", cfg.mean_phase.points}};
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(canonical_json(cfg).dump()); }

std::string sha256_hex(std::string_view data) { return digest_hex(data, EVP_sha256()); }

std::string git_blob_sha1(std::string_view data) {
  std::string blob = "blob " + std::to_string(data.size());
  blob.push_back('\0');
  blob.append(data);
  return digest_hex(blob, EVP_sha1());
}

}  // namespace hypwave
