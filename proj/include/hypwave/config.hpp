#pragma once

// TOML experiment configuration, its canonical JSON form and content
// digests for result files.

#include <string>
#include <string_view>

#include "hypwave/experiment.hpp"
#include "hypwave/io.hpp"

namespace hypwave {

/// Parses a TOML document over the defaults of ExperimentConfig. Unknown
/// sections or keys, wrong types and syntax errors throw ConfigError.
ExperimentConfig parse_config(std::string_view toml_text);
ExperimentConfig load_config(const std::string& path);

/// Every setting that affects results, in a fixed key order. `jobs` and
/// `out_dir` are left out, so the hash does not depend on them.
Json canonical_json(const ExperimentConfig& cfg);
/// SHA-256 (hex) of canonical_json(cfg).dump().
std::string config_hash(const ExperimentConfig& cfg);

std::string sha256_hex(std::string_view data);
/// Digest git gives a blob with this content: SHA-1 of "blob <size>\0" + data.
std::string git_blob_sha1(std::string_view data);

}  // namespace hypwave
