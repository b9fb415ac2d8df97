#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace mvlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumericalGuard = 3;
inline constexpr int kExitIo = 4;

// One produced artifact, held in memory until the whole pipeline succeeded.
struct OutputFile {
  std::string name;
  std::string content;
};

/// Runs the pipeline for `config` and returns its artifacts without touching
/// the filesystem. Throws mvlab::Error on numerical or domain failures.
std::vector<OutputFile> compute_outputs(const ExperimentConfig& config);

struct RunResult {
  int status = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> written;
};

/// compute_outputs, then writes every artifact plus manifest.json (config
/// echo, versions, SHA-256 of each output) and timing.json (wall time) into
/// `out_dir`. Nothing is written when computation fails; if writing fails
/// part-way the artifacts already written are removed and the manifest, when
/// it can still be written, records status "failed".
RunResult run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

// Manifest text for a successful run; byte-stable for identical inputs.
std::string manifest_json(const ExperimentConfig& config,
                          const std::vector<OutputFile>& outputs);

}  // namespace mvlab::cli
