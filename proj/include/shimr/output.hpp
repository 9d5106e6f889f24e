// File-format layer of the runner: key=value config files, the canonical
// config echo and its hash, and the CSV/metadata writers. All files are
// written atomically (temp then rename) and carry the config hash and master
// seed on a leading comment line.
#ifndef SHIMR_OUTPUT_HPP
#define SHIMR_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "shimr/engine.hpp"
#include "shimr/metrics.hpp"
#include "shimr/model.hpp"

namespace shimr {

inline constexpr const char* kVersion = "1.0.0";

// Shortest decimal that round-trips the exact double.
std::string format_double(double v);

// key=value lines; '#' starts a comment, blank lines ignored.
// Throws std::runtime_error on unreadable files or malformed lines.
std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::filesystem::path& path);

// Applies one config key. Keys match the CLI flag names ('-' and '_'
// interchangeable). Unknown keys or unparseable values are reported as
// validation-style error strings; an empty return means success.
std::vector<std::string> apply_config_entry(RunConfig& cfg, const std::string& key,
                                            const std::string& value);

// Canonical key=value echo of a config, fixed key order. Parsing it back
// reproduces the config exactly.
std::string canonical_config(const RunConfig& cfg);

// FNV-1a 64-bit hash of the canonical echo, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// Writes content to path via a temporary file and rename.
// Throws std::runtime_error on I/O failure.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// CSV writers. Each file starts with
//   # shimr v<version> config=<hash> seed=<master seed>
// followed by a one-line column header.
void write_timeseries(const std::filesystem::path& path, const RunResult& run);
void write_final_opinions(const std::filesystem::path& path, const RunResult& run);
void write_final_weights(const std::filesystem::path& path, const RunResult& run);
void write_histogram_csv(const std::filesystem::path& path, const RunConfig& cfg,
                         const Histogram& hist);
void write_summary_csv(const std::filesystem::path& path, const RunConfig& cfg,
                       const EnsembleSummary& summary);

// meta.txt: comment block (version, command, hash) followed by the canonical
// config echo, so the file is itself loadable with --config.
void write_meta(const std::filesystem::path& path, const RunConfig& cfg,
                const std::string& command);

struct SweepRow {
    std::string parameter;
    std::string value;
    EnsembleSummary summary;
};
void write_sweep_summary(const std::filesystem::path& path, const RunConfig& base,
                         const std::vector<SweepRow>& rows);

}  // namespace shimr

#endif  // SHIMR_OUTPUT_HPP
