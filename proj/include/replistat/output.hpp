#ifndef REPLISTAT_OUTPUT_HPP
#define REPLISTAT_OUTPUT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace replistat {

// 17-significant-digit formatting: round-trips every double and keeps
// emitted tables byte-stable across runs and platforms using the same libc.
std::string fmt17(double v);

// One CSV record from already-escaped-safe fields (escaping applied here).
std::string csv_line(const std::vector<std::string>& fields);

// FNV-1a 64-bit digest of a byte string; used to fingerprint input files.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Reads a whole file; throws invalid_argument_error when unreadable.
std::string read_file_bytes(const std::string& path);

// Parses "start:end:step" (inclusive, end snapped exactly) or a
// comma-separated list of numbers.
std::vector<double> parse_grid(const std::string& text);

// Run manifest: enough provenance to reproduce an output byte-for-byte.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> configuration;
  std::string input_digest;  // empty when the command took no input file
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string timestamp;  // ISO-8601 UTC; lives only in the manifest itself
};

std::string manifest_to_json(const RunManifest& m);
std::string iso8601_utc_now();

void write_file(const std::string& path, const std::string& content);

}  // namespace replistat

#endif  // REPLISTAT_OUTPUT_HPP
