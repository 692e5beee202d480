#include "replistat/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "replistat/csv.hpp"
#include "replistat/errors.hpp"
#include "replistat/version.hpp"

namespace replistat {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_argument_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw invalid_argument_error("parse_grid: empty grid specification");
  auto parse_num = [](const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw invalid_argument_error("parse_grid: not a number: '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);

  std::vector<double> grid;
  if (sep == ':') {
    if (parts.size() != 3)
      throw invalid_argument_error("parse_grid: range form must be start:end:step");
    double start = parse_num(parts[0]), end = parse_num(parts[1]), step = parse_num(parts[2]);
    if (!(step > 0.0) || end < start)
      throw invalid_argument_error("parse_grid: need end >= start and step > 0");
    long n = std::lround((end - start) / step);
    if (std::fabs(start + static_cast<double>(n) * step - end) > 1e-9 * (std::fabs(end) + 1.0))
      throw invalid_argument_error("parse_grid: step does not divide the range");
    for (long i = 0; i <= n; ++i)
      grid.push_back(i == n ? end : start + static_cast<double>(i) * step);
  } else {
    for (const std::string& p : parts) grid.push_back(parse_num(p));
  }
  return grid;
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : m.configuration) cfg[k] = v;
  j["configuration"] = cfg;
  j["input_digest"] = m.input_digest;
  j["tool_version"] = m.tool_version.empty() ? version_string : m.tool_version;
  j["seed"] = m.seed;
  j["timestamp"] = m.timestamp;
  return j.dump(2) + "\n";
}

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_argument_error("cannot write file: " + path);
  out << content;
  if (!out) throw invalid_argument_error("write failed: " + path);
}

}  // namespace replistat
