#include "replistat/csv.hpp"

#include <fstream>
#include <sstream>

#include "replistat/errors.hpp"

namespace replistat {

namespace {

// Splits one physical record; the record is guaranteed quote-balanced by the
// caller, which handles embedded newlines.
std::vector<std::string> split_record(const std::string& record) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < record.size(); ++i) {
    char ch = record[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < record.size() && record[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

bool quote_balanced(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') {
      if (quoted && i + 1 < s.size() && s[i + 1] == '"')
        ++i;
      else
        quoted = !quoted;
    }
  }
  return !quoted;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_argument_error("cannot open file: " + path);

  CsvTable table;
  std::string line, record;
  long line_no = 0, record_start = 0;
  bool in_record = false;
  auto flush_record = [&]() {
    if (table.header.empty()) {
      table.header = split_record(record);
    } else {
      table.rows.push_back(split_record(record));
      table.line_numbers.push_back(record_start);
    }
    record.clear();
    in_record = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_record) {
      if (line.empty()) continue;  // skip blank lines between records
      record = line;
      record_start = line_no;
      in_record = true;
    } else {
      record += "\n" + line;  // newline inside a quoted field
    }
    if (quote_balanced(record)) flush_record();
  }
  if (in_record) {
    if (!quote_balanced(record))
      throw row_error("unbalanced quotes at end of file", record_start);
    flush_record();
  }
  if (table.header.empty()) throw invalid_argument_error("empty file: " + path);
  return table;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

}  // namespace replistat
