#pragma once

#include <string>
#include <vector>

namespace replistat {

// A parsed delimited file: header plus data rows, each remembering its
// 1-based line number in the source file (header is line 1).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<long> line_numbers;
};

// Minimal RFC-4180-style reader: comma separated, optional double-quote
// quoting with "" escapes, tolerates CRLF and a trailing newline. Throws
// row_error on unbalanced quotes (with the line number) and
// invalid_argument_error if the file cannot be opened.
CsvTable read_csv(const std::string& path);

// Quote a field if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

}  // namespace replistat
