#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace inspectkit::csv {

/// Quotes a field when it contains a comma, quote, CR or LF; embedded quotes
/// are doubled.
std::string escape(std::string_view field);

/// Appends one record terminated by CRLF.
void append_row(std::string& out, const std::vector<std::string>& fields);

struct Row {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// Parses RFC 4180 text. Records may end in CRLF or LF; quoted fields keep
/// their bytes verbatim. A trailing empty line is not a record.
/// Throws ParseError on an unterminated quote or stray text after a quote.
std::vector<Row> parse(std::string_view text);

}  // namespace inspectkit::csv
