#include "inspectkit/corpus/csv.hpp"

#include "inspectkit/core/error.hpp"

namespace inspectkit::csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  out += "\r\n";
}

std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  const std::size_t n = text.size();

  while (pos < n) {
    Row row;
    row.line = line;
    std::string field;
    bool end_of_record = false;
    while (!end_of_record) {
      field.clear();
      if (pos < n && text[pos] == '"') {
        ++pos;
        for (;;) {
          if (pos >= n) {
            throw ParseError("line " + std::to_string(row.line) + ": unterminated quoted field");
          }
          char c = text[pos++];
          if (c == '"') {
            if (pos < n && text[pos] == '"') {
              field += '"';
              ++pos;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field += c;
          }
        }
        if (pos < n && text[pos] != ',' && text[pos] != '\r' && text[pos] != '\n') {
          throw ParseError("line " + std::to_string(line) + ": unexpected text after quoted field");
        }
      } else {
        while (pos < n && text[pos] != ',' && text[pos] != '\r' && text[pos] != '\n') {
          if (text[pos] == '"') {
            throw ParseError("line " + std::to_string(line) + ": quote inside unquoted field");
          }
          field += text[pos++];
        }
      }
      row.fields.push_back(field);
      if (pos >= n) {
        end_of_record = true;
      } else if (text[pos] == ',') {
        ++pos;
      } else {
        if (text[pos] == '\r') ++pos;
        if (pos < n && text[pos] == '\n') ++pos;
        ++line;
        end_of_record = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace inspectkit::csv
