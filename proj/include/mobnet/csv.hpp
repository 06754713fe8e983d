#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobnet/errors.hpp"

namespace mobnet {

namespace detail {

inline std::optional<double> parse_amount(std::string_view s) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

inline std::string shortest_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Minimal delimiter-separated reader: configurable single-character
// delimiter, double-quoted fields with "" escapes, LF or CRLF line endings,
// UTF-8 passed through. Fully blank lines are skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in, char delimiter = ',') : in_(in), delim_(delimiter) {
    if (!in_) throw ParseError("unreadable input stream");
    // strip a UTF-8 BOM if present
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (in_.gcount() != 3 || bom[1] != char(0xBB) || bom[2] != char(0xBF)) {
        throw ParseError("malformed byte-order mark");
      }
    }
  }

  // Reads the next record into `row`. Returns false at end of input.
  bool next(std::vector<std::string>& row) {
    row.clear();
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in_.get()) != std::char_traits<char>::eof()) {
      const char ch = static_cast<char>(c);
      if (in_quotes) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"' && field.empty()) {
        in_quotes = true;
        saw_any = true;
      } else if (ch == delim_) {
        row.push_back(std::move(field));
        field.clear();
        saw_any = true;
      } else if (ch == '\n') {
        if (!saw_any && field.empty()) continue;  // blank line
        row.push_back(std::move(field));
        ++count_;
        return true;
      } else if (ch == '\r') {
        // swallowed; CRLF handled by the \n branch
      } else {
        field.push_back(ch);
        saw_any = true;
      }
    }
    if (in_quotes) throw ParseError("unterminated quoted field");
    if (in_.bad()) throw ParseError("unreadable input stream");
    if (saw_any || !field.empty()) {
      row.push_back(std::move(field));
      ++count_;
      return true;
    }
    return false;
  }

  // Number of records returned so far (1-based for the last returned row).
  std::size_t record_number() const { return count_; }

 private:
  std::istream& in_;
  char delim_;
  std::size_t count_ = 0;
};

inline std::string csv_escape(std::string_view field, char delimiter) {
  const bool needs_quotes = field.find_first_of("\"\r\n") != std::string_view::npos ||
                            field.find(delimiter) != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_csv_row(std::ostream& os, std::span<const std::string> fields,
                          char delimiter = ',') {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os.put(delimiter);
    os << csv_escape(fields[i], delimiter);
  }
  os.put('\n');
}

}  // namespace mobnet
