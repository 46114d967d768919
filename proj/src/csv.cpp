#include "isoflow/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace isoflow::csv {

std::string format_double(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  std::string out(buf);
  // snprintf honours LC_NUMERIC; force '.'.
  for (char& ch : out)
    if (ch == ',') ch = '.';
  return out;
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << escape(fields[i]);
  }
  os << '\n';
}

}  // namespace isoflow::csv
