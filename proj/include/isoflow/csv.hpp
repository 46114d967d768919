#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isoflow::csv {

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double x, int digits = 17);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(const std::string& field);

void write_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace isoflow::csv
