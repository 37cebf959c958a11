#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tlab::csv {

using Row = std::vector<std::string>;

// RFC 4180 parsing: quoted fields may contain commas, quotes ("") and line
// breaks. CRLF and LF line endings are both accepted; a leading UTF-8 BOM is
// skipped. Throws MalformedCsv on an unterminated quote.
std::vector<Row> parse(std::string_view text);

std::string escape_field(std::string_view field);
std::string format_row(const Row& row);

}  // namespace tlab::csv
