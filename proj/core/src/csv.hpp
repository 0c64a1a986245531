#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kwsql::csv {

/// RFC 4180 records: comma separated, double-quoted fields with "" escapes,
/// CRLF or LF line endings. Throws DataError on an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace kwsql::csv
