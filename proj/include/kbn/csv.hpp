#ifndef KBN_CSV_HPP
#define KBN_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kbn::csv {

using Row = std::vector<std::string>;

// RFC 4180 subset: comma separated, optional double quotes, "" escapes a
// quote inside a quoted cell. CRLF and LF both end a record. Blank lines
// are skipped.
std::vector<Row> read(std::istream& in);
std::vector<Row> read_file(const std::string& path);

std::string escape(std::string_view cell);
void write_row(std::ostream& out, const Row& row);

std::string trim(std::string_view s);

}  // namespace kbn::csv

#endif  // KBN_CSV_HPP
