#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nevl::tsv {

// Error tied to a 1-based line number of the input stream.
class ParseError : public std::runtime_error {
public:
    ParseError(size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

struct Row {
    size_t line;  // 1-based
    std::vector<std::string> fields;
};

// Splits on literal tabs; no quoting. Trailing '\r' is stripped so CRLF
// input parses the same as LF. Blank lines are skipped.
std::vector<Row> read_rows(std::istream& in);

// Rejects embedded tabs/newlines, joins with tabs, terminates with '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace nevl::tsv
