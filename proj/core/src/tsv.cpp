#include "nevl/tsv.hpp"

namespace nevl::tsv {

std::vector<Row> read_rows(std::istream& in) {
    std::vector<Row> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Row row;
        row.line = lineno;
        size_t start = 0;
        while (true) {
            const size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                row.fields.push_back(line.substr(start));
                break;
            }
            row.fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find('\t') != std::string::npos ||
            fields[i].find('\n') != std::string::npos)
            throw std::runtime_error("TSV field contains tab or newline");
        if (i) out << '\t';
        out << fields[i];
    }
    out << '\n';
}

}  // namespace nevl::tsv
