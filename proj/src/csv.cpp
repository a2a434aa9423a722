#include <kbn/csv.hpp>
#include <kbn/error.hpp>

#include <fstream>
#include <istream>
#include <ostream>

namespace kbn {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::DuplicateEdge: return "DuplicateEdge";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::MalformedRow: return "MalformedRow";
        case ErrorKind::DuplicateConstraint: return "DuplicateConstraint";
        case ErrorKind::VariableInTwoTiers: return "VariableInTwoTiers";
        case ErrorKind::ConstraintConflict: return "ConstraintConflict";
        case ErrorKind::UnsatisfiableSeed: return "UnsatisfiableSeed";
        case ErrorKind::OverlappingRoles: return "OverlappingRoles";
        case ErrorKind::NoAdmissibleConnector: return "NoAdmissibleConnector";
        case ErrorKind::DegenerateTruth: return "DegenerateTruth";
        case ErrorKind::VariableSetMismatch: return "VariableSetMismatch";
        case ErrorKind::TooFewVariables: return "TooFewVariables";
        case ErrorKind::TooManyVariables: return "TooManyVariables";
        case ErrorKind::IllegalRate: return "IllegalRate";
        case ErrorKind::Timeout: return "Timeout";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace kbn

namespace kbn::csv {

std::vector<Row> read(std::istream& in) {
    std::vector<Row> rows;
    Row row;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;
    char c;

    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        end_cell();
        bool blank = row.size() == 1 && row[0].empty();
        if (!blank) rows.push_back(std::move(row));
        row.clear();
    };

    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                cell_started = true;
                break;
            case ',':
                end_cell();
                break;
            case '\r':
                if (in.peek() == '\n') in.get(c);
                end_row();
                break;
            case '\n':
                end_row();
                break;
            default:
                cell.push_back(c);
                cell_started = true;
        }
    }
    if (in_quotes) throw Error(ErrorKind::MalformedRow, "unterminated quoted cell");
    if (cell_started || !row.empty()) end_row();
    return rows;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    auto rows = read(in);
    // Strip a UTF-8 byte order mark.
    if (!rows.empty() && !rows[0].empty() && rows[0][0].rfind("\xEF\xBB\xBF", 0) == 0) {
        rows[0][0].erase(0, 3);
    }
    return rows;
}

std::string escape(std::string_view cell) {
    if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape(row[i]);
    }
    out << '\n';
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace kbn::csv
