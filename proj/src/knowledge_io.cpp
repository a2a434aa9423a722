#include <kbn/knowledge_io.hpp>
#include <kbn/csv.hpp>
#include <kbn/error.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace kbn::io {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    return out;
}

std::vector<csv::Row> read_with_header(std::istream& in, const csv::Row& expected, bool open_ended) {
    auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorKind::MalformedRow, "missing header");
    auto& header = rows.front();
    for (auto& cell : header) cell = csv::trim(cell);
    bool ok = open_ended ? header.size() >= expected.size() : header.size() == expected.size();
    for (std::size_t i = 1; ok && i < expected.size(); ++i) ok = header[i] == expected[i];
    if (!ok) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        throw Error(ErrorKind::MalformedRow, "header must be " + want + (open_ended ? ",..." : ""));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() > header.size()) {
            throw Error(ErrorKind::MalformedRow, "row " + std::to_string(r + 1) + " has too many cells");
        }
        rows[r].resize(header.size());
        for (auto& cell : rows[r]) cell = csv::trim(cell);
    }
    return rows;
}

const char* first_column(PairHeader h) { return h == PairHeader::Directed ? "Parent" : "Var1"; }
const char* second_column(PairHeader h) { return h == PairHeader::Directed ? "Child" : "Var2"; }

}  // namespace

std::vector<NamedEdge> parse_edge_constraints(std::istream& in, PairHeader header) {
    auto rows = read_with_header(in, {"ID", first_column(header), second_column(header)}, false);
    std::vector<NamedEdge> out;
    std::set<NamedEdge> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row[1].empty() || row[2].empty()) {
            throw Error(ErrorKind::MalformedRow, "row " + std::to_string(r + 1) + " needs two variables");
        }
        NamedEdge key(row[1], row[2]);
        if (header == PairHeader::Undirected && key.second < key.first) std::swap(key.first, key.second);
        if (!seen.insert(key).second) {
            throw Error(ErrorKind::DuplicateConstraint,
                        "pair " + row[1] + "," + row[2] + " repeated on row " + std::to_string(r + 1));
        }
        out.emplace_back(row[1], row[2]);
    }
    return out;
}

std::vector<NamedEdge> parse_edge_constraints_file(const std::string& path, PairHeader header) {
    auto in = open_in(path);
    return parse_edge_constraints(in, header);
}

void write_edge_constraints(std::ostream& out, const std::vector<NamedEdge>& pairs, PairHeader header) {
    csv::write_row(out, {"ID", first_column(header), second_column(header)});
    std::size_t id = 1;
    for (const auto& [a, b] : pairs) csv::write_row(out, {std::to_string(id++), a, b});
}

void write_edge_constraints_file(const std::string& path, const std::vector<NamedEdge>& pairs, PairHeader header) {
    auto out = open_out(path);
    write_edge_constraints(out, pairs, header);
}

TemporalTiers parse_tiers(std::istream& in) {
    auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorKind::MalformedRow, "missing header");
    const auto width = rows.front().size();
    if (width < 2 || csv::trim(rows.front()[0]) != "ID") {
        throw Error(ErrorKind::MalformedRow, "header must be ID,Tier 1,...,Tier k");
    }
    for (std::size_t t = 1; t < width; ++t) {
        if (csv::trim(rows.front()[t]) != "Tier " + std::to_string(t)) {
            throw Error(ErrorKind::MalformedRow, "column " + std::to_string(t + 1) + " must be 'Tier " +
                                                     std::to_string(t) + "'");
        }
    }
    TemporalTiers tiers;
    tiers.tiers.resize(width - 1);
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() > width) {
            throw Error(ErrorKind::MalformedRow, "row " + std::to_string(r + 1) + " has too many cells");
        }
        for (std::size_t t = 1; t < rows[r].size(); ++t) {
            auto name = csv::trim(rows[r][t]);
            if (name.empty()) continue;
            if (!seen.insert(name).second) {
                throw Error(ErrorKind::VariableInTwoTiers, "variable '" + name + "' appears more than once");
            }
            tiers.tiers[t - 1].push_back(name);
        }
    }
    return tiers;
}

TemporalTiers parse_tiers_file(const std::string& path) {
    auto in = open_in(path);
    return parse_tiers(in);
}

void write_tiers(std::ostream& out, const TemporalTiers& tiers) {
    csv::Row header{"ID"};
    std::size_t height = 0;
    for (std::size_t t = 0; t < tiers.tiers.size(); ++t) {
        header.push_back("Tier " + std::to_string(t + 1));
        height = std::max(height, tiers.tiers[t].size());
    }
    csv::write_row(out, header);
    for (std::size_t r = 0; r < height; ++r) {
        csv::Row row{std::to_string(r + 1)};
        for (const auto& tier : tiers.tiers) row.push_back(r < tier.size() ? tier[r] : "");
        csv::write_row(out, row);
    }
}

void write_tiers_file(const std::string& path, const TemporalTiers& tiers) {
    auto out = open_out(path);
    write_tiers(out, tiers);
}

BdnAnnotation parse_bdn_roles(std::istream& in) {
    auto rows = read_with_header(in, {"ID", "Decision", "Utility"}, false);
    BdnAnnotation roles;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (!rows[r][1].empty()) roles.decisions.push_back(rows[r][1]);
        if (!rows[r][2].empty()) roles.utilities.push_back(rows[r][2]);
    }
    return roles;
}

BdnAnnotation parse_bdn_roles_file(const std::string& path) {
    auto in = open_in(path);
    return parse_bdn_roles(in);
}

void write_bdn_roles(std::ostream& out, const BdnAnnotation& roles) {
    csv::write_row(out, {"ID", "Decision", "Utility"});
    const auto height = std::max(roles.decisions.size(), roles.utilities.size());
    for (std::size_t r = 0; r < height; ++r) {
        csv::write_row(out, {std::to_string(r + 1), r < roles.decisions.size() ? roles.decisions[r] : "",
                             r < roles.utilities.size() ? roles.utilities[r] : ""});
    }
}

void write_bdn_roles_file(const std::string& path, const BdnAnnotation& roles) {
    auto out = open_out(path);
    write_bdn_roles(out, roles);
}

}  // namespace kbn::io
