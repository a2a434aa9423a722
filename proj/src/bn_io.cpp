#include <kbn/bn_io.hpp>
#include <kbn/csv.hpp>
#include <kbn/error.hpp>

#include <json.hpp>

#include <fstream>
#include <unordered_map>

namespace kbn::io {

using nlohmann::json;

NetworkDocument read_network_json(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedRow, std::string("invalid network JSON: ") + e.what());
    }
    NetworkDocument out;
    try {
        for (const auto& v : doc.at("variables")) {
            if (v.is_string()) {
                out.variables.push_back(v.get<std::string>());
                out.states.emplace_back();
            } else {
                out.variables.push_back(v.at("name").get<std::string>());
                out.states.push_back(v.value("states", std::vector<std::string>{}));
            }
        }
        if (doc.contains("edges")) {
            for (const auto& e : doc.at("edges")) {
                if (e.size() != 2) throw Error(ErrorKind::MalformedRow, "edge must be [parent, child]");
                out.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
            }
        }
        if (doc.contains("cpts")) {
            std::map<std::string, Cpt> cpts;
            for (const auto& [name, rows] : doc.at("cpts").items()) {
                cpts[name] = rows.get<Cpt>();
            }
            out.cpts = std::move(cpts);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedRow, std::string("invalid network JSON: ") + e.what());
    }
    return out;
}

NetworkDocument read_network_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_network_json(in);
}

Dag network_dag(const NetworkDocument& doc) {
    return validate_dag(doc.variables, doc.edges);
}

DiscreteBn network_bn(const NetworkDocument& doc) {
    if (!doc.cpts) throw Error(ErrorKind::InvalidArgument, "network has no CPTs");
    auto dag = network_dag(doc);
    std::vector<std::size_t> arities;
    std::vector<Cpt> cpts;
    std::vector<std::vector<std::string>> labels;
    for (VarIndex v = 0; v < dag.size(); ++v) {
        auto it = doc.cpts->find(dag.name(v));
        if (it == doc.cpts->end()) {
            throw Error(ErrorKind::InvalidArgument, "missing CPT for '" + dag.name(v) + "'");
        }
        std::size_t k = it->second.empty() ? 0 : it->second.front().size();
        if (!doc.states[v].empty() && doc.states[v].size() != k) {
            throw Error(ErrorKind::ArityMismatch, "states and CPT width disagree for '" + dag.name(v) + "'");
        }
        arities.push_back(k);
        cpts.push_back(it->second);
        if (doc.states[v].empty()) {
            std::vector<std::string> l;
            for (std::size_t s = 0; s < k; ++s) l.push_back(std::to_string(s));
            labels.push_back(std::move(l));
        } else {
            labels.push_back(doc.states[v]);
        }
    }
    return DiscreteBn(std::move(dag), std::move(arities), std::move(cpts), std::move(labels));
}

namespace {

json variables_json(const VariableSet& vars, const std::vector<std::vector<std::string>>* labels) {
    json out = json::array();
    for (VarIndex v = 0; v < vars.size(); ++v) {
        json entry = {{"name", vars.name(v)}};
        if (labels) entry["states"] = (*labels)[v];
        out.push_back(entry);
    }
    return out;
}

json edges_json(const Dag& dag) {
    json out = json::array();
    for (const auto& e : dag.edges()) out.push_back({dag.name(e.parent), dag.name(e.child)});
    return out;
}

}  // namespace

void write_network_json(std::ostream& out, const DiscreteBn& bn) {
    const auto& dag = bn.dag();
    json doc;
    doc["variables"] = variables_json(dag.variables(), &bn.state_labels());
    doc["edges"] = edges_json(dag);
    json cpts = json::object();
    for (VarIndex v = 0; v < dag.size(); ++v) cpts[dag.name(v)] = bn.cpt(v);
    doc["cpts"] = cpts;
    out << doc.dump(2) << '\n';
}

void write_graph_json(std::ostream& out, const Dag& dag) {
    json doc;
    doc["variables"] = variables_json(dag.variables(), nullptr);
    doc["edges"] = edges_json(dag);
    out << doc.dump(2) << '\n';
}

Dataset read_dataset_csv(std::istream& in, const NetworkDocument* states) {
    auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorKind::MalformedRow, "dataset has no header");
    std::vector<std::string> names;
    for (const auto& h : rows[0]) names.push_back(csv::trim(h));
    const auto n = names.size();
    auto vars = make_variables(names);

    std::vector<std::vector<std::string>> labels(n);
    std::vector<std::unordered_map<std::string, State>> lookup(n);
    std::vector<bool> fixed(n, false);
    if (states) {
        for (VarIndex v = 0; v < n; ++v) {
            std::size_t d = 0;
            for (; d < states->variables.size(); ++d)
                if (states->variables[d] == names[v]) break;
            if (d == states->variables.size()) {
                throw Error(ErrorKind::UnknownVariable, "column '" + names[v] + "' not in network");
            }
            if (states->states[d].empty()) continue;
            fixed[v] = true;
            labels[v] = states->states[d];
            for (std::size_t s = 0; s < labels[v].size(); ++s) lookup[v][labels[v][s]] = static_cast<State>(s);
        }
    }

    std::vector<std::vector<State>> columns(n);
    for (auto& c : columns) c.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != n) {
            throw Error(ErrorKind::MalformedRow, "row " + std::to_string(r + 1) + " has " +
                                                     std::to_string(row.size()) + " cells, expected " +
                                                     std::to_string(n));
        }
        for (VarIndex v = 0; v < n; ++v) {
            auto cell = csv::trim(row[v]);
            if (cell.empty()) throw Error(ErrorKind::MalformedRow, "missing value in row " + std::to_string(r + 1));
            auto it = lookup[v].find(cell);
            if (it == lookup[v].end()) {
                if (fixed[v]) {
                    throw Error(ErrorKind::MalformedRow, "unknown state '" + cell + "' for '" + names[v] + "'");
                }
                it = lookup[v].emplace(cell, static_cast<State>(labels[v].size())).first;
                labels[v].push_back(cell);
            }
            columns[v].push_back(it->second);
        }
    }
    std::vector<std::size_t> arities(n);
    for (VarIndex v = 0; v < n; ++v) arities[v] = std::max<std::size_t>(labels[v].size(), 1);
    for (VarIndex v = 0; v < n; ++v)
        if (labels[v].empty()) labels[v].push_back("0");
    return Dataset(std::move(vars), std::move(arities), std::move(columns), std::move(labels));
}

Dataset read_dataset_csv_file(const std::string& path, const NetworkDocument* states) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_dataset_csv(in, states);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    csv::write_row(out, data.variables().names());
    csv::Row row(data.variable_count());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (VarIndex v = 0; v < data.variable_count(); ++v) row[v] = data.state_labels(v)[data.at(r, v)];
        csv::write_row(out, row);
    }
}

void write_dataset_csv_file(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    write_dataset_csv(out, data);
}

}  // namespace kbn::io
