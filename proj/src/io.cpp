#include "skeletor/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace skeletor {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_probability(const std::string& token, int line_no, int column) {
    const std::string t = trim(token);
    if (t.empty())
        throw ParseError(ParseErrorKind::bad_value, line_no, column, "empty probability value");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ParseError(ParseErrorKind::bad_value, line_no, column,
                         "not a number: '" + t + "'");
    }
    if (used != t.size())
        throw ParseError(ParseErrorKind::bad_value, line_no, column,
                         "trailing characters in number: '" + t + "'");
    if (value < 0.0)
        throw ParseError(ParseErrorKind::bad_value, line_no, column,
                         "negative probability: '" + t + "'");
    return value;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

BayesNet parse_bnet(std::istream& in) {
    BayesNet net;
    std::map<std::string, NodeId> index;
    std::vector<std::vector<NodeId>> parents;
    std::vector<bool> has_cpt;

    int current_cpt = -1;  // node whose probability rows are being read
    long long rows_expected = 0;
    long long rows_seen = 0;
    int cpt_line = 0;

    auto finish_cpt = [&](int line_no) {
        if (current_cpt >= 0 && rows_seen != rows_expected)
            throw ParseError(ParseErrorKind::wrong_row_count, line_no, 1,
                             "cpt for '" + net.variables[current_cpt].name + "' has " +
                                 std::to_string(rows_seen) + " rows, expected " +
                                 std::to_string(rows_expected) + " (declared at line " +
                                 std::to_string(cpt_line) + ")");
        current_cpt = -1;
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.rfind("var ", 0) == 0) {
            finish_cpt(line_no);
            const auto brace = line.find('{');
            const auto close = line.find('}');
            if (brace == std::string::npos || close == std::string::npos || close < brace)
                throw ParseError(ParseErrorKind::syntax, line_no, 1,
                                 "expected: var <name> {<state>,<state>,...}");
            const std::string name = trim(line.substr(4, brace - 4));
            if (name.empty())
                throw ParseError(ParseErrorKind::syntax, line_no, 5, "missing variable name");
            if (index.count(name))
                throw ParseError(ParseErrorKind::duplicate_declaration, line_no, 5,
                                 "variable '" + name + "' already declared");
            Variable var;
            var.name = name;
            for (const std::string& state : split(line.substr(brace + 1, close - brace - 1), ',')) {
                const std::string label = trim(state);
                if (label.empty())
                    throw ParseError(ParseErrorKind::bad_value, line_no,
                                     static_cast<int>(brace) + 2, "empty state label");
                if (std::find(var.state_labels.begin(), var.state_labels.end(), label) !=
                    var.state_labels.end())
                    throw ParseError(ParseErrorKind::duplicate_declaration, line_no,
                                     static_cast<int>(brace) + 2,
                                     "duplicate state label '" + label + "'");
                var.state_labels.push_back(label);
            }
            var.cardinality = static_cast<int>(var.state_labels.size());
            if (var.cardinality < 2)
                throw ParseError(ParseErrorKind::bad_value, line_no, static_cast<int>(brace) + 1,
                                 "variable '" + name + "' needs at least two states");
            index[name] = static_cast<NodeId>(net.variables.size());
            net.variables.push_back(std::move(var));
            parents.emplace_back();
            has_cpt.push_back(false);
            net.cpts.emplace_back();
            continue;
        }

        if (line.rfind("cpt ", 0) == 0) {
            finish_cpt(line_no);
            const auto bar = line.find('|');
            if (bar == std::string::npos)
                throw ParseError(ParseErrorKind::syntax, line_no, 1,
                                 "expected: cpt <child> | <parent>,<parent>,...");
            const std::string child_name = trim(line.substr(4, bar - 4));
            auto child_it = index.find(child_name);
            if (child_it == index.end())
                throw ParseError(ParseErrorKind::unknown_variable, line_no, 5,
                                 "unknown variable '" + child_name + "'");
            const NodeId child = child_it->second;
            if (has_cpt[child])
                throw ParseError(ParseErrorKind::duplicate_declaration, line_no, 5,
                                 "cpt for '" + child_name + "' already declared");
            Cpt cpt;
            cpt.child = child;
            const std::string parent_text = trim(line.substr(bar + 1));
            if (!parent_text.empty()) {
                for (const std::string& token : split(parent_text, ',')) {
                    const std::string pname = trim(token);
                    auto pit = index.find(pname);
                    if (pit == index.end())
                        throw ParseError(ParseErrorKind::unknown_variable, line_no,
                                         static_cast<int>(bar) + 2,
                                         "unknown variable '" + pname + "'");
                    if (pit->second == child)
                        throw ParseError(ParseErrorKind::bad_value, line_no,
                                         static_cast<int>(bar) + 2,
                                         "variable '" + pname + "' cannot parent itself");
                    if (std::find(cpt.parent_order.begin(), cpt.parent_order.end(), pit->second) !=
                        cpt.parent_order.end())
                        throw ParseError(ParseErrorKind::duplicate_declaration, line_no,
                                         static_cast<int>(bar) + 2,
                                         "duplicate parent '" + pname + "'");
                    cpt.parent_order.push_back(pit->second);
                }
            }
            rows_expected = 1;
            for (NodeId p : cpt.parent_order) rows_expected *= net.variables[p].cardinality;
            rows_seen = 0;
            cpt_line = line_no;
            current_cpt = child;
            has_cpt[child] = true;
            parents[child] = cpt.parent_order;
            net.cpts[child] = std::move(cpt);
            continue;
        }

        // Anything else must be a probability row of the open cpt block.
        if (current_cpt < 0)
            throw ParseError(ParseErrorKind::syntax, line_no, 1,
                             "unexpected line outside a cpt block: '" + line + "'");
        if (rows_seen == rows_expected)
            throw ParseError(ParseErrorKind::wrong_row_count, line_no, 1,
                             "cpt for '" + net.variables[current_cpt].name + "' expects only " +
                                 std::to_string(rows_expected) + " rows");
        const std::vector<std::string> cells = split(line, ',');
        if (static_cast<int>(cells.size()) != net.variables[current_cpt].cardinality)
            throw ParseError(ParseErrorKind::bad_value, line_no, 1,
                             "row has " + std::to_string(cells.size()) + " entries, expected " +
                                 std::to_string(net.variables[current_cpt].cardinality));
        std::vector<double> row;
        double sum = 0.0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double p = parse_probability(cells[i], line_no, static_cast<int>(i) + 1);
            row.push_back(p);
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw ParseError(ParseErrorKind::row_sum, line_no, 1,
                             "row sums to " + std::to_string(sum) + ", expected 1");
        net.cpts[current_cpt].table.push_back(std::move(row));
        ++rows_seen;
    }
    finish_cpt(line_no + 1);

    for (NodeId v = 0; v < net.node_count(); ++v)
        if (!has_cpt[v])
            throw ParseError(ParseErrorKind::missing_cpt, line_no + 1, 1,
                             "variable '" + net.variables[v].name + "' has no cpt");
    try {
        std::vector<std::vector<NodeId>> sorted = parents;
        net.dag = Dag::from_parents(std::move(sorted));
    } catch (const std::invalid_argument& e) {
        throw ParseError(ParseErrorKind::cyclic_structure, line_no + 1, 1, e.what());
    }
    return net;
}

BayesNet parse_bnet_string(const std::string& text) {
    std::istringstream in(text);
    return parse_bnet(in);
}

BayesNet load_bnet(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file: " + path);
    return parse_bnet(in);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string write_bnet(const BayesNet& net) {
    std::string out;
    for (const Variable& var : net.variables) {
        out += "var " + var.name + " {";
        for (std::size_t i = 0; i < var.state_labels.size(); ++i) {
            if (i) out += ",";
            out += var.state_labels[i];
        }
        out += "}\n";
    }
    for (const Cpt& cpt : net.cpts) {
        out += "cpt " + net.variables[cpt.child].name + " |";
        for (std::size_t i = 0; i < cpt.parent_order.size(); ++i) {
            out += i ? "," : " ";
            out += net.variables[cpt.parent_order[i]].name;
        }
        out += "\n";
        for (const auto& row : cpt.table) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ",";
                out += format_double(row[i]);
            }
            out += "\n";
        }
    }
    return out;
}

void save_bnet(const BayesNet& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write network file: " + path);
    out << write_bnet(net);
}

std::string write_csv(const Dataset& data) {
    std::string out;
    for (int v = 0; v < data.variable_count(); ++v) {
        const std::string& name = data.variables[v].name;
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos)
            throw std::invalid_argument("write_csv: variable name contains a separator");
        if (v) out += ",";
        out += name;
    }
    out += "\n";
    for (long long r = 0; r < data.n_rows; ++r) {
        for (int v = 0; v < data.variable_count(); ++v) {
            if (v) out += ",";
            out += data.variables[v].state_labels[data.columns[v][r]];
        }
        out += "\n";
    }
    return out;
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    out << write_csv(data);
}

Dataset parse_csv(std::istream& in, const std::vector<Variable>* schema) {
    std::string header_line;
    if (!std::getline(in, header_line))
        throw ParseError(ParseErrorKind::syntax, 1, 1, "empty csv: missing header");
    std::vector<std::string> header;
    for (const std::string& h : split(trim(header_line), ',')) {
        const std::string name = trim(h);
        if (name.empty()) throw ParseError(ParseErrorKind::syntax, 1, 1, "empty header cell");
        header.push_back(name);
    }
    const int n = static_cast<int>(header.size());

    Dataset data;
    data.columns.assign(n, {});
    std::vector<std::vector<std::string>> raw_cells(n);

    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty()) continue;
        const std::vector<std::string> cells = split(body, ',');
        if (static_cast<int>(cells.size()) != n)
            throw ParseError(ParseErrorKind::syntax, line_no, 1,
                             "row has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(n));
        for (int v = 0; v < n; ++v) raw_cells[v].push_back(trim(cells[v]));
        ++data.n_rows;
    }

    if (schema) {
        std::map<std::string, const Variable*> by_name;
        for (const Variable& var : *schema) by_name[var.name] = &var;
        if (static_cast<int>(schema->size()) != n)
            throw ParseError(ParseErrorKind::unknown_variable, 1, 1,
                             "header has " + std::to_string(n) + " variables, schema has " +
                                 std::to_string(schema->size()));
        for (int v = 0; v < n; ++v) {
            auto it = by_name.find(header[v]);
            if (it == by_name.end())
                throw ParseError(ParseErrorKind::unknown_variable, 1, v + 1,
                                 "variable '" + header[v] + "' not in schema");
            data.variables.push_back(*it->second);
        }
    } else {
        if (data.n_rows == 0)
            throw ParseError(ParseErrorKind::syntax, line_no, 1,
                             "cannot infer a schema from an empty dataset");
        for (int v = 0; v < n; ++v) {
            std::set<std::string> labels(raw_cells[v].begin(), raw_cells[v].end());
            if (labels.size() < 2)
                throw ParseError(ParseErrorKind::bad_value, 2, v + 1,
                                 "column '" + header[v] +
                                     "' needs at least two distinct values to infer a schema");
            Variable var;
            var.name = header[v];
            var.state_labels.assign(labels.begin(), labels.end());
            var.cardinality = static_cast<int>(var.state_labels.size());
            data.variables.push_back(std::move(var));
        }
    }

    for (int v = 0; v < n; ++v) {
        std::map<std::string, int> code;
        for (int s = 0; s < data.variables[v].cardinality; ++s)
            code[data.variables[v].state_labels[s]] = s;
        data.columns[v].reserve(data.n_rows);
        for (long long r = 0; r < data.n_rows; ++r) {
            auto it = code.find(raw_cells[v][r]);
            if (it == code.end())
                throw ParseError(ParseErrorKind::bad_value, static_cast<int>(r) + 2, v + 1,
                                 "unknown label '" + raw_cells[v][r] + "' for variable '" +
                                     data.variables[v].name + "'");
            data.columns[v].push_back(it->second);
        }
    }
    return data;
}

Dataset load_csv(const std::string& path, const std::vector<Variable>* schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return parse_csv(in, schema);
}

std::string write_cpdag(const Pdag& pdag, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != pdag.node_count())
        throw std::invalid_argument("write_cpdag: name count does not match graph");
    std::string out = "# nodes: ";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
    }
    out += "\n";
    for (const auto& [pair, mark] : pdag.edges()) {
        switch (mark) {
            case EdgeMark::undirected:
                out += names[pair.a] + " -- " + names[pair.b] + "\n";
                break;
            case EdgeMark::forward:
                out += names[pair.a] + " -> " + names[pair.b] + "\n";
                break;
            case EdgeMark::backward:
                out += names[pair.b] + " -> " + names[pair.a] + "\n";
                break;
        }
    }
    return out;
}

void save_cpdag(const Pdag& pdag, const std::vector<std::string>& names,
                const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << write_cpdag(pdag, names);
}

Pdag parse_cpdag(std::istream& in, const std::vector<std::string>& names) {
    std::map<std::string, NodeId> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<NodeId>(i);
    Pdag pdag(static_cast<int>(names.size()));

    auto resolve = [&index](const std::string& name, int line_no) {
        auto it = index.find(name);
        if (it == index.end())
            throw ParseError(ParseErrorKind::unknown_variable, line_no, 1,
                             "unknown node '" + name + "'");
        return it->second;
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        std::istringstream tokens(line);
        std::string lhs, op, rhs, extra;
        tokens >> lhs >> op >> rhs;
        if (lhs.empty() || rhs.empty() || (op != "--" && op != "->") || (tokens >> extra))
            throw ParseError(ParseErrorKind::syntax, line_no, 1,
                             "expected '<a> -- <b>' or '<a> -> <b>'");
        const NodeId a = resolve(lhs, line_no);
        const NodeId b = resolve(rhs, line_no);
        if (a == b)
            throw ParseError(ParseErrorKind::bad_value, line_no, 1, "self-loop on '" + lhs + "'");
        if (pdag.adjacent(a, b))
            throw ParseError(ParseErrorKind::duplicate_declaration, line_no, 1,
                             "edge '" + lhs + "', '" + rhs + "' listed twice");
        pdag.add_undirected(a, b);
        if (op == "->" && !pdag.set_direction(a, b))
            throw ParseError(ParseErrorKind::bad_value, line_no, 1,
                             "arc '" + lhs + " -> " + rhs + "' closes a directed cycle");
    }
    return pdag;
}

Pdag load_cpdag(const std::string& path, const std::vector<std::string>& names) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return parse_cpdag(in, names);
}

std::string write_results(const EvalReport& report, const RunMeta& meta) {
    std::string out;
    out += "algo=" + meta.algo;
    out += " net=" + meta.net;
    out += " nodes=" + std::to_string(meta.nodes);
    out += " arcs=" + std::to_string(meta.arcs);
    out += " rows=" + std::to_string(meta.rows);
    out += " fold=" + std::to_string(meta.fold);
    out += " seed=" + std::to_string(meta.seed);
    out += " shd=" + std::to_string(report.shd);
    out += " bdeu=" + format_double(report.bdeu_learned);
    out += " bdeu_true=" + (report.bdeu_true ? format_double(*report.bdeu_true) : "na");
    out += " cost=" + std::to_string(report.total_weighted_cost);
    out += " tests=" + std::to_string(report.total_tests);
    out += "\n";
    return out;
}

}  // namespace skeletor
