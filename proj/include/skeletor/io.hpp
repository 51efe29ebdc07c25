#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "skeletor/bayes_net.hpp"
#include "skeletor/dataset.hpp"
#include "skeletor/graph.hpp"
#include "skeletor/metrics.hpp"

namespace skeletor {

enum class ParseErrorKind {
    syntax,
    unknown_variable,
    duplicate_declaration,
    wrong_row_count,
    row_sum,
    bad_value,
    cyclic_structure,
    missing_cpt,
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, int line, int column, const std::string& message);

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    ParseErrorKind kind_;
    int line_;
    int column_;
};

// .bnet grammar, line oriented:
//   var <name> {<state>,<state>,...}
//   cpt <child> | <p1>,<p2>,...
//   <p>,<p>,...            one probability row per parent configuration,
//                          first listed parent slowest-varying
// '#' starts a comment; blank lines are ignored. Every referenced name must
// be declared before use; each row must sum to 1 within 1e-6.
BayesNet parse_bnet(std::istream& in);
BayesNet parse_bnet_string(const std::string& text);
BayesNet load_bnet(const std::string& path);

// Canonical form: variables in index order, probabilities at 12 significant
// digits; parse(write(net)) is structurally identical and write is
// idempotent over the round trip.
std::string write_bnet(const BayesNet& net);
void save_bnet(const BayesNet& net, const std::string& path);

// Dataset CSV: header row of variable names, cells are state labels.
std::string write_csv(const Dataset& data);
void save_csv(const Dataset& data, const std::string& path);

// Schema from `schema` when given (variables matched to header by name),
// otherwise inferred: observed labels per column, sorted lexicographically.
// Unknown labels and shape errors raise ParseError with row/column.
Dataset parse_csv(std::istream& in, const std::vector<Variable>* schema);
Dataset load_csv(const std::string& path, const std::vector<Variable>* schema);

// .cpdag edge list: one `a -> b` or `a -- b` per line, names resolved
// against `names`; a `# nodes:` comment carries the node set so isolated
// nodes survive the round trip.
std::string write_cpdag(const Pdag& pdag, const std::vector<std::string>& names);
void save_cpdag(const Pdag& pdag, const std::vector<std::string>& names,
                const std::string& path);
Pdag parse_cpdag(std::istream& in, const std::vector<std::string>& names);
Pdag load_cpdag(const std::string& path, const std::vector<std::string>& names);

struct RunMeta {
    std::string algo;
    std::string net;
    int nodes = 0;
    int arcs = 0;
    long long rows = 0;
    int fold = 0;
    std::uint64_t seed = 0;
};

// One self-describing record per run: space-separated key=value pairs.
std::string write_results(const EvalReport& report, const RunMeta& meta);

std::string format_double(double v);  // shared 12-significant-digit encoding

}  // namespace skeletor
