#include "skeletor/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "internal_math.hpp"

namespace skeletor {

int shd_pdag(const Pdag& a, const Pdag& b) {
    if (a.node_count() != b.node_count())
        throw std::invalid_argument("shd: node counts differ");
    int distance = 0;
    for (const auto& [pair, mark] : a.edges()) {
        auto it = b.edges().find(pair);
        if (it == b.edges().end())
            ++distance;  // adjacency only in a
        else if (it->second != mark)
            ++distance;  // shared adjacency, different mark
    }
    for (const auto& [pair, mark] : b.edges()) {
        (void)mark;
        if (!a.edges().count(pair)) ++distance;  // adjacency only in b
    }
    return distance;
}

int shd(const Dag& truth, const Pdag& learned) {
    if (truth.node_count() != learned.node_count())
        throw std::invalid_argument("shd: node counts differ");
    return shd_pdag(cpdag_of(truth), learned);
}

double bdeu(const Dag& dag, const Dataset& data, double ess) {
    if (ess <= 0.0) throw std::invalid_argument("bdeu: ess must be positive");
    if (dag.node_count() != data.variable_count())
        throw std::invalid_argument("bdeu: graph and dataset disagree on variable count");

    double score = 0.0;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        const int r = data.variables[v].cardinality;
        if (r < 1) throw std::invalid_argument("bdeu: zero-cardinality variable");
        const auto& parents = dag.parents(v);
        double q = 1.0;
        for (NodeId p : parents) q *= data.variables[p].cardinality;
        const double a_ij = ess / q;
        const double a_ijk = ess / (q * r);

        // Counts per observed parent configuration only; empty configurations
        // contribute nothing because lnG(a) - lnG(a + 0) = 0.
        std::unordered_map<std::uint64_t, std::vector<long long>> families;
        const auto& col_v = data.columns[v];
        for (long long row = 0; row < data.n_rows; ++row) {
            std::uint64_t code = 0;
            for (NodeId p : parents)
                code = code * static_cast<std::uint64_t>(data.variables[p].cardinality) +
                       static_cast<std::uint64_t>(data.columns[p][row]);
            auto [it, fresh] = families.try_emplace(code);
            if (fresh) it->second.assign(r, 0);
            it->second[col_v[row]] += 1;
        }

        for (const auto& [code, counts] : families) {
            (void)code;
            long long n_ij = 0;
            for (int k = 0; k < r; ++k) {
                const long long n_ijk = counts[k];
                n_ij += n_ijk;
                if (n_ijk > 0)
                    score += detail::log_gamma(a_ijk + n_ijk) - detail::log_gamma(a_ijk);
            }
            score += detail::log_gamma(a_ij) - detail::log_gamma(a_ij + n_ij);
        }
    }
    return score;
}

double bdeu_pdag(const Pdag& pdag, const Dataset& data, double ess) {
    return bdeu(any_dag_extension(pdag), data, ess);
}

CostReport cost_report(const CostLedger& ledger) {
    CostReport report;
    report.total_weight = ledger.total_weight;
    report.total_tests = ledger.total_tests;
    report.tests_by_order = ledger.tests_by_order;
    if (ledger.total_tests > 0) {
        double weighted_orders = 0.0;
        for (const auto& [order, count] : ledger.tests_by_order)
            weighted_orders += static_cast<double>(order) * count;
        report.mean_order = weighted_orders / static_cast<double>(ledger.total_tests);
    }
    return report;
}

}  // namespace skeletor
