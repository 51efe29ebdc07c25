#include "skeletor/citest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "internal_math.hpp"

namespace skeletor {

void CostLedger::record(int z_size) {
    if (z_size < 0) throw std::invalid_argument("CostLedger::record: negative order");
    total_weight += 2 + z_size;
    total_tests += 1;
    tests_by_order[z_size] += 1;
}

namespace {

// Regularized lower incomplete gamma P(a,x) by series expansion; valid for
// x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - detail::log_gamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by modified Lentz continued
// fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - detail::log_gamma(a)) * h;
}

}  // namespace

double chi2_sf(double x, long long dof) {
    if (dof < 1) throw std::invalid_argument("chi2_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    const double a = static_cast<double>(dof) / 2.0;
    const double t = x / 2.0;
    const double q = (t < a + 1.0) ? 1.0 - gamma_p_series(a, t) : gamma_q_cf(a, t);
    return std::clamp(q, 0.0, 1.0);
}

ContingencyTable build_table(const Dataset& data, NodeId x, NodeId y,
                             const std::vector<NodeId>& z) {
    const int nv = data.variable_count();
    auto check = [nv](NodeId v) {
        if (v < 0 || v >= nv)
            throw std::invalid_argument("build_table: variable index " + std::to_string(v) +
                                        " out of range");
    };
    check(x);
    check(y);
    if (x == y) throw std::invalid_argument("build_table: x == y");
    for (NodeId v : z) {
        check(v);
        if (v == x || v == y) throw std::invalid_argument("build_table: endpoint in z");
    }

    ContingencyTable table;
    table.r_x = data.variables[x].cardinality;
    table.r_y = data.variables[y].cardinality;
    table.n = data.n_rows;
    table.z_size = static_cast<int>(z.size());
    double cells = 1.0;
    for (NodeId v : z) cells *= data.variables[v].cardinality;
    table.z_cells = cells;
    if (cells > 9e15)
        throw std::invalid_argument("build_table: conditioning space too large to index");

    const int cell_count = table.r_x * table.r_y;
    const auto& col_x = data.columns[x];
    const auto& col_y = data.columns[y];

    std::unordered_map<std::uint64_t, std::vector<int>> strata;
    for (long long r = 0; r < data.n_rows; ++r) {
        std::uint64_t code = 0;
        for (NodeId v : z)
            code = code * static_cast<std::uint64_t>(data.variables[v].cardinality) +
                   static_cast<std::uint64_t>(data.columns[v][r]);
        auto [it, fresh] = strata.try_emplace(code);
        if (fresh) it->second.assign(cell_count, 0);
        it->second[static_cast<std::size_t>(col_x[r]) * table.r_y + col_y[r]] += 1;
    }

    table.strata.assign(std::make_move_iterator(strata.begin()),
                        std::make_move_iterator(strata.end()));
    std::sort(table.strata.begin(), table.strata.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return table;
}

CiResult chi2_test(const ContingencyTable& table, double alpha, double reliability_min,
                   ReliabilityPolicy policy) {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("chi2_test: alpha outside (0,1)");
    if (table.n == 0) throw std::invalid_argument("chi2_test: empty table");

    CiResult result;
    result.weight = 2 + table.z_size;
    result.reliable =
        static_cast<double>(table.n) / (table.r_x * table.r_y * table.z_cells) >= reliability_min;
    if (!result.reliable && policy == ReliabilityPolicy::conservative) {
        // Skipped: assume dependence rather than trust a starved table.
        result.independent = false;
        result.p_value = 0.0;
        return result;
    }

    double statistic = 0.0;
    long long dof = 0;
    std::vector<double> row_margin(table.r_x);
    std::vector<double> col_margin(table.r_y);
    for (const auto& [code, counts] : table.strata) {
        (void)code;
        std::fill(row_margin.begin(), row_margin.end(), 0.0);
        std::fill(col_margin.begin(), col_margin.end(), 0.0);
        double total = 0.0;
        for (int i = 0; i < table.r_x; ++i)
            for (int j = 0; j < table.r_y; ++j) {
                const double o = counts[static_cast<std::size_t>(i) * table.r_y + j];
                row_margin[i] += o;
                col_margin[j] += o;
                total += o;
            }
        const long long rx_nz = std::count_if(row_margin.begin(), row_margin.end(),
                                              [](double m) { return m > 0.0; });
        const long long ry_nz = std::count_if(col_margin.begin(), col_margin.end(),
                                              [](double m) { return m > 0.0; });
        if (rx_nz < 2 || ry_nz < 2) continue;  // degenerate stratum
        dof += (rx_nz - 1) * (ry_nz - 1);
        for (int i = 0; i < table.r_x; ++i) {
            if (row_margin[i] == 0.0) continue;
            for (int j = 0; j < table.r_y; ++j) {
                if (col_margin[j] == 0.0) continue;
                const double expected = row_margin[i] * col_margin[j] / total;
                const double observed = counts[static_cast<std::size_t>(i) * table.r_y + j];
                const double diff = observed - expected;
                statistic += diff * diff / expected;
            }
        }
    }

    result.statistic = statistic;
    result.dof = dof;
    if (dof == 0) {
        result.p_value = 1.0;
        result.independent = true;
    } else {
        result.p_value = chi2_sf(statistic, dof);
        result.independent = result.p_value > alpha;
    }
    return result;
}

CiResult OracleCiTest::test(NodeId x, NodeId y, const std::vector<NodeId>& z) {
    CiResult result;
    result.independent = d_separated(dag_, x, y, z);
    result.reliable = true;
    result.weight = 2 + static_cast<int>(z.size());
    result.p_value = result.independent ? 1.0 : 0.0;
    ledger_.record(static_cast<int>(z.size()));
    note(x, y, z, result.independent, true);
    return result;
}

ChiSquaredCiTest::ChiSquaredCiTest(const Dataset& data, CiConfig config)
    : data_(data), config_(config) {
    if (config_.alpha <= 0.0 || config_.alpha >= 1.0)
        throw std::invalid_argument("ChiSquaredCiTest: alpha outside (0,1)");
}

bool ChiSquaredCiTest::reliable(int r_x, int r_y, double z_cells) const {
    return static_cast<double>(data_.n_rows) / (r_x * r_y * z_cells) >= config_.reliability_min;
}

CiResult ChiSquaredCiTest::test(NodeId x, NodeId y, const std::vector<NodeId>& z) {
    const int r_x = data_.variables.at(x).cardinality;
    const int r_y = data_.variables.at(y).cardinality;
    double z_cells = 1.0;
    for (NodeId v : z) z_cells *= data_.variables.at(v).cardinality;

    if (config_.policy == ReliabilityPolicy::conservative && !reliable(r_x, r_y, z_cells)) {
        ++skipped_unreliable_;
        CiResult result;
        result.weight = 2 + static_cast<int>(z.size());
        note(x, y, z, false, false);
        return result;  // dependence assumed, nothing charged
    }

    const ContingencyTable table = build_table(data_, x, y, z);
    CiResult result = chi2_test(table, config_.alpha, config_.reliability_min, config_.policy);
    ledger_.record(static_cast<int>(z.size()));
    note(x, y, z, result.independent, true);
    return result;
}

bool ChiSquaredCiTest::order_feasible(NodeId target, const std::vector<NodeId>& candidates,
                                      int dss) const {
    if (config_.policy != ReliabilityPolicy::conservative) return true;
    if (candidates.empty()) return false;
    const int r_t = data_.variables.at(target).cardinality;
    int min_ry = data_.variables.at(candidates.front()).cardinality;
    std::vector<int> cards;
    cards.reserve(candidates.size());
    for (NodeId v : candidates) {
        const int c = data_.variables.at(v).cardinality;
        min_ry = std::min(min_ry, c);
        cards.push_back(c);
    }
    std::sort(cards.begin(), cards.end());
    double min_cells = 1.0;
    for (int i = 0; i < dss && i < static_cast<int>(cards.size()); ++i) min_cells *= cards[i];
    // Lower bound over every (candidate, subset) combination at this order:
    // if even the smallest theoretical table is starved, all are.
    return reliable(r_t, min_ry, min_cells);
}

}  // namespace skeletor
