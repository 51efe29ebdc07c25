#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "skeletor/dataset.hpp"
#include "skeletor/graph.hpp"

namespace skeletor {

// Stratified contingency counts for X, Y given a conditioning set Z. Only
// observed z-configurations are materialized; within a stratum the r_x * r_y
// cell block is dense.
struct ContingencyTable {
    int r_x = 0;
    int r_y = 0;
    int z_size = 0;
    long long n = 0;
    double z_cells = 1.0;  // theoretical number of z-configurations, prod of cardinalities
    // (z_config_code, row-major counts of size r_x*r_y), sorted by code.
    std::vector<std::pair<std::uint64_t, std::vector<int>>> strata;
};

struct CiResult {
    double statistic = 0.0;
    long long dof = 0;
    double p_value = 0.0;
    bool independent = false;
    bool reliable = false;
    int weight = 0;  // 2 + |Z| of the test
};

// Weighted-cost accounting: each executed test of conditioning order |Z|
// charges 2 + |Z|.
struct CostLedger {
    long long total_weight = 0;
    long long total_tests = 0;
    std::map<int, long long> tests_by_order;

    void record(int z_size);
};

enum class ReliabilityPolicy {
    conservative,  // unreliable tests are skipped and count as dependence
    permissive,    // unreliable tests run anyway
};

struct CiConfig {
    double alpha = 0.05;
    double reliability_min = 5.0;
    ReliabilityPolicy policy = ReliabilityPolicy::conservative;
};

// Upper-tail probability of the chi-squared distribution, Q(dof/2, x/2) via
// the regularized incomplete gamma function; absolute error <= 1e-10.
double chi2_sf(double x, long long dof);

// Single pass over the rows, touching exactly the |z|+2 involved columns.
ContingencyTable build_table(const Dataset& data, NodeId x, NodeId y,
                             const std::vector<NodeId>& z);

// Stratified Pearson chi-squared test. Degenerate strata (fewer than two
// observed values of x or y) contribute nothing to statistic or dof; dof == 0
// yields independence with p = 1. Under the conservative policy an unreliable
// table short-circuits to a dependence verdict without computing the
// statistic. Throws std::invalid_argument on an empty table.
CiResult chi2_test(const ContingencyTable& table, double alpha, double reliability_min,
                   ReliabilityPolicy policy);

// One conditional-independence call as seen by the search layer.
struct CiCall {
    NodeId x = 0;
    NodeId y = 0;
    std::vector<NodeId> z;
    bool independent = false;
    bool executed = false;
};

class IndependenceTest {
public:
    virtual ~IndependenceTest() = default;

    virtual CiResult test(NodeId x, NodeId y, const std::vector<NodeId>& z) = 0;
    virtual int variable_count() const = 0;

    // False when no test of order `dss` against the candidate pool could be
    // executed; lets the search skip a dead round. Default: always feasible.
    virtual bool order_feasible(NodeId target, const std::vector<NodeId>& candidates,
                                int dss) const {
        (void)target;
        (void)candidates;
        (void)dss;
        return true;
    }

    const CostLedger& ledger() const { return ledger_; }
    void set_trace(std::vector<CiCall>* sink) { trace_ = sink; }

protected:
    void note(NodeId x, NodeId y, const std::vector<NodeId>& z, bool independent, bool executed) {
        if (trace_) trace_->push_back({x, y, z, independent, executed});
    }

    CostLedger ledger_;
    std::vector<CiCall>* trace_ = nullptr;
};

// Exact oracle backed by d-separation on a known DAG; every call counts as
// an executed, reliable test.
class OracleCiTest final : public IndependenceTest {
public:
    explicit OracleCiTest(const Dag& dag) : dag_(dag) {}

    CiResult test(NodeId x, NodeId y, const std::vector<NodeId>& z) override;
    int variable_count() const override { return dag_.node_count(); }

private:
    const Dag& dag_;
};

// Chi-squared test on a dataset with reliability gating and cost accounting.
// Under the conservative policy a test whose theoretical cell count fails the
// samples-per-cell criterion is skipped: dependence is assumed, nothing is
// charged to the ledger.
class ChiSquaredCiTest final : public IndependenceTest {
public:
    ChiSquaredCiTest(const Dataset& data, CiConfig config);

    CiResult test(NodeId x, NodeId y, const std::vector<NodeId>& z) override;
    int variable_count() const override { return data_.variable_count(); }
    bool order_feasible(NodeId target, const std::vector<NodeId>& candidates,
                        int dss) const override;

    long long skipped_unreliable() const { return skipped_unreliable_; }
    const CiConfig& config() const { return config_; }

private:
    bool reliable(int r_x, int r_y, double z_cells) const;

    const Dataset& data_;
    CiConfig config_;
    long long skipped_unreliable_ = 0;
};

}  // namespace skeletor
