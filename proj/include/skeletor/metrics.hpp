#pragma once

#include <map>
#include <optional>

#include "skeletor/citest.hpp"
#include "skeletor/dataset.hpp"
#include "skeletor/orient.hpp"

namespace skeletor {

struct EvalReport {
    int shd = 0;
    double bdeu_learned = 0.0;
    std::optional<double> bdeu_true;
    long long total_weighted_cost = 0;
    long long total_tests = 0;
};

// Structural Hamming distance between two partially directed graphs: one per
// adjacency present in exactly one of them, one per shared adjacency whose
// marks differ. Symmetric. Throws std::invalid_argument on node-count
// mismatch.
int shd_pdag(const Pdag& a, const Pdag& b);

// Learned graph against the CPDAG completion of the ground truth.
int shd(const Dag& truth, const Pdag& learned);

// BDeu log marginal likelihood with equivalent sample size `ess`:
// per family i and parent configuration j,
//   lnG(a_ij) - lnG(a_ij + N_ij) + sum_k [lnG(a_ijk + N_ijk) - lnG(a_ijk)]
// with a_ijk = ess / (q_i * r_i), a_ij = ess / q_i. Natural log.
double bdeu(const Dag& dag, const Dataset& data, double ess);

// Scores a consistent DAG extension of the graph (score equivalence makes
// the choice immaterial for valid CPDAGs).
double bdeu_pdag(const Pdag& pdag, const Dataset& data, double ess);

struct CostReport {
    long long total_weight = 0;
    long long total_tests = 0;
    std::map<int, long long> tests_by_order;
    double mean_order = 0.0;
};

CostReport cost_report(const CostLedger& ledger);

}  // namespace skeletor
