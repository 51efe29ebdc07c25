#pragma once

#include <cstdint>
#include <vector>

#include "skeletor/bayes_net.hpp"

namespace skeletor {

// Column-major categorical sample matrix. CI testing scans a handful of
// columns over all rows, so each variable owns a contiguous code vector.
struct Dataset {
    std::vector<Variable> variables;
    std::vector<std::vector<int32_t>> columns;  // one per variable, length n_rows
    long long n_rows = 0;

    int variable_count() const { return static_cast<int>(variables.size()); }
};

// i.i.d. joint samples by CPT traversal in topological order; deterministic
// per seed. Throws std::invalid_argument when the net fails validate().
Dataset forward_sample(const BayesNet& net, long long rows, std::uint64_t seed);

// k independent replicates of `rows` samples; fold seeds are derived from
// (seed, fold index) with a fixed mixing function.
std::vector<Dataset> kfold_replicates(const BayesNet& net, long long rows, int k,
                                      std::uint64_t seed);

}  // namespace skeletor
