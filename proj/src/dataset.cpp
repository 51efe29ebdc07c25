#include "skeletor/dataset.hpp"

#include <stdexcept>

#include "skeletor/rng.hpp"

namespace skeletor {

Dataset forward_sample(const BayesNet& net, long long rows, std::uint64_t seed) {
    if (rows < 0) throw std::invalid_argument("forward_sample: negative row count");
    if (auto issues = validate(net); !issues.empty())
        throw std::invalid_argument("forward_sample: invalid network: " + issues.front());

    const int n = net.node_count();
    Dataset data;
    data.variables = net.variables;
    data.n_rows = rows;
    data.columns.assign(n, std::vector<int32_t>(rows, 0));

    const std::vector<NodeId> order = topological_order(net.dag);
    auto rng = make_rng(mix_seed({seed, 0x5a3f1eu}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<int> parent_states;
    for (long long r = 0; r < rows; ++r) {
        for (NodeId v : order) {
            const Cpt& cpt = net.cpts[v];
            parent_states.clear();
            for (NodeId p : cpt.parent_order)
                parent_states.push_back(data.columns[p][r]);
            const auto& row = cpt.table[cpt.row_index(parent_states, net.variables)];
            const double u = unit(rng);
            double acc = 0.0;
            int state = static_cast<int>(row.size()) - 1;
            for (std::size_t k = 0; k < row.size(); ++k) {
                acc += row[k];
                if (u < acc) {
                    state = static_cast<int>(k);
                    break;
                }
            }
            data.columns[v][r] = state;
        }
    }
    return data;
}

std::vector<Dataset> kfold_replicates(const BayesNet& net, long long rows, int k,
                                      std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("kfold_replicates: k must be >= 1");
    std::vector<Dataset> folds;
    folds.reserve(k);
    for (int fold = 0; fold < k; ++fold)
        folds.push_back(forward_sample(net, rows, mix_seed({seed, 0xf01d5u, static_cast<std::uint64_t>(fold)})));
    return folds;
}

}  // namespace skeletor
