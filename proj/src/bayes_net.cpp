#include "skeletor/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "skeletor/rng.hpp"

namespace skeletor {

int Cpt::row_index(const std::vector<int>& parent_states, const std::vector<Variable>& vars) const {
    int row = 0;
    for (std::size_t i = 0; i < parent_order.size(); ++i)
        row = row * vars[parent_order[i]].cardinality + parent_states[i];
    return row;
}

NodeId BayesNet::index_of(const std::string& name) const {
    for (NodeId i = 0; i < node_count(); ++i)
        if (variables[i].name == name) return i;
    return -1;
}

std::vector<std::string> validate(const BayesNet& net) {
    std::vector<std::string> issues;
    const int n = net.node_count();
    auto flag = [&issues](NodeId v, const std::string& rule) {
        issues.push_back("node " + std::to_string(v) + ": " + rule);
    };

    std::set<std::string> names;
    for (NodeId v = 0; v < n; ++v) {
        const Variable& var = net.variables[v];
        if (!names.insert(var.name).second) flag(v, "duplicate variable name '" + var.name + "'");
        if (var.cardinality < 2) flag(v, "cardinality must be at least 2");
        if (static_cast<int>(var.state_labels.size()) != var.cardinality)
            flag(v, "state label count does not match cardinality");
        std::set<std::string> labels(var.state_labels.begin(), var.state_labels.end());
        if (labels.size() != var.state_labels.size()) flag(v, "duplicate state labels");
    }

    if (net.dag.node_count() != n) {
        issues.push_back("graph node count does not match variable count");
        return issues;
    }
    if (static_cast<int>(net.cpts.size()) != n) {
        issues.push_back("cpt count does not match variable count");
        return issues;
    }

    for (NodeId v = 0; v < n; ++v) {
        const Cpt& cpt = net.cpts[v];
        if (cpt.child != v) {
            flag(v, "cpt child index mismatch");
            continue;
        }
        std::vector<NodeId> declared = cpt.parent_order;
        std::sort(declared.begin(), declared.end());
        if (declared != net.dag.parents(v)) {
            flag(v, "cpt parent set does not match graph parents");
            continue;
        }
        long long rows = 1;
        for (NodeId p : cpt.parent_order) rows *= net.variables[p].cardinality;
        if (static_cast<long long>(cpt.table.size()) != rows) {
            flag(v, "cpt row count " + std::to_string(cpt.table.size()) + " expected " +
                        std::to_string(rows));
            continue;
        }
        for (std::size_t r = 0; r < cpt.table.size(); ++r) {
            const auto& row = cpt.table[r];
            if (static_cast<int>(row.size()) != net.variables[v].cardinality) {
                flag(v, "cpt row " + std::to_string(r) + " has wrong width");
                continue;
            }
            double sum = 0.0;
            bool negative = false;
            for (double p : row) {
                sum += p;
                if (p < 0.0) negative = true;
            }
            if (negative) flag(v, "cpt row " + std::to_string(r) + " has a negative entry");
            if (std::abs(sum - 1.0) > 1e-9)
                flag(v, "cpt row " + std::to_string(r) + " sums to " + std::to_string(sum));
        }
    }
    return issues;
}

namespace {

void fill_dirichlet_cpts(BayesNet& net, double alpha, std::mt19937_64& rng) {
    const int cardinality = net.variables.front().cardinality;
    std::gamma_distribution<double> gamma(alpha, 1.0);
    for (NodeId v = 0; v < net.node_count(); ++v) {
        Cpt& cpt = net.cpts[v];
        long long rows = 1;
        for (NodeId p : cpt.parent_order) rows *= net.variables[p].cardinality;
        cpt.table.assign(rows, std::vector<double>(cardinality, 0.0));
        for (auto& row : cpt.table) {
            double sum = 0.0;
            for (double& cell : row) {
                cell = gamma(rng);
                sum += cell;
            }
            if (sum <= 0.0) {  // numerically degenerate draw; fall back to uniform
                for (double& cell : row) cell = 1.0 / cardinality;
            } else {
                for (double& cell : row) cell /= sum;
            }
        }
    }
}

// Binary noisy-or gates: P(child = 0 | config) = leak * prod over active
// literals of the per-arc inhibition. Random input signs keep marginals away
// from saturation so association survives long ancestor paths.
void fill_noisy_or_cpts(BayesNet& net, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> prior(0.25, 0.75);
    std::uniform_real_distribution<double> leak(0.92, 0.98);
    std::uniform_real_distribution<double> inhibition(0.02, 0.10);
    std::uniform_int_distribution<int> coin(0, 1);
    for (NodeId v = 0; v < net.node_count(); ++v) {
        Cpt& cpt = net.cpts[v];
        const int k = static_cast<int>(cpt.parent_order.size());
        if (k == 0) {
            const double p1 = prior(rng);
            cpt.table = {{1.0 - p1, p1}};
            continue;
        }
        std::vector<bool> negated(k);
        std::vector<double> q(k);
        for (int i = 0; i < k; ++i) {
            negated[i] = coin(rng) == 1;
            q[i] = inhibition(rng);
        }
        const double q_leak = leak(rng);
        const long long rows = 1LL << k;
        cpt.table.assign(rows, std::vector<double>(2, 0.0));
        for (long long r = 0; r < rows; ++r) {
            double p0 = q_leak;
            for (int i = 0; i < k; ++i) {
                const int bit = static_cast<int>((r >> (k - 1 - i)) & 1);
                const bool active = negated[i] ? bit == 0 : bit == 1;
                if (active) p0 *= q[i];
            }
            cpt.table[r] = {p0, 1.0 - p0};
        }
    }
}

}  // namespace

BayesNet random_bn_ex(int n, int arcs, const BnGenOptions& options, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_bn: need at least one node");
    if (options.max_parents < 1)
        throw std::invalid_argument("random_bn: max_parents must be >= 1");
    if (options.cardinality < 2) throw std::invalid_argument("random_bn: cardinality must be >= 2");
    if (options.dirichlet_alpha <= 0.0)
        throw std::invalid_argument("random_bn: dirichlet_alpha must be > 0");
    if (options.cpts == BnGenOptions::Cpts::noisy_or && options.cardinality != 2)
        throw std::invalid_argument("random_bn: noisy-or cpts require binary variables");
    const bool tree = options.structure == BnGenOptions::Structure::tree;
    const long long all_pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (arcs < 0 || arcs > all_pairs)
        throw std::invalid_argument("random_bn: arc count " + std::to_string(arcs) +
                                    " exceeds n*(n-1)/2 = " + std::to_string(all_pairs));
    if (tree && arcs < n - 1)
        throw std::invalid_argument("random_bn: tree structure needs at least n-1 arcs");
    long long capacity = 0;
    for (int pos = 0; pos < n; ++pos) capacity += std::min(pos, options.max_parents);
    if (arcs > capacity)
        throw std::runtime_error("random_bn: arc count " + std::to_string(arcs) +
                                 " unreachable under max_parents=" +
                                 std::to_string(options.max_parents) + " (capacity " +
                                 std::to_string(capacity) + ")");

    auto rng = make_rng(mix_seed({seed, 0xb17e5u}));

    // Random permutation as topological order; order[k] = node at position k.
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    Dag dag(n);
    std::vector<int> parent_count(n, 0);
    int accepted = 0;

    if (tree) {
        for (int j = 1; j < n; ++j) {
            std::uniform_int_distribution<int> pick(0, j - 1);
            dag.add_arc(order[pick(rng)], order[j]);
            ++parent_count[order[j]];
            ++accepted;
        }
    }

    std::vector<std::pair<int, int>> candidates;  // (earlier pos, later pos)
    candidates.reserve(all_pairs);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!dag.has_arc(order[i], order[j])) candidates.emplace_back(i, j);

    while (accepted < arcs && !candidates.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const std::size_t idx = pick(rng);
        const auto [pi, pj] = candidates[idx];
        candidates[idx] = candidates.back();
        candidates.pop_back();
        const NodeId child = order[pj];
        if (parent_count[child] >= options.max_parents) continue;  // reject, child is full
        dag.add_arc(order[pi], child);
        ++parent_count[child];
        ++accepted;
    }
    if (accepted < arcs)
        throw std::runtime_error("random_bn: ran out of candidate arcs under max_parents cap");

    BayesNet net;
    net.dag = std::move(dag);
    net.variables.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        Variable& var = net.variables[v];
        var.name = "X" + std::to_string(v);
        var.cardinality = options.cardinality;
        for (int s = 0; s < options.cardinality; ++s)
            var.state_labels.push_back("s" + std::to_string(s));
    }
    net.cpts.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        net.cpts[v].child = v;
        net.cpts[v].parent_order = net.dag.parents(v);
    }
    if (options.cpts == BnGenOptions::Cpts::noisy_or)
        fill_noisy_or_cpts(net, rng);
    else
        fill_dirichlet_cpts(net, options.dirichlet_alpha, rng);
    return net;
}

BayesNet random_bn(int n, int arcs, int max_parents, int cardinality, double dirichlet_alpha,
                   std::uint64_t seed) {
    BnGenOptions options;
    options.max_parents = max_parents;
    options.cardinality = cardinality;
    options.dirichlet_alpha = dirichlet_alpha;
    return random_bn_ex(n, arcs, options, seed);
}

}  // namespace skeletor
