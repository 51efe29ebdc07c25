#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skeletor/graph.hpp"

namespace skeletor {

struct Variable {
    std::string name;
    int cardinality = 2;
    std::vector<std::string> state_labels;  // size == cardinality
};

// Conditional probability table of one node. `table` is row-major: one row
// per joint parent configuration (first parent in parent_order varies
// slowest), row length equals the child cardinality.
struct Cpt {
    NodeId child = 0;
    std::vector<NodeId> parent_order;
    std::vector<std::vector<double>> table;

    int row_index(const std::vector<int>& parent_states, const std::vector<Variable>& vars) const;
};

struct BayesNet {
    std::vector<Variable> variables;
    Dag dag;
    std::vector<Cpt> cpts;  // one per node, indexed by NodeId

    int node_count() const { return static_cast<int>(variables.size()); }
    // -1 when the name is unknown.
    NodeId index_of(const std::string& name) const;
};

// Diagnostics naming the node and the violated rule; empty iff the net
// satisfies every structural invariant.
std::vector<std::string> validate(const BayesNet& net);

struct BnGenOptions {
    int max_parents = 5;
    int cardinality = 2;
    double dirichlet_alpha = 1.0;

    // uniform: arcs drawn uniformly from all order-respecting pairs.
    // tree: spanning-tree backbone (every non-root picks one random
    // predecessor) plus uniform extras; gives the deep ancestral structure
    // of benchmark networks, where association spans many hops.
    enum class Structure { uniform, tree } structure = Structure::uniform;

    // dirichlet: rows are symmetric Dirichlet(dirichlet_alpha) draws.
    // noisy_or: binary noisy-or gates with random input signs and strong
    // inhibition, so every arc carries a detectable dependency.
    enum class Cpts { dirichlet, noisy_or } cpts = Cpts::dirichlet;
};

// Random ground-truth generator: a uniformly random permutation serves as
// topological order; arcs are drawn without replacement subject to the
// max_parents cap; CPTs follow the selected scheme. Deterministic given
// seed. Throws std::invalid_argument when arcs exceeds n*(n-1)/2 (or falls
// below n-1 for the tree structure) and std::runtime_error when the
// max_parents cap makes the arc budget unreachable.
BayesNet random_bn_ex(int n, int arcs, const BnGenOptions& options, std::uint64_t seed);

// Spec'd baseline: uniform structure, Dirichlet CPT rows.
BayesNet random_bn(int n, int arcs, int max_parents, int cardinality, double dirichlet_alpha,
                   std::uint64_t seed);

}  // namespace skeletor
