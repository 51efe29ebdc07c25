#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "skeletor/citest.hpp"
#include "skeletor/graph.hpp"

namespace skeletor {

enum class Algo {
    pc,    // unsorted baseline: conditioning sets in lexicographic order
    fsbn,  // RDSA-sorted conditioning sets, unit increments
    ssbn,  // RDSA-sorted conditioning sets, 1/|S| increments
};

// Per-target scores quantifying how often a node showed up in discovered
// separators. Reset at the start of every local search.
struct RdsaTable {
    NodeId target = 0;
    std::vector<double> scores;  // indexed by NodeId

    explicit RdsaTable(NodeId t, int n) : target(t), scores(n, 0.0) {}
};

// fsbn: each separator member gains 1; ssbn: each gains 1/|separator|.
// An empty separator leaves the table unchanged.
void update_rdsa(RdsaTable& rdsa, const std::vector<NodeId>& separator, Algo mode);

// All size-dss subsets of candidates minus {exclude}, ordered by descending
// set score (sum of member scores), ties in lexicographic order of the
// sorted member lists. Returns an empty list when dss exceeds the pool size.
std::vector<std::vector<NodeId>> gen_sort_ds(const std::vector<NodeId>& candidates,
                                             NodeId exclude, int dss, const RdsaTable& rdsa);

// Plain lexicographic subset enumeration (the pc baseline order).
std::vector<std::vector<NodeId>> enumerate_subsets(const std::vector<NodeId>& pool, int dss);

struct ArcContainers {
    std::set<ArcPair> a_can;
    std::set<ArcPair> a_del;
    std::set<ArcPair> a_ind;
};

// Separator discovered for a removed pair; endpoints excluded, members sorted.
using SepSetMap = std::map<ArcPair, std::vector<NodeId>>;

struct SearchConfig {
    int max_dss = 8;  // cap on conditioning-set size; hits are reported
    std::optional<std::uint64_t> pc_shuffle_seed;  // randomize pc subset order
};

struct LspcOutcome {
    std::vector<ArcPair> kept;  // surviving candidate pairs
    RdsaTable rdsa;             // final table, for diagnostics and tests
    long long tests_run = 0;    // executed CI tests during this call
    bool capped = false;        // stopped by max_dss with candidates left
};

// Local search of parents/children of `target`: grows the conditioning-set
// size from 0, tests each candidate neighbor against conditioning sets drawn
// from the current candidate pool (sorted by set RDSA in fsbn/ssbn mode), and
// on an independence verdict moves the pair into a_del, records the
// separator, updates the RDSA table and moves on to the next neighbor.
LspcOutcome lspc(NodeId target, IndependenceTest& ci, ArcContainers& containers,
                 SepSetMap& sepsets, Algo mode, const SearchConfig& config);

struct SkeletonResult {
    int n = 0;
    std::set<ArcPair> arcs;
    SepSetMap sepsets;
    CostLedger ledger;
    std::map<NodeId, long long> per_node_stats;  // executed tests per lspc target
    std::vector<NodeId> capped_targets;          // targets stopped by max_dss
    long long skipped_unreliable = 0;
};

// Full skeleton search: one lspc pass per node in ascending index; a_ind
// accumulates surviving pairs minus everything deleted so far, so a deletion
// by a later target wins over an earlier keep.
SkeletonResult learn_skeleton_with(IndependenceTest& ci, Algo algo, const SearchConfig& config);

struct LearnOptions {
    double alpha = 0.05;
    double reliability_min = 5.0;
    ReliabilityPolicy policy = ReliabilityPolicy::conservative;
    SearchConfig search;
};

// Convenience entry point: chi-squared testing over `data`.
SkeletonResult learn_skeleton(const Dataset& data, Algo algo, const LearnOptions& options);

}  // namespace skeletor
