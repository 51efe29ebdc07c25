#include "skeletor/search.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

#include "skeletor/rng.hpp"

namespace skeletor {

void update_rdsa(RdsaTable& rdsa, const std::vector<NodeId>& separator, Algo mode) {
    if (separator.empty() || mode == Algo::pc) return;
    const double increment =
        mode == Algo::fsbn ? 1.0 : 1.0 / static_cast<double>(separator.size());
    for (NodeId v : separator) rdsa.scores.at(v) += increment;
}

std::vector<std::vector<NodeId>> enumerate_subsets(const std::vector<NodeId>& pool, int dss) {
    std::vector<std::vector<NodeId>> out;
    const int n = static_cast<int>(pool.size());
    if (dss < 0 || dss > n) return out;
    if (dss == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> idx(dss);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<NodeId> subset(dss);
        for (int i = 0; i < dss; ++i) subset[i] = pool[idx[i]];
        out.push_back(std::move(subset));
        int i = dss - 1;
        while (i >= 0 && idx[i] == n - dss + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < dss; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<std::vector<NodeId>> gen_sort_ds(const std::vector<NodeId>& candidates,
                                             NodeId exclude, int dss, const RdsaTable& rdsa) {
    if (dss < 1) throw std::invalid_argument("gen_sort_ds: dss must be >= 1");
    std::vector<NodeId> pool;
    pool.reserve(candidates.size());
    for (NodeId v : candidates)
        if (v != exclude) pool.push_back(v);
    std::sort(pool.begin(), pool.end());

    std::vector<std::vector<NodeId>> subsets = enumerate_subsets(pool, dss);
    std::vector<double> scores(subsets.size(), 0.0);
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        double s = 0.0;
        for (NodeId v : subsets[i]) s += rdsa.scores.at(v);
        scores[i] = s;
    }
    // Enumeration is lexicographic, so a stable sort on descending score
    // leaves ties in lexicographic order.
    std::vector<std::size_t> order(subsets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<std::vector<NodeId>> sorted;
    sorted.reserve(subsets.size());
    for (std::size_t i : order) sorted.push_back(std::move(subsets[i]));
    return sorted;
}

namespace {

std::vector<std::vector<NodeId>> conditioning_sets(const std::vector<NodeId>& candidates,
                                                   NodeId target, NodeId exclude, int dss,
                                                   const RdsaTable& rdsa, Algo mode,
                                                   const SearchConfig& config) {
    if (mode != Algo::pc) return gen_sort_ds(candidates, exclude, dss, rdsa);
    std::vector<NodeId> pool;
    pool.reserve(candidates.size());
    for (NodeId v : candidates)
        if (v != exclude) pool.push_back(v);
    std::vector<std::vector<NodeId>> subsets = enumerate_subsets(pool, dss);
    if (config.pc_shuffle_seed) {
        auto rng = make_rng(mix_seed({*config.pc_shuffle_seed, static_cast<std::uint64_t>(target),
                                      static_cast<std::uint64_t>(exclude),
                                      static_cast<std::uint64_t>(dss)}));
        std::shuffle(subsets.begin(), subsets.end(), rng);
    }
    return subsets;
}

}  // namespace

LspcOutcome lspc(NodeId target, IndependenceTest& ci, ArcContainers& containers,
                 SepSetMap& sepsets, Algo mode, const SearchConfig& config) {
    const int n = ci.variable_count();
    if (target < 0 || target >= n) throw std::invalid_argument("lspc: target out of range");

    // Candidate neighborhood from the pairs still in a_can.
    std::vector<NodeId> can_pc;
    for (const ArcPair& pair : containers.a_can) {
        if (!pair.contains(target)) throw std::invalid_argument("lspc: a_can pair without target");
        if (containers.a_del.count(pair)) throw std::invalid_argument("lspc: a_can overlaps a_del");
        can_pc.push_back(pair.other(target));
    }
    std::sort(can_pc.begin(), can_pc.end());

    LspcOutcome out{.kept = {}, .rdsa = RdsaTable(target, n), .tests_run = 0, .capped = false};
    assert(std::all_of(out.rdsa.scores.begin(), out.rdsa.scores.end(),
                       [](double s) { return s == 0.0; }));
    const long long tests_before = ci.ledger().total_tests;

    int dss = 0;
    while (static_cast<int>(can_pc.size()) > dss) {
        if (dss > config.max_dss) {
            out.capped = true;
            break;
        }
        if (!ci.order_feasible(target, can_pc, dss)) break;  // no executable test this deep
        const std::vector<NodeId> round = can_pc;  // snapshot; removals shrink the live pool
        for (NodeId x : round) {
            if (!std::binary_search(can_pc.begin(), can_pc.end(), x)) continue;
            std::vector<std::vector<NodeId>> sets;
            if (dss > 0) {
                sets = conditioning_sets(can_pc, target, x, dss, out.rdsa, mode, config);
            } else {
                sets.emplace_back();
            }
            for (const auto& s : sets) {
                const CiResult verdict = ci.test(target, x, s);
                if (!verdict.independent) continue;
                can_pc.erase(std::lower_bound(can_pc.begin(), can_pc.end(), x));
                const ArcPair pair(target, x);
                containers.a_can.erase(pair);
                containers.a_del.insert(pair);
                auto [it, fresh] = sepsets.emplace(pair, s);
                (void)it;
                if (!fresh) throw std::logic_error("lspc: pair separated twice");
                update_rdsa(out.rdsa, s, mode);
                break;  // next neighbor
            }
        }
        ++dss;
    }

    out.kept.assign(containers.a_can.begin(), containers.a_can.end());
    out.tests_run = ci.ledger().total_tests - tests_before;
    return out;
}

SkeletonResult learn_skeleton_with(IndependenceTest& ci, Algo algo, const SearchConfig& config) {
    const int n = ci.variable_count();
    if (n < 2) throw std::invalid_argument("learn_skeleton: need at least two variables");

    SkeletonResult result;
    result.n = n;
    ArcContainers containers;

    for (NodeId target = 0; target < n; ++target) {
        containers.a_can.clear();
        for (NodeId other = 0; other < n; ++other) {
            if (other == target) continue;
            const ArcPair pair(target, other);
            if (!containers.a_del.count(pair)) containers.a_can.insert(pair);
        }
        LspcOutcome outcome = lspc(target, ci, containers, result.sepsets, algo, config);
        // Union in the survivors, then drop anything deleted so far: a later
        // deletion must win over an earlier keep.
        for (const ArcPair& pair : outcome.kept) containers.a_ind.insert(pair);
        for (auto it = containers.a_ind.begin(); it != containers.a_ind.end();) {
            if (containers.a_del.count(*it))
                it = containers.a_ind.erase(it);
            else
                ++it;
        }
        result.per_node_stats[target] = outcome.tests_run;
        if (outcome.capped) result.capped_targets.push_back(target);
    }

    result.arcs = containers.a_ind;
    result.ledger = ci.ledger();
    return result;
}

SkeletonResult learn_skeleton(const Dataset& data, Algo algo, const LearnOptions& options) {
    CiConfig ci_config{options.alpha, options.reliability_min, options.policy};
    ChiSquaredCiTest ci(data, ci_config);
    SkeletonResult result = learn_skeleton_with(ci, algo, options.search);
    result.skipped_unreliable = ci.skipped_unreliable();
    return result;
}

}  // namespace skeletor
