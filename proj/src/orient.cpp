#include "skeletor/orient.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace skeletor {

namespace {

std::string node_str(NodeId v) { return std::to_string(v); }

// Applies a compelled orientation; falls back to undirected with a warning
// when the directed part would become cyclic.
bool orient_or_warn(Pdag& pdag, NodeId from, NodeId to, std::vector<std::string>& warnings) {
    if (pdag.set_direction(from, to)) return true;
    warnings.push_back("orientation " + node_str(from) + "->" + node_str(to) +
                       " refused: would close a directed cycle");
    return false;
}

}  // namespace

OrientResult orient_colliders(const SkeletonResult& skeleton) {
    OrientResult out;
    out.pdag = Pdag(skeleton.n);
    for (const ArcPair& arc : skeleton.arcs) out.pdag.add_undirected(arc.a, arc.b);

    // Collect demanded arrow heads per edge before touching the graph so the
    // outcome does not depend on triple enumeration order.
    std::map<ArcPair, std::set<NodeId>> heads;  // edge -> demanded head nodes
    for (NodeId w = 0; w < skeleton.n; ++w) {
        std::vector<NodeId> adj = out.pdag.adjacent_nodes(w);
        for (std::size_t i = 0; i < adj.size(); ++i) {
            for (std::size_t j = i + 1; j < adj.size(); ++j) {
                const NodeId x = adj[i];
                const NodeId y = adj[j];
                if (out.pdag.adjacent(x, y)) continue;  // shielded
                auto it = skeleton.sepsets.find(ArcPair(x, y));
                if (it == skeleton.sepsets.end())
                    throw std::logic_error("orient_colliders: no sepset for pair " + node_str(x) +
                                           "-" + node_str(y));
                const auto& sep = it->second;
                if (std::find(sep.begin(), sep.end(), w) == sep.end()) {
                    heads[ArcPair(x, w)].insert(w);
                    heads[ArcPair(y, w)].insert(w);
                }
            }
        }
    }

    for (const auto& [edge, demanded] : heads) {
        if (demanded.size() == 2) {
            out.warnings.push_back("conflicting collider orientations on edge " +
                                   node_str(edge.a) + "-" + node_str(edge.b) +
                                   "; left undirected");
            continue;
        }
        const NodeId head = *demanded.begin();
        orient_or_warn(out.pdag, edge.other(head), head, out.warnings);
    }
    return out;
}

namespace {

// Meek R1: a -> b, b -- c, a and c non-adjacent  =>  b -> c.
bool rule1(Pdag& g, NodeId b, NodeId c, std::vector<std::string>& warnings) {
    for (NodeId a : g.parent_nodes(b))
        if (a != c && !g.adjacent(a, c)) return orient_or_warn(g, b, c, warnings);
    return false;
}

// Meek R2: a -> b -> c with a -- c  =>  a -> c.
bool rule2(Pdag& g, NodeId a, NodeId c, std::vector<std::string>& warnings) {
    for (NodeId b : g.child_nodes(a))
        if (g.has_directed(b, c)) return orient_or_warn(g, a, c, warnings);
    return false;
}

// Meek R3: a -- b with two chains a -- c -> b and a -- d -> b, c and d
// non-adjacent  =>  a -> b.
bool rule3(Pdag& g, NodeId a, NodeId b, std::vector<std::string>& warnings) {
    std::vector<NodeId> mids;
    for (NodeId c : g.neighbor_nodes(a))
        if (g.has_directed(c, b)) mids.push_back(c);
    for (std::size_t i = 0; i < mids.size(); ++i)
        for (std::size_t j = i + 1; j < mids.size(); ++j)
            if (!g.adjacent(mids[i], mids[j])) return orient_or_warn(g, a, b, warnings);
    return false;
}

// Meek R4: a -- b with a chain a -- c -> d -> b and c, b non-adjacent
// =>  a -> b.
bool rule4(Pdag& g, NodeId a, NodeId b, std::vector<std::string>& warnings) {
    for (NodeId c : g.neighbor_nodes(a)) {
        if (c == b || g.adjacent(c, b)) continue;
        for (NodeId d : g.child_nodes(c))
            if (g.has_directed(d, b)) return orient_or_warn(g, a, b, warnings);
    }
    return false;
}

bool apply_rules(Pdag& g, NodeId a, NodeId b, std::vector<std::string>& warnings) {
    return rule1(g, a, b, warnings) || rule2(g, a, b, warnings) ||
           rule3(g, a, b, warnings) || rule4(g, a, b, warnings);
}

Pdag meek_closure_impl(Pdag pdag, std::vector<std::string>& warnings) {
    bool changed = true;
    while (changed) {
        changed = false;
        // Snapshot: rules only ever orient currently-undirected edges.
        std::vector<ArcPair> undirected;
        for (const auto& [pair, mark] : pdag.edges())
            if (mark == EdgeMark::undirected) undirected.push_back(pair);
        for (const ArcPair& e : undirected) {
            if (!pdag.has_undirected(e.a, e.b)) continue;
            if (apply_rules(pdag, e.a, e.b, warnings)) {
                changed = true;
            } else if (apply_rules(pdag, e.b, e.a, warnings)) {
                changed = true;
            }
        }
    }
    return pdag;
}

}  // namespace

Pdag meek_closure(Pdag pdag) {
    std::vector<std::string> warnings;  // cycle refusals just leave the edge undirected
    return meek_closure_impl(std::move(pdag), warnings);
}

Pdag cpdag_of(const Dag& dag) {
    const int n = dag.node_count();
    Pdag pdag(n);
    for (const ArcPair& arc : dag.skeleton()) pdag.add_undirected(arc.a, arc.b);
    for (NodeId w = 0; w < n; ++w) {
        const auto& ps = dag.parents(w);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                if (dag.adjacent(ps[i], ps[j])) continue;
                pdag.set_direction(ps[i], w);
                pdag.set_direction(ps[j], w);
            }
        }
    }
    return meek_closure(std::move(pdag));
}

std::optional<Dag> consistent_extension(const Pdag& pdag) {
    const int n = pdag.node_count();
    Pdag work = pdag;
    std::vector<bool> removed(n, false);
    Dag dag(n);
    for (const auto& [pair, mark] : pdag.edges()) {
        if (mark == EdgeMark::forward) dag.add_arc(pair.a, pair.b);
        if (mark == EdgeMark::backward) dag.add_arc(pair.b, pair.a);
    }

    auto live_edges = [&]() {
        int count = 0;
        for (const auto& [pair, mark] : work.edges()) {
            (void)mark;
            if (!removed[pair.a] && !removed[pair.b]) ++count;
        }
        return count;
    };

    int remaining = live_edges();
    while (remaining > 0) {
        NodeId sink = -1;
        for (NodeId v = 0; v < n && sink < 0; ++v) {
            if (removed[v]) continue;
            bool has_out = false;
            std::vector<NodeId> adj;
            std::vector<NodeId> und;
            for (NodeId u : work.adjacent_nodes(v)) {
                if (removed[u]) continue;
                adj.push_back(u);
                if (work.has_directed(v, u)) has_out = true;
                if (work.has_undirected(v, u)) und.push_back(u);
            }
            if (has_out || adj.empty()) continue;
            // Every undirected neighbor must be adjacent to all other
            // neighbors of v.
            bool ok = true;
            for (NodeId u : und) {
                for (NodeId w : adj)
                    if (w != u && !work.adjacent(u, w)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (ok) sink = v;
        }
        if (sink < 0) return std::nullopt;
        for (NodeId u : work.neighbor_nodes(sink))
            if (!removed[u]) dag.add_arc(u, sink);
        removed[sink] = true;
        remaining = live_edges();
    }
    return dag;
}

Dag any_dag_extension(const Pdag& pdag) {
    if (auto ext = consistent_extension(pdag)) return *ext;
    // No consistent extension (possible after conflict resolution on noisy
    // data): orient the remaining undirected edges greedily without closing
    // a directed cycle.
    Pdag work = pdag;
    for (const auto& [pair, mark] : pdag.edges()) {
        if (mark != EdgeMark::undirected) continue;
        if (!work.has_undirected(pair.a, pair.b)) continue;
        if (!work.set_direction(pair.a, pair.b)) work.set_direction(pair.b, pair.a);
    }
    Dag dag(pdag.node_count());
    for (const auto& [pair, mark] : work.edges()) {
        if (mark == EdgeMark::forward) dag.add_arc(pair.a, pair.b);
        if (mark == EdgeMark::backward) dag.add_arc(pair.b, pair.a);
    }
    return dag;
}

}  // namespace skeletor
