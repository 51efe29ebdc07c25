#include "skeletor/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>

namespace skeletor {

namespace {

void check_node(int n, NodeId v, const char* what) {
    if (v < 0 || v >= n)
        throw std::invalid_argument(std::string(what) + ": node index " + std::to_string(v) +
                                    " out of range [0," + std::to_string(n) + ")");
}

}  // namespace

Dag Dag::from_parents(std::vector<std::vector<NodeId>> parents) {
    const int n = static_cast<int>(parents.size());
    Dag dag(n);
    for (NodeId v = 0; v < n; ++v) {
        std::vector<NodeId> ps = parents[v];
        std::sort(ps.begin(), ps.end());
        if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
            throw std::invalid_argument("Dag: duplicate parent of node " + std::to_string(v));
        for (NodeId p : ps) dag.add_arc(p, v);
    }
    if (!is_acyclic(dag.parents_)) throw std::invalid_argument("Dag: graph is cyclic");
    return dag;
}

int Dag::arc_count() const {
    int total = 0;
    for (const auto& ps : parents_) total += static_cast<int>(ps.size());
    return total;
}

void Dag::add_arc(NodeId from, NodeId to) {
    const int n = node_count();
    check_node(n, from, "add_arc");
    check_node(n, to, "add_arc");
    if (from == to) throw std::invalid_argument("add_arc: self-arc on node " + std::to_string(from));
    auto& ps = parents_[to];
    auto it = std::lower_bound(ps.begin(), ps.end(), from);
    if (it != ps.end() && *it == from)
        throw std::invalid_argument("add_arc: duplicate arc " + std::to_string(from) + "->" +
                                    std::to_string(to));
    ps.insert(it, from);
    auto& cs = children_[from];
    cs.insert(std::lower_bound(cs.begin(), cs.end(), to), to);
}

bool Dag::has_arc(NodeId from, NodeId to) const {
    check_node(node_count(), from, "has_arc");
    check_node(node_count(), to, "has_arc");
    const auto& ps = parents_[to];
    return std::binary_search(ps.begin(), ps.end(), from);
}

std::vector<ArcPair> Dag::skeleton() const {
    std::vector<ArcPair> out;
    for (NodeId v = 0; v < node_count(); ++v)
        for (NodeId p : parents_[v]) out.emplace_back(p, v);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_acyclic(const std::vector<std::vector<NodeId>>& parents) {
    const int n = static_cast<int>(parents.size());
    std::vector<int> pending(n, 0);  // unprocessed parents per node
    std::vector<std::vector<NodeId>> children(n);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId p : parents[v]) {
            check_node(n, p, "is_acyclic");
            children[p].push_back(v);
            ++pending[v];
        }
    }
    std::deque<NodeId> ready;
    for (NodeId v = 0; v < n; ++v)
        if (pending[v] == 0) ready.push_back(v);
    int emitted = 0;
    while (!ready.empty()) {
        NodeId v = ready.front();
        ready.pop_front();
        ++emitted;
        for (NodeId c : children[v])
            if (--pending[c] == 0) ready.push_back(c);
    }
    return emitted == n;
}

std::vector<NodeId> topological_order(const Dag& dag) {
    const int n = dag.node_count();
    std::vector<int> pending(n, 0);
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < n; ++v) {
        pending[v] = static_cast<int>(dag.parents(v).size());
        if (pending[v] == 0) ready.push(v);
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (NodeId c : dag.children(v))
            if (--pending[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("topological_order: graph is cyclic");
    return order;
}

std::vector<bool> ancestral_set(const Dag& dag, const std::vector<NodeId>& seeds) {
    const int n = dag.node_count();
    std::vector<bool> in(n, false);
    std::deque<NodeId> frontier;
    for (NodeId s : seeds) {
        check_node(n, s, "ancestral_set");
        if (!in[s]) {
            in[s] = true;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop_front();
        for (NodeId p : dag.parents(v))
            if (!in[p]) {
                in[p] = true;
                frontier.push_back(p);
            }
    }
    return in;
}

bool d_separated(const Dag& dag, NodeId x, NodeId y, const std::vector<NodeId>& z) {
    const int n = dag.node_count();
    check_node(n, x, "d_separated");
    check_node(n, y, "d_separated");
    if (x == y) throw std::invalid_argument("d_separated: x == y");
    std::vector<bool> in_z(n, false);
    for (NodeId v : z) {
        check_node(n, v, "d_separated");
        in_z[v] = true;
    }
    if (in_z[x] || in_z[y]) throw std::invalid_argument("d_separated: endpoint inside conditioning set");

    std::vector<NodeId> seeds = z;
    seeds.push_back(x);
    seeds.push_back(y);
    const std::vector<bool> anc = ancestral_set(dag, seeds);

    // Moral graph of the ancestral subgraph: node-parent links plus
    // marriages between co-parents. Parents of an ancestral node are
    // themselves ancestral, so all endpoints stay inside `anc`.
    std::vector<std::vector<NodeId>> moral(n);
    auto link = [&moral](NodeId a, NodeId b) {
        moral[a].push_back(b);
        moral[b].push_back(a);
    };
    for (NodeId v = 0; v < n; ++v) {
        if (!anc[v]) continue;
        const auto& ps = dag.parents(v);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            link(v, ps[i]);
            for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
        }
    }

    std::vector<bool> visited(n, false);
    std::deque<NodeId> frontier{x};
    visited[x] = true;
    while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop_front();
        for (NodeId u : moral[v]) {
            if (visited[u] || in_z[u]) continue;
            if (u == y) return false;
            visited[u] = true;
            frontier.push_back(u);
        }
    }
    return true;
}

void Pdag::add_undirected(NodeId a, NodeId b) {
    check_node(n_, a, "add_undirected");
    check_node(n_, b, "add_undirected");
    if (a == b) throw std::invalid_argument("Pdag: self-loop on node " + std::to_string(a));
    ArcPair key(a, b);
    if (edges_.count(key)) throw std::invalid_argument("Pdag: duplicate edge");
    edges_.emplace(key, EdgeMark::undirected);
}

bool Pdag::set_direction(NodeId from, NodeId to) {
    ArcPair key(from, to);
    auto it = edges_.find(key);
    if (it == edges_.end()) throw std::logic_error("Pdag::set_direction: edge absent");
    const EdgeMark want = (from == key.a) ? EdgeMark::forward : EdgeMark::backward;
    if (it->second == want) return true;
    if (it->second != EdgeMark::undirected)
        throw std::logic_error("Pdag::set_direction: edge already oriented the other way");
    if (has_directed_path(to, from)) return false;  // would close a directed cycle
    it->second = want;
    return true;
}

void Pdag::make_undirected(NodeId a, NodeId b) {
    auto it = edges_.find(ArcPair(a, b));
    if (it == edges_.end()) throw std::logic_error("Pdag::make_undirected: edge absent");
    it->second = EdgeMark::undirected;
}

bool Pdag::adjacent(NodeId a, NodeId b) const { return edges_.count(ArcPair(a, b)) != 0; }

bool Pdag::has_directed(NodeId from, NodeId to) const {
    auto it = edges_.find(ArcPair(from, to));
    if (it == edges_.end()) return false;
    const ArcPair& key = it->first;
    return it->second == ((from == key.a) ? EdgeMark::forward : EdgeMark::backward);
}

bool Pdag::has_undirected(NodeId a, NodeId b) const {
    auto it = edges_.find(ArcPair(a, b));
    return it != edges_.end() && it->second == EdgeMark::undirected;
}

std::vector<NodeId> Pdag::adjacent_nodes(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [pair, mark] : edges_) {
        (void)mark;
        if (pair.contains(v)) out.push_back(pair.other(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Pdag::parent_nodes(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [pair, mark] : edges_) {
        if (!pair.contains(v) || mark == EdgeMark::undirected) continue;
        NodeId u = pair.other(v);
        if (has_directed(u, v)) out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Pdag::child_nodes(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [pair, mark] : edges_) {
        if (!pair.contains(v) || mark == EdgeMark::undirected) continue;
        NodeId u = pair.other(v);
        if (has_directed(v, u)) out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Pdag::neighbor_nodes(NodeId v) const {
    std::vector<NodeId> out;
    for (const auto& [pair, mark] : edges_)
        if (pair.contains(v) && mark == EdgeMark::undirected) out.push_back(pair.other(v));
    std::sort(out.begin(), out.end());
    return out;
}

bool Pdag::has_directed_path(NodeId from, NodeId to) const {
    if (from == to) return true;
    std::vector<bool> visited(n_, false);
    std::deque<NodeId> frontier{from};
    visited[from] = true;
    while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop_front();
        for (NodeId c : child_nodes(v)) {
            if (c == to) return true;
            if (!visited[c]) {
                visited[c] = true;
                frontier.push_back(c);
            }
        }
    }
    return false;
}

}  // namespace skeletor
