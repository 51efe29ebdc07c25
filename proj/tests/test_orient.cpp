#include <doctest.h>

#include <stdexcept>
#include <functional>
#include <random>

#include "oracles.hpp"
#include "skeletor/orient.hpp"

using namespace skeletor;

namespace {

Pdag undirected_of(const Dag& dag) {
    Pdag p(dag.node_count());
    for (const ArcPair& e : dag.skeleton()) p.add_undirected(e.a, e.b);
    return p;
}

std::vector<bool> descendants_of(const Dag& dag, NodeId v) {
    std::vector<bool> out(dag.node_count(), false);
    std::function<void(NodeId)> walk = [&](NodeId u) {
        for (NodeId c : dag.children(u))
            if (!out[c]) {
                out[c] = true;
                walk(c);
            }
    };
    walk(v);
    return out;
}

// Skeleton + sepsets exactly as a sound oracle run would produce them: for a
// non-adjacent pair, Pa(x) separates when y is not a descendant of x,
// otherwise Pa(y) does.
SkeletonResult oracle_skeleton(const Dag& dag) {
    SkeletonResult skel;
    skel.n = dag.node_count();
    for (const ArcPair& e : dag.skeleton()) skel.arcs.insert(e);
    for (NodeId x = 0; x < skel.n; ++x)
        for (NodeId y = x + 1; y < skel.n; ++y) {
            if (dag.adjacent(x, y)) continue;
            const std::vector<NodeId> sep =
                descendants_of(dag, x)[y] ? dag.parents(y) : dag.parents(x);
            REQUIRE(d_separated(dag, x, y, sep));
            skel.sepsets[ArcPair(x, y)] = sep;
        }
    return skel;
}

}  // namespace

TEST_CASE("cpdag_of on the three-node shapes") {
    const Dag chain = Dag::from_parents({{}, {0}, {1}});
    Pdag chain_cp = cpdag_of(chain);
    CHECK(chain_cp.has_undirected(0, 1));
    CHECK(chain_cp.has_undirected(1, 2));

    const Dag collider = Dag::from_parents({{}, {0, 2}, {}});
    Pdag coll_cp = cpdag_of(collider);
    CHECK(coll_cp.has_directed(0, 1));
    CHECK(coll_cp.has_directed(2, 1));

    // Triangle 0->1->2 plus 0->2: every acyclic orientation of a 3-clique is
    // Markov equivalent (no unshielded triples), so the completion is fully
    // undirected; frozen from the brute-force equivalence-class oracle.
    const Dag triangle = Dag::from_parents({{}, {0}, {0, 1}});
    const Pdag expected = oracles::cpdag_brute(triangle);
    CHECK(expected.has_undirected(0, 1));
    CHECK(expected.has_undirected(1, 2));
    CHECK(expected.has_undirected(0, 2));
    CHECK(cpdag_of(triangle) == expected);
}

TEST_CASE("cpdag_of matches the brute-force oracle on every DAG with n <= 4") {
    for (int n = 2; n <= 4; ++n)
        for (const Dag& dag : oracles::all_dags_on(n)) CHECK(cpdag_of(dag) == oracles::cpdag_brute(dag));
}

TEST_CASE("Markov-equivalent DAGs share a completion") {
    const auto dags = oracles::all_dags_on(4);
    for (std::size_t i = 0; i < dags.size(); i += 7)
        for (std::size_t j = i + 1; j < dags.size(); j += 13)
            if (oracles::markov_equivalent(dags[i], dags[j]))
                CHECK(cpdag_of(dags[i]) == cpdag_of(dags[j]));
}

TEST_CASE("meek rule examples") {
    // R1: 0 -> 1 -- 2 with 0,2 non-adjacent orients 1 -> 2.
    Pdag r1(3);
    r1.add_undirected(0, 1);
    r1.add_undirected(1, 2);
    r1.set_direction(0, 1);
    Pdag r1_closed = meek_closure(r1);
    CHECK(r1_closed.has_directed(1, 2));

    // R2: 0 -> 1 -> 2 with 0 -- 2 orients 0 -> 2.
    Pdag r2(3);
    r2.add_undirected(0, 1);
    r2.add_undirected(1, 2);
    r2.add_undirected(0, 2);
    r2.set_direction(0, 1);
    r2.set_direction(1, 2);
    Pdag r2_closed = meek_closure(r2);
    CHECK(r2_closed.has_directed(0, 2));

    // R3: 0 -- 3, 0 -- 1 -> 3, 0 -- 2 -> 3, 1,2 non-adjacent orients 0 -> 3.
    Pdag r3(4);
    r3.add_undirected(0, 1);
    r3.add_undirected(0, 2);
    r3.add_undirected(0, 3);
    r3.add_undirected(1, 3);
    r3.add_undirected(2, 3);
    r3.set_direction(1, 3);
    r3.set_direction(2, 3);
    Pdag r3_closed = meek_closure(r3);
    CHECK(r3_closed.has_directed(0, 3));

    // R4: 0 -- 3, 0 -- 1, 1 -> 2, 2 -> 3, 1,3 non-adjacent orients 0 -> 3.
    Pdag r4(4);
    r4.add_undirected(0, 1);
    r4.add_undirected(0, 2);
    r4.add_undirected(0, 3);
    r4.add_undirected(1, 2);
    r4.add_undirected(2, 3);
    r4.set_direction(1, 2);
    r4.set_direction(2, 3);
    Pdag r4_closed = meek_closure(r4);
    CHECK(r4_closed.has_directed(0, 3));
}

TEST_CASE("meek_closure is idempotent and preserves orientations") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const Dag dag = oracles::random_dag(6, 0.4, rng);
        const SkeletonResult skel = oracle_skeleton(dag);
        const Pdag with_colliders = orient_colliders(skel).pdag;
        const Pdag once = meek_closure(with_colliders);
        CHECK(meek_closure(once) == once);
        for (const auto& [pair, mark] : with_colliders.edges()) {
            if (mark == EdgeMark::undirected) continue;
            CHECK(once.edges().at(pair) == mark);  // colliders never flipped
        }
    }
}

TEST_CASE("orient_colliders on the canonical skeletons") {
    SkeletonResult vee;
    vee.n = 3;
    vee.arcs = {ArcPair(0, 2), ArcPair(1, 2)};
    vee.sepsets[ArcPair(0, 1)] = {};
    Pdag v_out = orient_colliders(vee).pdag;
    CHECK(v_out.has_directed(0, 2));
    CHECK(v_out.has_directed(1, 2));

    SkeletonResult chain;
    chain.n = 3;
    chain.arcs = {ArcPair(0, 1), ArcPair(1, 2)};
    chain.sepsets[ArcPair(0, 2)] = {1};
    Pdag c_out = orient_colliders(chain).pdag;
    CHECK(c_out.has_undirected(0, 1));
    CHECK(c_out.has_undirected(1, 2));

    SkeletonResult triangle;
    triangle.n = 3;
    triangle.arcs = {ArcPair(0, 1), ArcPair(1, 2), ArcPair(0, 2)};
    Pdag t_out = orient_colliders(triangle).pdag;  // no unshielded triple
    CHECK(t_out.has_undirected(0, 1));
    CHECK(t_out.has_undirected(1, 2));
    CHECK(t_out.has_undirected(0, 2));
}

TEST_CASE("orient_colliders reports a missing sepset") {
    SkeletonResult broken;
    broken.n = 3;
    broken.arcs = {ArcPair(0, 2), ArcPair(1, 2)};
    CHECK_THROWS_AS(orient_colliders(broken), std::logic_error);
}

TEST_CASE("conflicting collider demands fall back to undirected with a warning") {
    // Skeleton 0-1, 1-2, 2-3, 1 and 2 share an edge; sepsets claim both
    // 0->1<-2 and 1->2<-3, demanding opposite directions on 1-2.
    SkeletonResult skel;
    skel.n = 4;
    skel.arcs = {ArcPair(0, 1), ArcPair(1, 2), ArcPair(2, 3)};
    skel.sepsets[ArcPair(0, 2)] = {};
    skel.sepsets[ArcPair(1, 3)] = {};
    skel.sepsets[ArcPair(0, 3)] = {};
    OrientResult out = orient_colliders(skel);
    CHECK(out.pdag.has_undirected(1, 2));
    CHECK(out.pdag.has_directed(0, 1));
    CHECK(out.pdag.has_directed(3, 2));
    CHECK(out.warnings.size() == 1);
}

TEST_CASE("oracle pipeline equals cpdag_of on random DAGs") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> size(3, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Dag dag = oracles::random_dag(size(rng), 0.35, rng);
        const SkeletonResult skel = oracle_skeleton(dag);
        OrientResult oriented = orient_colliders(skel);
        REQUIRE(oriented.warnings.empty());
        CHECK(meek_closure(oriented.pdag) == cpdag_of(dag));
    }
}

TEST_CASE("consistent_extension stays in the equivalence class") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 80; ++trial) {
        const Dag dag = oracles::random_dag(7, 0.35, rng);
        const Pdag cpdag = cpdag_of(dag);
        auto ext = consistent_extension(cpdag);
        REQUIRE(ext.has_value());
        CHECK(oracles::markov_equivalent(*ext, dag));
        CHECK(cpdag_of(*ext) == cpdag);
    }
}

TEST_CASE("any_dag_extension falls back when no consistent extension exists") {
    // Every acyclic orientation of an undirected 4-cycle creates an
    // unshielded collider at its sink, so Dor-Tarsi must fail and the greedy
    // fallback has to produce some acyclic orientation.
    Pdag square(4);
    square.add_undirected(0, 1);
    square.add_undirected(1, 2);
    square.add_undirected(2, 3);
    square.add_undirected(0, 3);
    CHECK_FALSE(consistent_extension(square).has_value());
    const Dag ext = any_dag_extension(square);
    CHECK(ext.arc_count() == 4);
    CHECK(is_acyclic({ext.parents(0), ext.parents(1), ext.parents(2), ext.parents(3)}));
}

TEST_CASE("undirected_of keeps the skeleton") {
    const Dag dag = Dag::from_parents({{}, {0}, {1}});
    CHECK(undirected_of(dag).edge_count() == 2);
}
