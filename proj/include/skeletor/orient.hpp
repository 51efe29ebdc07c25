#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skeletor/search.hpp"

namespace skeletor {

struct OrientResult {
    Pdag pdag;
    // Conflicting collider demands (or a refused cycle-inducing orientation)
    // leave the edge undirected; each event is reported here.
    std::vector<std::string> warnings;
};

// V-structure detection from separating sets: for every unshielded triple
// x - w - y, orients x -> w <- y iff w is not in sepset(x, y).
// Throws std::logic_error when a considered pair has no sepset entry.
OrientResult orient_colliders(const SkeletonResult& skeleton);

// Fixed point of Meek rules R1-R4. Never removes an orientation, never
// creates a directed cycle; idempotent.
Pdag meek_closure(Pdag pdag);

// CPDAG completion of a DAG: skeleton plus v-structures, closed under the
// Meek rules. Compelled edges come out directed, reversible ones undirected.
Pdag cpdag_of(const Dag& dag);

// Consistent extension (same skeleton, same directed edges, same
// v-structures); nullopt when none exists.
std::optional<Dag> consistent_extension(const Pdag& pdag);

// Consistent extension when one exists, otherwise a deterministic acyclic
// orientation of the remaining undirected edges.
Dag any_dag_extension(const Pdag& pdag);

}  // namespace skeletor
