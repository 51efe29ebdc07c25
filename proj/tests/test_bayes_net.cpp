#include <doctest.h>

#include <stdexcept>
#include <random>
#include <set>

#include "skeletor/bayes_net.hpp"
#include "skeletor/io.hpp"

using namespace skeletor;

TEST_CASE("random_bn produces the requested shape") {
    const BayesNet asia_shaped = random_bn(8, 8, 5, 2, 1.0, 7);
    CHECK(asia_shaped.node_count() == 8);
    CHECK(asia_shaped.dag.arc_count() == 8);
    CHECK(validate(asia_shaped).empty());

    const BayesNet big = random_bn(100, 130, 5, 2, 1.0, 11);
    CHECK(big.node_count() == 100);
    CHECK(big.dag.arc_count() == 130);
    CHECK(validate(big).empty());

    const BayesNet tiny = random_bn(2, 1, 5, 2, 1.0, 3);
    CHECK(tiny.dag.arc_count() == 1);
    const NodeId child = tiny.dag.parents(0).empty() ? 1 : 0;
    CHECK(tiny.cpts[child].table.size() == 2);
    CHECK(tiny.cpts[child].table[0].size() == 2);
}

TEST_CASE("random_bn arc budget errors name the binding constraint") {
    CHECK_THROWS_AS(random_bn(4, 7, 5, 2, 1.0, 1), std::invalid_argument);  // > n(n-1)/2
    CHECK_THROWS_WITH_AS(random_bn(10, 40, 2, 2, 1.0, 1),
                         doctest::Contains("max_parents"), std::runtime_error);
}

TEST_CASE("random_bn is exact, acyclic and row-normalized over many draws") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 49);
        const long long max_arcs = static_cast<long long>(n) * (n - 1) / 2;
        long long capacity = 0;
        for (int pos = 0; pos < n; ++pos) capacity += std::min(pos, 5);
        const int arcs = static_cast<int>(rng() % (std::min(max_arcs, capacity) + 1));
        const BayesNet net = random_bn(n, arcs, 5, 2, 1.0, rng());
        CHECK(net.dag.arc_count() == arcs);
        std::vector<std::vector<NodeId>> parents;
        for (NodeId v = 0; v < n; ++v) parents.push_back(net.dag.parents(v));
        CHECK(is_acyclic(parents));
        for (const Cpt& cpt : net.cpts)
            for (const auto& row : cpt.table) {
                double sum = 0.0;
                for (double p : row) sum += p;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            }
    }
}

TEST_CASE("random_bn seeds: same seed identical, different seeds distinct") {
    const std::string first = write_bnet(random_bn(12, 16, 5, 2, 1.0, 1234));
    const std::string again = write_bnet(random_bn(12, 16, 5, 2, 1.0, 1234));
    CHECK(first == again);

    std::set<std::string> distinct;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        distinct.insert(write_bnet(random_bn(12, 16, 5, 2, 1.0, seed)));
    CHECK(distinct.size() >= 99);
}

TEST_CASE("validate diagnoses broken nets") {
    BayesNet net = random_bn(3, 2, 5, 2, 1.0, 9);
    CHECK(validate(net).empty());

    BayesNet bad_sum = net;
    bad_sum.cpts[0].table[0][0] = 0.9 * bad_sum.cpts[0].table[0][0];
    auto issues = validate(bad_sum);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("sums to") != std::string::npos);

    BayesNet bad_shape = net;
    bad_shape.cpts[2].table.emplace_back(std::vector<double>{0.5, 0.5});
    issues = validate(bad_shape);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("row count") != std::string::npos);

    BayesNet bad_label = net;
    bad_label.variables[1].state_labels[1] = bad_label.variables[1].state_labels[0];
    issues = validate(bad_label);
    REQUIRE(!issues.empty());
    CHECK(issues[0].find("duplicate state labels") != std::string::npos);
}
