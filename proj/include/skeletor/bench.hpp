#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "skeletor/bayes_net.hpp"
#include "skeletor/citest.hpp"
#include "skeletor/search.hpp"

namespace skeletor {

// Either a fixture path (anything containing '.' or '/') or a generated
// shape written "<nodes>_<arcs>", e.g. "100_130".
struct NetSpec {
    std::string label;
    std::string fixture_path;  // empty for generated networks
    int nodes = 0;
    int arcs = 0;

    bool generated() const { return fixture_path.empty(); }
};

struct BenchConfig {
    std::vector<NetSpec> nets;
    std::vector<long long> rows_list;
    int folds = 10;
    std::vector<Algo> algos;
    double alpha = 0.05;
    double ess = 1.0;
    std::uint64_t seed = 1;
    BnGenOptions generator;
    ReliabilityPolicy policy = ReliabilityPolicy::conservative;
    int max_dss = 8;
    int threads = 0;  // 0 = auto; CAUSAL_SKELETOR_THREADS caps the value
};

NetSpec parse_net_spec(const std::string& text);
Algo parse_algo(const std::string& text);
std::string algo_name(Algo algo);

// Minimal keyed text config: `key = value` lines, '#' comments; values are
// integers, floats, quoted or bare strings, or [comma, separated, lists].
BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::string& path);

// Asia fixture + a 37-node/46-arc synthetic net + 100_130, rows
// {1000, 3000, 5000}, 10 folds, all three algorithms.
BenchConfig paper_desk_preset(const std::string& fixtures_dir);

// Validates the config, then runs the full sweep (generate -> sample folds
// -> learn with each algorithm -> evaluate) with fold-level parallelism and
// writes runs.csv, summary.csv and results.txt into out_dir. Outputs are
// byte-identical for identical configs regardless of thread schedule.
void run_bench(const BenchConfig& config, const std::string& out_dir);

}  // namespace skeletor
