#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "skeletor/bench.hpp"
#include "skeletor/graph.hpp"
#include "skeletor/io.hpp"

using namespace skeletor;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SKELETOR_CLI_PATH;
const std::string kFixtures = SKELETOR_FIXTURES_DIR;

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "skeletor_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const fs::path out_file = work_dir() / "cli_stdout.txt";
    const std::string command =
        env_prefix + kCli + " " + args + " > " + out_file.string() + " 2> /dev/null";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("gen-net / sample / learn / eval pipeline") {
    const fs::path dir = work_dir();
    const std::string net = (dir / "truth.bnet").string();
    const std::string csv = (dir / "data.csv").string();
    const std::string cpdag = (dir / "learned.cpdag").string();
    const std::string stats = (dir / "stats.txt").string();
    const std::string report = (dir / "report.txt").string();

    CHECK(run_cli("gen-net --nodes 12 --arcs 14 --seed 5 -o " + net).exit_code == 0);
    CHECK(run_cli("sample --net " + net + " --rows 1500 --seed 9 -o " + csv).exit_code == 0);
    CHECK(run_cli("learn --algo fsbn --data " + csv + " --schema " + net +
                  " --alpha 0.05 -o " + cpdag + " --stats " + stats)
              .exit_code == 0);
    CHECK(run_cli("eval --truth " + net + " --learned " + cpdag + " --data " + csv +
                  " --ess 1 -o " + report)
              .exit_code == 0);

    const std::string stats_text = slurp(stats);
    CHECK(stats_text.find("algo=fsbn") != std::string::npos);
    CHECK(stats_text.find("weighted_cost=") != std::string::npos);

    const std::string report_text = slurp(report);
    CHECK(report_text.find("shd=") != std::string::npos);
    CHECK(report_text.find("bdeu=") != std::string::npos);
}

TEST_CASE("dsep subcommand agrees with the library oracle on asia") {
    const std::string asia = kFixtures + "/asia.bnet";
    const BayesNet net = load_bnet(asia);

    const CliResult blocked =
        run_cli("dsep --net " + asia + " --x asia --y either --given tub");
    CHECK(blocked.exit_code == 0);
    CHECK(blocked.output == "d-separated\n");
    CHECK(d_separated(net.dag, net.index_of("asia"), net.index_of("either"),
                      {net.index_of("tub")}));

    const CliResult open = run_cli("dsep --net " + asia + " --x asia --y either");
    CHECK(open.output == "d-connected\n");
    CHECK_FALSE(d_separated(net.dag, net.index_of("asia"), net.index_of("either"), {}));

    const CliResult marginal = run_cli("dsep --net " + asia + " --x smoke --y tub");
    CHECK(marginal.output == "d-separated\n");
}

TEST_CASE("learn recovers a strong chain end to end") {
    const fs::path dir = work_dir();
    const std::string net_path = (dir / "chain.bnet").string();
    {
        std::ofstream out(net_path);
        out << "var a {no,yes}\nvar b {no,yes}\nvar c {no,yes}\n"
            << "cpt a |\n0.5,0.5\n"
            << "cpt b | a\n0.9,0.1\n0.1,0.9\n"
            << "cpt c | b\n0.85,0.15\n0.15,0.85\n";
    }
    const std::string csv = (dir / "chain.csv").string();
    const std::string out = (dir / "chain.cpdag").string();
    CHECK(run_cli("sample --net " + net_path + " --rows 5000 --seed 3 -o " + csv).exit_code == 0);
    CHECK(run_cli("learn --algo fsbn --data " + csv + " --schema " + net_path + " -o " + out)
              .exit_code == 0);

    const Pdag learned = load_cpdag(out, {"a", "b", "c"});
    CHECK(learned.edge_count() == 2);
    CHECK(learned.has_undirected(0, 1));
    CHECK(learned.has_undirected(1, 2));
}

TEST_CASE("exit codes distinguish usage, data and internal errors") {
    CHECK(run_cli("learn --algo fsbn").exit_code == 1);           // missing required flags
    CHECK(run_cli("no-such-command").exit_code == 1);             // usage
    CHECK(run_cli("sample --net /nonexistent.bnet --rows 5 -o " +
                  (work_dir() / "x.csv").string())
              .exit_code == 2);                                   // data error
    CHECK(run_cli("gen-net --nodes 4 --arcs 40 -o " + (work_dir() / "x.bnet").string())
              .exit_code == 2);                                   // infeasible budget
    const CliResult row_sum = run_cli("dsep --net " + kFixtures +
                                      "/asia.bnet --x asia --y nope");
    CHECK(row_sum.exit_code == 2);
}

TEST_CASE("bench outputs are byte-identical across runs and thread counts") {
    const fs::path dir = work_dir();
    const std::string config_path = (dir / "bench.toml").string();
    {
        std::ofstream out(config_path);
        out << "nets = [\"7_8\"]\n"
            << "rows = [150, 300]\n"
            << "folds = 2\n"
            << "algos = [\"pc\", \"fsbn\", \"ssbn\"]\n"
            << "alpha = 0.05\n"
            << "seed = 99\n";
    }
    const fs::path out_a = dir / "bench_a";
    const fs::path out_b = dir / "bench_b";
    const fs::path out_c = dir / "bench_c";
    CHECK(run_cli("bench --config " + config_path + " -o " + out_a.string(),
                  "CAUSAL_SKELETOR_THREADS=4 ")
              .exit_code == 0);
    CHECK(run_cli("bench --config " + config_path + " -o " + out_b.string(),
                  "CAUSAL_SKELETOR_THREADS=4 ")
              .exit_code == 0);
    CHECK(run_cli("bench --config " + config_path + " -o " + out_c.string(),
                  "CAUSAL_SKELETOR_THREADS=1 ")
              .exit_code == 0);
    for (const char* file : {"runs.csv", "summary.csv", "results.txt"}) {
        const std::string a = slurp(out_a / file);
        CHECK(!a.empty());
        CHECK(a == slurp(out_b / file));
        CHECK(a == slurp(out_c / file));
    }
}

TEST_CASE("bench config parser rejects malformed input") {
    std::istringstream bad_key("nonsense = 3\n");
    CHECK_THROWS(parse_bench_config(bad_key));
    std::istringstream bad_value("folds = banana\n");
    CHECK_THROWS(parse_bench_config(bad_value));
    std::istringstream bad_line("just words\n");
    CHECK_THROWS(parse_bench_config(bad_line));
    std::istringstream good("nets = [\"asia.bnet\", \"20_30\"]\nrows = [100]\nthreads = 2\n");
    const BenchConfig config = parse_bench_config(good);
    CHECK(config.nets.size() == 2);
    CHECK(config.nets[0].label == "asia");
    CHECK(config.nets[1].generated());
    CHECK(config.nets[1].nodes == 20);
    CHECK(config.threads == 2);
}
