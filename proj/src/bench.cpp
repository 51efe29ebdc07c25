#include "skeletor/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "skeletor/dataset.hpp"
#include "skeletor/io.hpp"
#include "skeletor/metrics.hpp"
#include "skeletor/orient.hpp"
#include "skeletor/rng.hpp"

namespace skeletor {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> parse_list(const std::string& value, int line_no) {
    if (value.size() < 2 || value.front() != '[' || value.back() != ']')
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": expected [list] value");
    std::vector<std::string> out;
    std::string body = value.substr(1, value.size() - 2);
    std::string item;
    std::istringstream stream(body);
    while (std::getline(stream, item, ',')) {
        const std::string t = unquote(trim(item));
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

long long to_int(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": expected integer, got '" + value + "'");
    }
}

double to_double(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": expected number, got '" + value + "'");
    }
}

}  // namespace

Algo parse_algo(const std::string& text) {
    if (text == "pc") return Algo::pc;
    if (text == "fsbn") return Algo::fsbn;
    if (text == "ssbn") return Algo::ssbn;
    throw std::runtime_error("unknown algorithm '" + text + "' (expected pc, fsbn or ssbn)");
}

std::string algo_name(Algo algo) {
    switch (algo) {
        case Algo::pc: return "pc";
        case Algo::fsbn: return "fsbn";
        case Algo::ssbn: return "ssbn";
    }
    return "?";
}

NetSpec parse_net_spec(const std::string& text) {
    NetSpec spec;
    const bool pathy = text.find('.') != std::string::npos || text.find('/') != std::string::npos;
    if (!pathy) {
        const auto sep = text.find('_');
        if (sep != std::string::npos) {
            const std::string left = text.substr(0, sep);
            const std::string right = text.substr(sep + 1);
            const bool numeric = !left.empty() && !right.empty() &&
                                 std::all_of(left.begin(), left.end(), ::isdigit) &&
                                 std::all_of(right.begin(), right.end(), ::isdigit);
            if (numeric) {
                spec.label = text;
                spec.nodes = std::stoi(left);
                spec.arcs = std::stoi(right);
                return spec;
            }
        }
        throw std::runtime_error("network spec '" + text +
                                 "' is neither <nodes>_<arcs> nor a fixture path");
    }
    spec.fixture_path = text;
    std::string stem = std::filesystem::path(text).stem().string();
    spec.label = stem.empty() ? text : stem;
    return spec;
}

BenchConfig parse_bench_config(std::istream& in) {
    BenchConfig config;
    config.algos = {Algo::pc, Algo::fsbn, Algo::ssbn};

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "nets") {
            config.nets.clear();
            for (const std::string& item : parse_list(value, line_no))
                config.nets.push_back(parse_net_spec(item));
        } else if (key == "rows") {
            config.rows_list.clear();
            for (const std::string& item : parse_list(value, line_no))
                config.rows_list.push_back(to_int(item, line_no));
        } else if (key == "algos") {
            config.algos.clear();
            for (const std::string& item : parse_list(value, line_no))
                config.algos.push_back(parse_algo(item));
        } else if (key == "folds") {
            config.folds = static_cast<int>(to_int(value, line_no));
        } else if (key == "alpha") {
            config.alpha = to_double(value, line_no);
        } else if (key == "ess") {
            config.ess = to_double(value, line_no);
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(to_int(value, line_no));
        } else if (key == "max_parents") {
            config.generator.max_parents = static_cast<int>(to_int(value, line_no));
        } else if (key == "cardinality") {
            config.generator.cardinality = static_cast<int>(to_int(value, line_no));
        } else if (key == "dirichlet_alpha") {
            config.generator.dirichlet_alpha = to_double(value, line_no);
        } else if (key == "structure") {
            const std::string s = unquote(value);
            if (s == "uniform")
                config.generator.structure = BnGenOptions::Structure::uniform;
            else if (s == "tree")
                config.generator.structure = BnGenOptions::Structure::tree;
            else
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unknown structure '" + s + "'");
        } else if (key == "cpts") {
            const std::string s = unquote(value);
            if (s == "dirichlet")
                config.generator.cpts = BnGenOptions::Cpts::dirichlet;
            else if (s == "noisy-or")
                config.generator.cpts = BnGenOptions::Cpts::noisy_or;
            else
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unknown cpts scheme '" + s + "'");
        } else if (key == "max_dss") {
            config.max_dss = static_cast<int>(to_int(value, line_no));
        } else if (key == "threads") {
            config.threads = static_cast<int>(to_int(value, line_no));
        } else if (key == "policy") {
            const std::string p = unquote(value);
            if (p == "conservative")
                config.policy = ReliabilityPolicy::conservative;
            else if (p == "permissive")
                config.policy = ReliabilityPolicy::permissive;
            else
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unknown policy '" + p + "'");
        } else {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
    }
    return config;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_bench_config(in);
}

BenchConfig paper_desk_preset(const std::string& fixtures_dir) {
    BenchConfig config;
    config.nets.push_back(parse_net_spec(
        (std::filesystem::path(fixtures_dir) / "asia.bnet").string()));
    config.nets.push_back(parse_net_spec("37_46"));
    config.nets.push_back(parse_net_spec("100_130"));
    config.rows_list = {1000, 3000, 5000};
    config.folds = 10;
    config.algos = {Algo::pc, Algo::fsbn, Algo::ssbn};
    config.seed = 20240901;
    // Benchmark-style networks: deep ancestral structure, strong arcs.
    config.generator.structure = BnGenOptions::Structure::tree;
    config.generator.cpts = BnGenOptions::Cpts::noisy_or;
    return config;
}

namespace {

struct RunRecord {
    RunMeta meta;
    EvalReport report;
};

int resolve_threads(int configured) {
    int resolved = configured > 0 ? configured : static_cast<int>(std::thread::hardware_concurrency());
    if (resolved < 1) resolved = 1;
    if (const char* env = std::getenv("CAUSAL_SKELETOR_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) resolved = std::min(resolved, cap);
    }
    return resolved;
}

struct Aggregate {
    std::string net;
    long long rows = 0;
    std::string algo;
    std::vector<double> shd, bdeu, cost, tests;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

void run_bench(const BenchConfig& config, const std::string& out_dir) {
    if (config.nets.empty()) throw std::runtime_error("bench: no networks configured");
    if (config.rows_list.empty()) throw std::runtime_error("bench: no sample sizes configured");
    if (config.algos.empty()) throw std::runtime_error("bench: no algorithms configured");
    if (config.folds < 1) throw std::runtime_error("bench: folds must be >= 1");

    std::filesystem::create_directories(out_dir);

    // Ground-truth networks, then every fold dataset, generated sequentially
    // so all randomness is fixed before the parallel phase starts.
    std::vector<BayesNet> truths;
    for (std::size_t i = 0; i < config.nets.size(); ++i) {
        const NetSpec& spec = config.nets[i];
        if (spec.generated()) {
            truths.push_back(random_bn_ex(spec.nodes, spec.arcs, config.generator,
                                          mix_seed({config.seed, 0xbe7001u, i})));
        } else {
            truths.push_back(load_bnet(spec.fixture_path));
            if (auto issues = validate(truths.back()); !issues.empty())
                throw std::runtime_error("bench: fixture " + spec.fixture_path +
                                         " invalid: " + issues.front());
        }
    }

    struct Job {
        std::size_t net_idx;
        std::size_t rows_idx;
        int fold;
        Algo algo;
        const Dataset* data;
        std::uint64_t sample_seed;
    };

    std::vector<std::vector<std::vector<Dataset>>> folds(config.nets.size());
    std::vector<Job> jobs;
    for (std::size_t ni = 0; ni < config.nets.size(); ++ni) {
        folds[ni].resize(config.rows_list.size());
        for (std::size_t ri = 0; ri < config.rows_list.size(); ++ri) {
            const std::uint64_t sample_seed = mix_seed({config.seed, 0xda7au, ni, ri});
            folds[ni][ri] =
                kfold_replicates(truths[ni], config.rows_list[ri], config.folds, sample_seed);
            for (int fold = 0; fold < config.folds; ++fold)
                for (Algo algo : config.algos)
                    jobs.push_back({ni, ri, fold, algo, &folds[ni][ri][fold], sample_seed});
        }
    }

    std::vector<RunRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load()) return;
            const Job& job = jobs[i];
            try {
                const NetSpec& spec = config.nets[job.net_idx];
                const BayesNet& truth = truths[job.net_idx];
                LearnOptions options;
                options.alpha = config.alpha;
                options.policy = config.policy;
                options.search.max_dss = config.max_dss;
                SkeletonResult skeleton = learn_skeleton(*job.data, job.algo, options);
                Pdag learned = meek_closure(orient_colliders(skeleton).pdag);

                RunRecord& rec = records[i];
                rec.meta.algo = algo_name(job.algo);
                rec.meta.net = spec.label;
                rec.meta.nodes = truth.node_count();
                rec.meta.arcs = truth.dag.arc_count();
                rec.meta.rows = config.rows_list[job.rows_idx];
                rec.meta.fold = job.fold;
                rec.meta.seed = job.sample_seed;
                rec.report.shd = shd(truth.dag, learned);
                rec.report.bdeu_learned = bdeu_pdag(learned, *job.data, config.ess);
                rec.report.bdeu_true = bdeu(truth.dag, *job.data, config.ess);
                rec.report.total_weighted_cost = skeleton.ledger.total_weight;
                rec.report.total_tests = skeleton.ledger.total_tests;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure.empty()) failure = e.what();
                return;
            }
        }
    };

    const int thread_count = static_cast<int>(
        std::min<std::size_t>(resolve_threads(config.threads), jobs.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("bench run failed: " + failure);

    // All output is written after the joins, in job order, so the bytes do
    // not depend on the thread schedule.
    std::ofstream runs(std::filesystem::path(out_dir) / "runs.csv", std::ios::binary);
    runs << "net,nodes,arcs,rows,fold,algo,seed,shd,bdeu,bdeu_true,cost,tests\n";
    for (const RunRecord& rec : records) {
        runs << rec.meta.net << ',' << rec.meta.nodes << ',' << rec.meta.arcs << ','
             << rec.meta.rows << ',' << rec.meta.fold << ',' << rec.meta.algo << ','
             << rec.meta.seed << ',' << rec.report.shd << ','
             << format_double(rec.report.bdeu_learned) << ','
             << format_double(rec.report.bdeu_true.value_or(0.0)) << ','
             << rec.report.total_weighted_cost << ',' << rec.report.total_tests << '\n';
    }
    runs.close();

    std::vector<Aggregate> aggregates;
    for (std::size_t ni = 0; ni < config.nets.size(); ++ni)
        for (std::size_t ri = 0; ri < config.rows_list.size(); ++ri)
            for (Algo algo : config.algos) {
                Aggregate agg;
                agg.net = config.nets[ni].label;
                agg.rows = config.rows_list[ri];
                agg.algo = algo_name(algo);
                for (std::size_t i = 0; i < jobs.size(); ++i) {
                    const Job& job = jobs[i];
                    if (job.net_idx != ni || job.rows_idx != ri || job.algo != algo) continue;
                    agg.shd.push_back(records[i].report.shd);
                    agg.bdeu.push_back(records[i].report.bdeu_learned);
                    agg.cost.push_back(static_cast<double>(records[i].report.total_weighted_cost));
                    agg.tests.push_back(static_cast<double>(records[i].report.total_tests));
                }
                aggregates.push_back(std::move(agg));
            }

    std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
    summary << "net,rows,algo,folds,shd_mean,shd_std,bdeu_mean,bdeu_std,cost_mean,cost_std,"
               "tests_mean\n";
    for (const Aggregate& agg : aggregates) {
        summary << agg.net << ',' << agg.rows << ',' << agg.algo << ',' << agg.shd.size() << ','
                << format_double(mean_of(agg.shd)) << ',' << format_double(std_of(agg.shd)) << ','
                << format_double(mean_of(agg.bdeu)) << ',' << format_double(std_of(agg.bdeu))
                << ',' << format_double(mean_of(agg.cost)) << ','
                << format_double(std_of(agg.cost)) << ',' << format_double(mean_of(agg.tests))
                << '\n';
    }
    summary.close();

    std::ofstream results(std::filesystem::path(out_dir) / "results.txt", std::ios::binary);
    for (const RunRecord& rec : records) results << write_results(rec.report, rec.meta);
    results.close();
}

}  // namespace skeletor
