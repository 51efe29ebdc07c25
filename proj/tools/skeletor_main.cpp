#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "skeletor/bench.hpp"
#include "skeletor/citest.hpp"
#include "skeletor/dataset.hpp"
#include "skeletor/graph.hpp"
#include "skeletor/io.hpp"
#include "skeletor/metrics.hpp"
#include "skeletor/orient.hpp"
#include "skeletor/search.hpp"

namespace {

using namespace skeletor;

void fail(const std::string& message) { std::cerr << "skeletor: error: " << message << "\n"; }
void warn(const std::string& message) { std::cerr << "skeletor: warning: " << message << "\n"; }

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

NodeId resolve_name(const BayesNet& net, const std::string& name) {
    const NodeId id = net.index_of(name);
    if (id < 0) throw std::invalid_argument("unknown variable '" + name + "'");
    return id;
}

int run_gen_net(int nodes, int arcs, int max_parents, int cardinality, double dirichlet_alpha,
                const std::string& structure, const std::string& cpts, std::uint64_t seed,
                const std::string& out_path) {
    BnGenOptions options;
    options.max_parents = max_parents;
    options.cardinality = cardinality;
    options.dirichlet_alpha = dirichlet_alpha;
    options.structure = structure == "tree" ? BnGenOptions::Structure::tree
                                            : BnGenOptions::Structure::uniform;
    options.cpts = cpts == "noisy-or" ? BnGenOptions::Cpts::noisy_or
                                      : BnGenOptions::Cpts::dirichlet;
    const BayesNet net = random_bn_ex(nodes, arcs, options, seed);
    save_bnet(net, out_path);
    std::cout << "wrote " << out_path << " (" << nodes << " nodes, " << arcs << " arcs)\n";
    return 0;
}

int run_sample(const std::string& net_path, long long rows, std::uint64_t seed,
               const std::string& out_path) {
    const BayesNet net = load_bnet(net_path);
    const Dataset data = forward_sample(net, rows, seed);
    save_csv(data, out_path);
    std::cout << "wrote " << out_path << " (" << rows << " rows, " << data.variable_count()
              << " variables)\n";
    return 0;
}

int run_learn(const std::string& algo_text, const std::string& data_path,
              const std::string& schema_path, double alpha, const std::string& policy_text,
              int max_dss, const std::string& out_path, const std::string& stats_path) {
    const Algo algo = parse_algo(algo_text);
    std::optional<BayesNet> schema_net;
    const std::vector<Variable>* schema = nullptr;
    if (!schema_path.empty()) {
        schema_net = load_bnet(schema_path);
        schema = &schema_net->variables;
    }
    const Dataset data = load_csv(data_path, schema);

    LearnOptions options;
    options.alpha = alpha;
    options.policy = policy_text == "permissive" ? ReliabilityPolicy::permissive
                                                 : ReliabilityPolicy::conservative;
    options.search.max_dss = max_dss;

    const SkeletonResult skeleton = learn_skeleton(data, algo, options);
    const OrientResult oriented = orient_colliders(skeleton);
    for (const std::string& w : oriented.warnings) warn(w);
    for (NodeId t : skeleton.capped_targets)
        warn("conditioning-set size capped at " + std::to_string(max_dss) + " for node " +
             data.variables[t].name);
    const Pdag learned = meek_closure(oriented.pdag);

    std::vector<std::string> names;
    for (const Variable& var : data.variables) names.push_back(var.name);
    save_cpdag(learned, names, out_path);

    const CostReport cost = cost_report(skeleton.ledger);
    std::cout << "kept " << skeleton.arcs.size() << " arcs; " << cost.total_tests
              << " CI tests, weighted cost " << cost.total_weight << "\n";

    if (!stats_path.empty()) {
        std::ofstream stats(stats_path, std::ios::binary);
        if (!stats) throw std::runtime_error("cannot write stats file: " + stats_path);
        stats << "algo=" << algo_name(algo) << " vars=" << data.variable_count()
              << " rows=" << data.n_rows << " arcs=" << skeleton.arcs.size()
              << " tests=" << cost.total_tests << " weighted_cost=" << cost.total_weight
              << " mean_order=" << format_double(cost.mean_order)
              << " skipped_unreliable=" << skeleton.skipped_unreliable
              << " capped_targets=" << skeleton.capped_targets.size();
        for (const auto& [order, count] : cost.tests_by_order)
            stats << " order" << order << "=" << count;
        stats << "\n";
    }
    return 0;
}

int run_eval(const std::string& truth_path, const std::string& learned_path,
             const std::string& data_path, double ess, const std::string& out_path) {
    const BayesNet truth = load_bnet(truth_path);
    std::vector<std::string> names;
    for (const Variable& var : truth.variables) names.push_back(var.name);
    const Pdag learned = load_cpdag(learned_path, names);
    const Dataset data = load_csv(data_path, &truth.variables);

    EvalReport report;
    report.shd = shd(truth.dag, learned);
    report.bdeu_learned = bdeu_pdag(learned, data, ess);
    report.bdeu_true = bdeu(truth.dag, data, ess);

    RunMeta meta;
    meta.algo = "na";
    meta.net = std::filesystem::path(truth_path).stem().string();
    meta.nodes = truth.node_count();
    meta.arcs = truth.dag.arc_count();
    meta.rows = data.n_rows;

    const std::string record = write_results(report, meta);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report file: " + out_path);
        out << record;
    }
    std::cout << record;
    return 0;
}

int run_dsep(const std::string& net_path, const std::string& x_name, const std::string& y_name,
             const std::string& given_text) {
    const BayesNet net = load_bnet(net_path);
    const NodeId x = resolve_name(net, x_name);
    const NodeId y = resolve_name(net, y_name);
    std::vector<NodeId> z;
    for (const std::string& name : split_list(given_text)) z.push_back(resolve_name(net, name));
    std::cout << (d_separated(net.dag, x, y, z) ? "d-separated" : "d-connected") << "\n";
    return 0;
}

int run_bench_cmd(const std::string& config_path, const std::string& out_dir,
                  const std::string& fixtures_dir, const std::string& nets_csv,
                  const std::string& rows_csv, int folds, const std::string& algos_csv,
                  double alpha, double ess, std::int64_t seed, int threads) {
    BenchConfig config = config_path.empty() ? paper_desk_preset(fixtures_dir)
                                             : load_bench_config(config_path);
    // Flags win over the config file.
    if (!nets_csv.empty()) {
        config.nets.clear();
        for (const std::string& item : split_list(nets_csv))
            config.nets.push_back(parse_net_spec(item));
    }
    if (!rows_csv.empty()) {
        config.rows_list.clear();
        for (const std::string& item : split_list(rows_csv))
            config.rows_list.push_back(std::stoll(item));
    }
    if (!algos_csv.empty()) {
        config.algos.clear();
        for (const std::string& item : split_list(algos_csv))
            config.algos.push_back(parse_algo(item));
    }
    if (folds > 0) config.folds = folds;
    if (alpha > 0.0) config.alpha = alpha;
    if (ess > 0.0) config.ess = ess;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) config.threads = threads;

    run_bench(config, out_dir);
    std::cout << "wrote " << out_dir << "/runs.csv, summary.csv, results.txt\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian-network structure learning from discrete data: PC, FSBN and SSBN"};
    app.require_subcommand(1);

    // gen-net
    auto* gen = app.add_subcommand("gen-net", "Generate a random ground-truth network");
    int gen_nodes = 0, gen_arcs = 0, gen_max_parents = 5, gen_cardinality = 2;
    double gen_dirichlet = 1.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_structure = "uniform", gen_cpts = "dirichlet";
    gen->add_option("--nodes", gen_nodes, "Node count")->required();
    gen->add_option("--arcs", gen_arcs, "Arc count")->required();
    gen->add_option("--max-parents", gen_max_parents, "Per-node parent cap");
    gen->add_option("--cardinality", gen_cardinality, "States per variable");
    gen->add_option("--dirichlet-alpha", gen_dirichlet, "Symmetric Dirichlet parameter");
    gen->add_option("--structure", gen_structure, "Arc layout: uniform or tree")
        ->check(CLI::IsMember({"uniform", "tree"}));
    gen->add_option("--cpts", gen_cpts, "CPT scheme: dirichlet or noisy-or")
        ->check(CLI::IsMember({"dirichlet", "noisy-or"}));
    gen->add_option("--seed", gen_seed, "Generation seed");
    gen->add_option("-o,--output", gen_out, "Output .bnet path")->required();

    // sample
    auto* sample = app.add_subcommand("sample", "Forward-sample a dataset from a network");
    std::string sample_net, sample_out;
    long long sample_rows = 0;
    std::uint64_t sample_seed = 1;
    sample->add_option("--net", sample_net, "Network .bnet path")->required();
    sample->add_option("--rows", sample_rows, "Sample count")->required();
    sample->add_option("--seed", sample_seed, "Sampling seed");
    sample->add_option("-o,--output", sample_out, "Output .csv path")->required();

    // learn
    auto* learn = app.add_subcommand("learn", "Learn a CPDAG from a dataset");
    std::string learn_algo, learn_data, learn_schema, learn_out, learn_stats;
    std::string learn_policy = "conservative";
    double learn_alpha = 0.05;
    int learn_max_dss = 8;
    learn->add_option("--algo", learn_algo, "pc, fsbn or ssbn")->required();
    learn->add_option("--data", learn_data, "Dataset .csv path")->required();
    learn->add_option("--schema", learn_schema, "Optional .bnet supplying the schema");
    learn->add_option("--alpha", learn_alpha, "Significance level");
    learn->add_option("--policy", learn_policy, "conservative or permissive")
        ->check(CLI::IsMember({"conservative", "permissive"}));
    learn->add_option("--max-dss", learn_max_dss, "Conditioning-set size cap");
    learn->add_option("-o,--output", learn_out, "Output .cpdag path")->required();
    learn->add_option("--stats", learn_stats, "Optional stats record path");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a learned graph against the truth");
    std::string eval_truth, eval_learned, eval_data, eval_out;
    double eval_ess = 1.0;
    eval->add_option("--truth", eval_truth, "Ground-truth .bnet path")->required();
    eval->add_option("--learned", eval_learned, "Learned .cpdag path")->required();
    eval->add_option("--data", eval_data, "Dataset .csv path")->required();
    eval->add_option("--ess", eval_ess, "BDeu equivalent sample size");
    eval->add_option("-o,--output", eval_out, "Report output path");

    // dsep
    auto* dsep = app.add_subcommand("dsep", "Query d-separation in a network");
    std::string dsep_net, dsep_x, dsep_y, dsep_given;
    dsep->add_option("--net", dsep_net, "Network .bnet path")->required();
    dsep->add_option("--x", dsep_x, "First variable name")->required();
    dsep->add_option("--y", dsep_y, "Second variable name")->required();
    dsep->add_option("--given", dsep_given, "Comma-separated conditioning variables");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the full experimental sweep");
    std::string bench_config, bench_out, bench_fixtures = "fixtures";
    std::string bench_nets, bench_rows, bench_algos;
    int bench_folds = 0, bench_threads = -1;
    double bench_alpha = 0.0, bench_ess = 0.0;
    std::int64_t bench_seed = -1;
    bench->add_option("--config", bench_config, "Bench config file (keyed text)");
    bench->add_option("-o,--output", bench_out, "Output directory")->required();
    bench->add_option("--fixtures", bench_fixtures, "Fixture directory for the default preset");
    bench->add_option("--nets", bench_nets, "Override: comma list of net specs");
    bench->add_option("--rows", bench_rows, "Override: comma list of sample sizes");
    bench->add_option("--algos", bench_algos, "Override: comma list of algorithms");
    bench->add_option("--folds", bench_folds, "Override: fold count");
    bench->add_option("--alpha", bench_alpha, "Override: significance level");
    bench->add_option("--ess", bench_ess, "Override: BDeu equivalent sample size");
    bench->add_option("--seed", bench_seed, "Override: base seed");
    bench->add_option("--threads", bench_threads, "Override: worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail(e.what());
        return 1;
    }

    try {
        if (gen->parsed())
            return run_gen_net(gen_nodes, gen_arcs, gen_max_parents, gen_cardinality,
                               gen_dirichlet, gen_structure, gen_cpts, gen_seed, gen_out);
        if (sample->parsed()) return run_sample(sample_net, sample_rows, sample_seed, sample_out);
        if (learn->parsed())
            return run_learn(learn_algo, learn_data, learn_schema, learn_alpha, learn_policy,
                             learn_max_dss, learn_out, learn_stats);
        if (eval->parsed()) return run_eval(eval_truth, eval_learned, eval_data, eval_ess, eval_out);
        if (dsep->parsed()) return run_dsep(dsep_net, dsep_x, dsep_y, dsep_given);
        if (bench->parsed())
            return run_bench_cmd(bench_config, bench_out, bench_fixtures, bench_nets, bench_rows,
                                 bench_folds, bench_algos, bench_alpha, bench_ess, bench_seed,
                                 bench_threads);
    } catch (const ParseError& e) {
        fail(e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        fail(e.what());
        return 2;
    } catch (const std::logic_error& e) {
        fail(std::string("internal invariant violated: ") + e.what());
        return 3;
    } catch (const std::exception& e) {
        fail(e.what());
        return 2;
    }
    return 1;
}
