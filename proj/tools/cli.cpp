#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "citerank/centrality.hpp"
#include "citerank/corpus.hpp"
#include "citerank/error.hpp"
#include "citerank/evaluate.hpp"
#include "citerank/export.hpp"
#include "citerank/log.hpp"
#include "citerank/netstats.hpp"
#include "citerank/nullmodel.hpp"
#include "citerank/parallel.hpp"
#include "citerank/random.hpp"
#include "citerank/rescale.hpp"
#include "citerank/synth.hpp"

#ifndef CITERANK_VERSION
#define CITERANK_VERSION "dev"
#endif

namespace citerank::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string nodes, edges, targets, out, exclude;
    double alpha = 0.5;
    double epsilon = 1e-9;
    std::size_t delta = 15000;
    std::size_t layers = 100;
    std::size_t realizations = 12;
    double cadence_months = 6.0;
    double z = 0.005;
    double f = 0.005;
    double min_target_age = 20.0;
    double max_age = -1.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    // top
    std::string metric = "p";
    std::size_t k = 15;
    // stats
    std::size_t bins = 10;
    std::vector<std::size_t> tau_k{3, 5};
    bool dcm = false;
    // synth
    SynthConfig synth;
    double decay_years = 5.0;
    std::string synth_start = "1950-01-01";
};

PageRankConfig pagerank_config(const RunConfig &c) {
    PageRankConfig pr;
    pr.alpha = c.alpha;
    pr.epsilon = c.epsilon;
    pr.threads = c.threads;
    return pr;
}

EvaluationConfig evaluation_config(const RunConfig &c, const CitationNetwork &network) {
    EvaluationConfig e;
    e.cadence_days = c.cadence_months * kDaysPerYear / 12.0;
    e.z = c.z;
    e.min_target_age_years = c.min_target_age;
    e.max_age_years = c.max_age < 0.0 ? c.min_target_age : c.max_age;
    e.pagerank = pagerank_config(c);
    e.rescale.delta = c.delta;
    e.threads = c.threads;
    if (!c.exclude.empty()) {
        std::vector<std::string> ids;
        if (fs::is_regular_file(c.exclude)) {
            ids = load_id_list(c.exclude);
        } else {
            std::stringstream ss(c.exclude);
            for (std::string id; std::getline(ss, id, ',');)
                if (!id.empty())
                    ids.push_back(id);
        }
        e.exclude = resolve_ids(network, ids);
    }
    return e;
}

fs::path output_dir(const RunConfig &c) {
    if (!c.out.empty())
        return c.out;
    throw Error("no output directory: pass --out or set CITERANK_OUT");
}

json manifest(const std::string &command, const RunConfig &c) {
    json m;
    m["tool"] = "citerank";
    m["version"] = CITERANK_VERSION;
    m["command"] = command;
    m["parameters"] = {{"alpha", c.alpha},
                       {"epsilon", c.epsilon},
                       {"delta", c.delta},
                       {"layers", c.layers},
                       {"realizations", c.realizations},
                       {"cadence_months", c.cadence_months},
                       {"z", c.z},
                       {"f", c.f},
                       {"min_target_age", c.min_target_age},
                       {"max_age", c.max_age < 0.0 ? c.min_target_age : c.max_age},
                       {"seed", c.seed},
                       {"exclude", c.exclude},
                       {"tie_rule", kTieRule}};
    json inputs = json::object();
    for (auto [name, path] : {std::pair{"nodes", c.nodes}, std::pair{"edges", c.edges}, std::pair{"targets", c.targets}})
        if (!path.empty() && fs::is_regular_file(path))
            inputs[name] = {{"path", fs::path(path).filename().string()}, {"fnv1a64", file_digest(path)}};
    m["inputs"] = inputs;
    return m;
}

json ingestion_json(const IngestionReport &r) {
    return {{"nodes_loaded", r.nodes_loaded},
            {"edges_read", r.edges_read},
            {"edges_kept", r.edges_kept},
            {"dropped_unknown_endpoint", r.dropped_unknown_endpoint},
            {"dropped_self_citation", r.dropped_self_citation},
            {"dropped_duplicate", r.dropped_duplicate},
            {"dropped_citing_before_cited", r.dropped_citing_before_cited}};
}

LoadedCorpus load(const RunConfig &c) {
    if (c.nodes.empty() || c.edges.empty())
        throw Error("--nodes and --edges are required");
    return load_corpus(c.nodes, c.edges);
}

std::vector<NodeIndex> load_targets(const RunConfig &c, const CitationNetwork &network, json &m, bool required) {
    if (c.targets.empty()) {
        if (required)
            throw Error("--targets is required");
        return {};
    }
    const auto ids = load_id_list(c.targets);
    std::size_t missing = 0;
    auto targets = resolve_ids(network, ids, &missing);
    if (missing)
        warn(std::to_string(missing) + " target ids are not in the corpus");
    m["targets"] = {{"listed", ids.size()}, {"resolved", targets.size()}, {"missing", missing}};
    return targets;
}

void finish(OutputStage &stage, json &m) {
    m["outputs"] = stage.files();
    write_json(stage.path("manifest.json"), m);
    stage.commit();
}

int cmd_score(const RunConfig &c, std::ostream &out) {
    auto corpus = load(c);
    const auto &net = corpus.network;
    OutputStage stage(output_dir(c));
    json m = manifest("score", c);
    m["ingestion"] = ingestion_json(corpus.report);

    const auto view = NetworkView::full(net);
    auto pr = pagerank(view, pagerank_config(c));
    m["pagerank"] = {{"iterations", pr.iterations}, {"residual", pr.residual}};
    const ScoreVector cc = citation_count(view);
    RescaleConfig rs{c.delta};
    const ScoreVector scores[] = {cc, pr.scores, rescale(cc, net, rs), rescale(pr.scores, net, rs)};
    json bias = json::array();
    for (const auto &s : scores) {
        write_scores_csv(stage.path("scores_" + std::string(metric_slug(s.metric)) + ".csv"), net, s);
        if (net.node_count() >= 40)
            bias.push_back(to_json(bias_profile(rank_nodes(s), c.f)));
    }
    write_json(stage.path("bias.json"), bias);
    finish(stage, m);
    out << "scored " << net.node_count() << " nodes, " << net.edge_count() << " edges; pagerank converged in "
        << pr.iterations << " iterations\n";
    return 0;
}

int cmd_top(const RunConfig &c, std::ostream &out) {
    auto metric = parse_metric(c.metric);
    if (!metric)
        throw Error("unknown metric '" + c.metric + "' (expected c, p, R(c), R(p), rc or rp)");
    auto corpus = load(c);
    const auto &net = corpus.network;
    const auto view = NetworkView::full(net);
    const Metric wanted[] = {*metric};
    const auto scores = compute_metrics(view, wanted, pagerank_config(c), RescaleConfig{c.delta}).front();
    const auto ranks = rank_nodes(scores);
    std::vector<NodeIndex> order(net.node_count());
    for (NodeIndex i = 0; i < net.node_count(); ++i)
        order[ranks.ranks[i] - 1] = i;
    const std::size_t k = std::min(c.k, order.size());

    out << std::left << std::setw(6) << "rank" << std::setw(14) << "node_id" << std::setw(12) << "issued"
        << std::right << std::setw(8) << "c" << "  " << metric_name(*metric) << '\n';
    for (std::size_t r = 0; r < k; ++r) {
        const NodeIndex i = order[r];
        out << std::left << std::setw(6) << r + 1 << std::setw(14) << net.id(i) << std::setw(12) << net.date(i).str()
            << std::right << std::setw(8) << net.in_degree(i) << "  " << format_double(scores.values[i]) << '\n';
    }

    if (!c.out.empty()) {
        OutputStage stage(c.out);
        json m = manifest("top", c);
        m["metric"] = metric_name(*metric);
        m["k"] = c.k;
        auto path = stage.path("top_" + std::string(metric_slug(*metric)) + ".csv");
        std::ofstream csv(path, std::ios::binary);
        csv << "rank,node_id,issue_date,c,score\n";
        for (std::size_t r = 0; r < k; ++r) {
            const NodeIndex i = order[r];
            csv << r + 1 << ',' << net.id(i) << ',' << net.date(i).str() << ',' << net.in_degree(i) << ','
                << format_double(scores.values[i]) << '\n';
        }
        csv.close();
        if (!csv)
            throw Error("write failed: " + path.string());
        finish(stage, m);
    }
    return 0;
}

void write_evaluation(OutputStage &stage, const std::string &prefix, const EvaluationReport &report,
                      const CitationNetwork &net) {
    write_json(stage.path(prefix + ".json"), to_json(report, net));
    write_report_csv(stage.path(prefix + ".csv"), report);
}

int cmd_evaluate(const RunConfig &c, std::ostream &out) {
    auto corpus = load(c);
    const auto &net = corpus.network;
    OutputStage stage(output_dir(c));
    json m = manifest("evaluate", c);
    m["ingestion"] = ingestion_json(corpus.report);
    const auto targets = load_targets(c, net, m, true);
    const EvaluationConfig cfg = evaluation_config(c, net);

    // Whole-dataset numbers on the full network.
    const auto view = NetworkView::full(net);
    std::vector<RankVector> ranks;
    for (const auto &s : compute_metrics(view, cfg.metrics, cfg.pagerank, cfg.rescale))
        ranks.push_back(rank_nodes(s));
    json whole = to_json(ranking_ratio(ranks, targets, cfg.exclude), net);
    for (const auto &r : ranks) {
        auto rate = identification_rate(r, targets, c.z);
        whole["identification_rate"][std::string(metric_name(r.metric))] = rate ? json(*rate) : json(nullptr);
    }
    write_json(stage.path("whole_dataset.json"), whole);

    const auto report = temporal_evaluation(net, targets, cfg);
    write_evaluation(stage, "evaluation", report, net);
    const auto rows = trajectory_export(net, targets, cfg);
    write_trajectory_csv(stage.path("trajectories.csv"), net, cfg.metrics, rows);
    m["cohort_size"] = report.cohort.size();
    m["snapshots"] = report.snapshots;
    finish(stage, m);
    out << "evaluated " << report.cohort.size() << " cohort targets over " << report.snapshots << " snapshots\n";
    return 0;
}

int cmd_nullmodel(const RunConfig &c, std::ostream &out) {
    if (c.realizations == 0)
        throw Error("--realizations must be at least 1");
    auto corpus = load(c);
    const auto &net = corpus.network;
    OutputStage stage(output_dir(c));
    json m = manifest("nullmodel", c);
    m["ingestion"] = ingestion_json(corpus.report);
    const auto targets = load_targets(c, net, m, false);
    EvaluationConfig cfg = evaluation_config(c, net);

    std::vector<CitationNetwork> randomized(c.realizations);
    std::vector<std::uint64_t> seeds(c.realizations);
    for (std::size_t r = 0; r < c.realizations; ++r) {
        seeds[r] = derive_seed(c.seed, r);
        randomized[r] = sample_randomized(net, c.layers, seeds[r]);
        const std::string dir = "random_" + std::to_string(r) + "/";
        randomized[r].write_nodes(stage.path(dir + "nodes.tsv"));
        randomized[r].write_edges(stage.path(dir + "edges.tsv"));
    }
    m["realization_seeds"] = seeds;

    if (!targets.empty()) {
        const auto real = temporal_evaluation(net, targets, cfg);
        write_evaluation(stage, "evaluation_real", real, net);
        std::vector<EvaluationReport> reports(c.realizations);
        EvaluationConfig inner = cfg;
        inner.threads = 1;
        parallel_for(c.realizations, c.threads,
                     [&](std::size_t r) { reports[r] = temporal_evaluation(randomized[r], targets, inner); });
        for (std::size_t r = 0; r < c.realizations; ++r)
            write_evaluation(stage, "random_" + std::to_string(r) + "/evaluation", reports[r], randomized[r]);
        const auto diff = null_comparison(real, reports);
        write_difference_csv(stage.path("difference.csv"), diff);
    }
    finish(stage, m);
    out << "generated " << c.realizations << " randomized networks with " << c.layers << " layers\n";
    return 0;
}

int cmd_stats(const RunConfig &c, std::ostream &out) {
    auto corpus = load(c);
    const auto &net = corpus.network;
    OutputStage stage(output_dir(c));
    json m = manifest("stats", c);
    m["ingestion"] = ingestion_json(corpus.report);
    const auto targets = load_targets(c, net, m, false);
    const auto view = NetworkView::full(net);

    for (auto [dir, name] : {std::pair{Direction::Citing, "citing"}, std::pair{Direction::Cited, "cited"}}) {
        const auto curve = neighbor_indegree_profile(view, dir, c.bins);
        write_curve_csv(stage.path("correlation_" + std::string(name) + ".csv"), curve);
        write_curve_raw_csv(stage.path("correlation_" + std::string(name) + "_raw.csv"), curve);
    }
    for (auto [in, name] : {std::pair{true, "in"}, std::pair{false, "out"}}) {
        auto path = stage.path("degree_" + std::string(name) + ".csv");
        std::ofstream csv(path, std::ios::binary);
        csv << "degree,count\n";
        for (const auto &[d, n] : degree_histogram(view, in))
            csv << d << ',' << n << '\n';
        csv.close();
        if (!csv)
            throw Error("write failed: " + path.string());
    }

    json timing;
    auto mean_all = mean_citations(net);
    timing["all"]["citations"] = mean_all ? json(*mean_all) : json(nullptr);
    if (!targets.empty()) {
        auto mean_sig = mean_citations(net, std::span<const NodeIndex>(targets));
        timing["significant"]["citations"] = mean_sig ? json(*mean_sig) : json(nullptr);
    }
    for (std::size_t k : c.tau_k) {
        const std::string key = "tau_" + std::to_string(k);
        timing["all"][key] = to_json(citation_timing(net, k));
        if (!targets.empty())
            timing["significant"][key] = to_json(citation_timing(net, k, std::span<const NodeIndex>(targets)));
    }
    write_json(stage.path("timing.json"), timing);

    if (c.dcm) {
        if (c.realizations < 2)
            throw Error("--dcm needs --realizations of at least 2");
        std::vector<CitationNetwork> ensemble(c.realizations);
        parallel_for(c.realizations, c.threads,
                     [&](std::size_t r) { ensemble[r] = sample_randomized(net, c.layers, derive_seed(c.seed, r)); });
        for (auto [dir, name] : {std::pair{Direction::Citing, "citing"}, std::pair{Direction::Cited, "cited"}})
            write_curve_csv(stage.path("correlation_" + std::string(name) + "_dcm.csv"),
                            ensemble_profile(ensemble, dir, c.bins));
    }
    finish(stage, m);
    for (std::size_t k : c.tau_k) {
        auto t = citation_timing(net, k);
        out << "tau_" << k << " (all): " << (t.mean_years ? format_double(*t.mean_years) + " y" : "n/a") << " over "
            << t.nodes << " nodes\n";
    }
    return 0;
}

int cmd_synth(RunConfig c, std::ostream &out) {
    auto start = Date::parse(c.synth_start);
    if (!start)
        throw Error("bad --start date '" + c.synth_start + "'");
    c.synth.start = *start;
    c.synth.seed = c.seed;
    c.synth.decay_days = c.decay_years * kDaysPerYear;
    const auto corpus = generate(c.synth);
    OutputStage stage(output_dir(c));
    corpus.network.write_nodes(stage.path("nodes.tsv"));
    corpus.network.write_edges(stage.path("edges.tsv"));
    {
        auto path = stage.path("targets.txt");
        std::ofstream t(path, std::ios::binary);
        for (const auto &id : corpus.planted_ids)
            t << id << '\n';
        t.close();
        if (!t)
            throw Error("write failed: " + path.string());
    }
    json m = manifest("synth", c);
    m["synth"] = {{"nodes", c.synth.nodes},
                  {"mean_out_degree", c.synth.mean_out_degree},
                  {"attachment_exponent", c.synth.attachment_exponent},
                  {"decay_years", c.decay_years},
                  {"planted", c.synth.planted},
                  {"fitness_multiplier", c.synth.fitness_multiplier},
                  {"start", c.synth_start},
                  {"span_years", c.synth.span_years}};
    finish(stage, m);
    out << "generated " << corpus.network.node_count() << " nodes, " << corpus.network.edge_count() << " edges, "
        << corpus.planted.size() << " planted targets\n";
    return 0;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"citerank: age-rescaled centrality on temporal citation networks"};
    app.set_version_flag("--version", std::string(CITERANK_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    app.add_option("--nodes", c.nodes, "nodes TSV (node_id<TAB>YYYY-MM-DD)");
    app.add_option("--edges", c.edges, "edges TSV (citing_id<TAB>cited_id)");
    app.add_option("--targets", c.targets, "significant node ids, one per line");
    app.add_option("--out", c.out, "output directory")->envname("CITERANK_OUT");
    app.add_option("--alpha", c.alpha, "PageRank damping")->capture_default_str();
    app.add_option("--epsilon", c.epsilon, "PageRank L1 convergence threshold")->capture_default_str();
    app.add_option("--delta", c.delta, "rescaling window, in nodes")->capture_default_str();
    app.add_option("--layers", c.layers, "null model layers")->capture_default_str();
    app.add_option("--realizations", c.realizations, "null model realizations")->capture_default_str();
    app.add_option("--cadence-months", c.cadence_months, "snapshot spacing")->capture_default_str();
    app.add_option("--z", c.z, "identification-rate list fraction")->capture_default_str();
    app.add_option("--f", c.f, "bias-profile top fraction")->capture_default_str();
    app.add_option("--min-target-age", c.min_target_age, "cohort: minimum target age at corpus end, years")
        ->capture_default_str();
    app.add_option("--max-age", c.max_age, "largest evaluated age in years (default: --min-target-age; 0: all)");
    app.add_option("--seed", c.seed, "random seed")->capture_default_str();
    app.add_option("--exclude", c.exclude, "ids left out of the evaluation (file or comma list)");
    app.add_option("--threads", c.threads, "worker cap")->capture_default_str()->check(CLI::PositiveNumber);

    auto *score = app.add_subcommand("score", "c, p, R(c), R(p) on the full network");
    auto *top = app.add_subcommand("top", "top-k table for one metric");
    top->add_option("--metric", c.metric, "c, p, R(c) or R(p)")->capture_default_str();
    top->add_option("--k", c.k, "rows")->capture_default_str();
    auto *evaluate = app.add_subcommand("evaluate", "whole-dataset and age-resolved evaluation");
    auto *nullmodel = app.add_subcommand("nullmodel", "dynamic configuration model ensemble and comparison");
    auto *stats = app.add_subcommand("stats", "degree correlations, degree distributions, citation timing");
    stats->add_option("--bins", c.bins, "log bins")->capture_default_str();
    stats->add_option("--tau", c.tau_k, "citation thresholds for timing statistics")->capture_default_str();
    stats->add_flag("--dcm", c.dcm, "also profile a null-model ensemble");
    auto *synth = app.add_subcommand("synth", "synthetic corpus with planted targets");
    synth->add_option("--n", c.synth.nodes, "nodes")->capture_default_str();
    synth->add_option("--out-degree", c.synth.mean_out_degree, "mean references per node")->capture_default_str();
    synth->add_option("--attachment-exponent", c.synth.attachment_exponent)->capture_default_str();
    synth->add_option("--decay-years", c.decay_years, "aging timescale (0 disables)")->capture_default_str();
    synth->add_option("--planted", c.synth.planted, "planted targets")->capture_default_str();
    synth->add_option("--multiplier", c.synth.fitness_multiplier, "planted fitness")->capture_default_str();
    synth->add_option("--start", c.synth_start, "first issue date")->capture_default_str();
    synth->add_option("--span-years", c.synth.span_years)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        if (*score)
            return cmd_score(c, out);
        if (*top)
            return cmd_top(c, out);
        if (*evaluate)
            return cmd_evaluate(c, out);
        if (*nullmodel)
            return cmd_nullmodel(c, out);
        if (*stats)
            return cmd_stats(c, out);
        if (*synth)
            return cmd_synth(c, out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace citerank::cli
