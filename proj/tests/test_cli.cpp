#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "../tools/cli.hpp"
#include "citerank/evaluate.hpp"
#include "citerank/export.hpp"
#include "citerank/log.hpp"
#include "citerank/rescale.hpp"

using namespace citerank;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path root;
    Sandbox() {
        root = fs::temp_directory_path() / ("citerank-cli-" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
        set_warning_sink([](const std::string &) {});
    }
    ~Sandbox() {
        fs::remove_all(root);
        set_warning_sink(nullptr);
    }
    fs::path write(const std::string &name, const std::string &text) const {
        std::ofstream(root / name, std::ios::binary) << text;
        return root / name;
    }
};

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "citerank");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char *kNodes = "node_id\tdate\n1\t1990-01-01\n2\t1991-05-01\n3\t1992-02-01\n4\t1993-07-01\n5\t1994-01-01\n"
                     "6\t1995-03-01\n";
const char *kEdges = "2\t1\n3\t1\n3\t2\n4\t2\n5\t4\n6\t4\n6\t1\n";

} // namespace

TEST_CASE("score matches direct module calls and reruns identically") {
    Sandbox box;
    const auto nodes = box.write("nodes.tsv", kNodes), edges = box.write("edges.tsv", kEdges);
    const auto out = box.root / "out";
    auto r = run({"score", "--nodes", nodes, "--edges", edges, "--out", out, "--delta", "4"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    for (auto name : {"scores_c.csv", "scores_p.csv", "scores_rc.csv", "scores_rp.csv", "bias.json", "manifest.json"})
        CHECK(fs::exists(out / name));

    auto corpus = load_corpus(nodes, edges);
    const auto &net = corpus.network;
    const auto view = NetworkView::full(net);
    const Metric ms[] = {Metric::Citations, Metric::PageRank, Metric::RescaledCitations, Metric::RescaledPageRank};
    auto scores = compute_metrics(view, ms, PageRankConfig{}, RescaleConfig{.delta = 4});
    for (const auto &s : scores) {
        const auto expected = box.root / "expected.csv";
        write_scores_csv(expected, net, s);
        CHECK(slurp(expected) == slurp(out / ("scores_" + std::string(metric_slug(s.metric)) + ".csv")));
    }

    const auto manifest1 = slurp(out / "manifest.json");
    auto j = nlohmann::json::parse(manifest1);
    CHECK(j["command"] == "score");
    CHECK(j["parameters"]["delta"] == 4);
    CHECK(j["parameters"]["alpha"] == 0.5);
    CHECK(j["ingestion"]["edges_kept"] == 7);
    CHECK(j["inputs"]["nodes"]["fnv1a64"] == file_digest(nodes));
    const auto first_p = slurp(out / "scores_p.csv");
    REQUIRE(run({"score", "--nodes", nodes, "--edges", edges, "--out", out, "--delta", "4"}).status == 0);
    CHECK(slurp(out / "manifest.json") == manifest1);
    CHECK(slurp(out / "scores_p.csv") == first_p);
}

TEST_CASE("top") {
    Sandbox box;
    const auto nodes = box.write("nodes.tsv", kNodes), edges = box.write("edges.tsv", kEdges);
    auto r = run({"top", "--nodes", nodes, "--edges", edges, "--metric", "c", "--k", "100", "--out", box.root / "t"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    std::istringstream table(r.out);
    std::vector<std::string> lines;
    for (std::string line; std::getline(table, line);)
        lines.push_back(line);
    REQUIRE(lines.size() == 7);
    // Node 1 has 3 citations; nodes 2 and 4 tie at 2 and the older one goes first.
    CHECK(lines[1].rfind("1     1 ", 0) == 0);
    CHECK(lines[2].rfind("2     2 ", 0) == 0);
    CHECK(lines[3].rfind("3     4 ", 0) == 0);
    CHECK(slurp(box.root / "t" / "top_c.csv").rfind("rank,node_id,issue_date,c,score\n1,1,1990-01-01,3,3\n", 0) == 0);

    auto bad = run({"top", "--nodes", nodes, "--edges", edges, "--metric", "h-index"});
    CHECK(bad.status != 0);
    CHECK(bad.err.find("unknown metric") != std::string::npos);
}

TEST_CASE("nullmodel with one realization is deterministic") {
    Sandbox box;
    REQUIRE(run({"synth", "--n", "400", "--planted", "5", "--seed", "4", "--out", box.root / "corpus"}).status == 0);
    const auto nodes = box.root / "corpus" / "nodes.tsv", edges = box.root / "corpus" / "edges.tsv";
    std::vector<std::string> args{"nullmodel", "--nodes", nodes, "--edges", edges, "--realizations", "1",
                                  "--layers", "10", "--seed", "7"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", box.root / "n1"});
    b.insert(b.end(), {"--out", box.root / "n2"});
    auto ra = run(a);
    REQUIRE_MESSAGE(ra.status == 0, ra.err);
    REQUIRE(run(b).status == 0);
    CHECK(slurp(box.root / "n1" / "random_0" / "edges.tsv") == slurp(box.root / "n2" / "random_0" / "edges.tsv"));
    CHECK(slurp(box.root / "n1" / "manifest.json") == slurp(box.root / "n2" / "manifest.json"));
    CHECK(slurp(box.root / "n1" / "random_0" / "edges.tsv") != slurp(edges));

    // The randomized files load back with the same node set.
    auto orig = load_corpus(nodes, edges);
    auto rnd = load_corpus(box.root / "n1" / "random_0" / "nodes.tsv", box.root / "n1" / "random_0" / "edges.tsv");
    CHECK(rnd.report.edges_dropped() == 0);
    CHECK(rnd.network.edge_count() == orig.network.edge_count());
}

TEST_CASE("evaluate on a synthetic corpus matches temporal_evaluation") {
    Sandbox box;
    REQUIRE(run({"synth", "--n", "1500", "--planted", "10", "--multiplier", "8", "--seed", "2", "--out",
                 box.root / "corpus"})
                .status == 0);
    const auto dir = box.root / "corpus";
    auto r = run({"evaluate", "--nodes", dir / "nodes.tsv", "--edges", dir / "edges.tsv", "--targets",
                  dir / "targets.txt", "--out", box.root / "eval", "--delta", "100", "--z", "0.02",
                  "--min-target-age", "10", "--max-age", "0", "--threads", "3"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    for (auto name : {"whole_dataset.json", "evaluation.json", "evaluation.csv", "trajectories.csv", "manifest.json"})
        CHECK(fs::exists(box.root / "eval" / name));

    auto corpus = load_corpus(dir / "nodes.tsv", dir / "edges.tsv");
    auto targets = resolve_ids(corpus.network, load_id_list(dir / "targets.txt"));
    EvaluationConfig cfg;
    cfg.rescale.delta = 100;
    cfg.z = 0.02;
    cfg.min_target_age_years = 10;
    cfg.max_age_years = 0;
    auto rep = temporal_evaluation(corpus.network, targets, cfg);
    CHECK_FALSE(rep.cohort.empty());
    write_report_csv(box.root / "expected.csv", rep);
    CHECK(slurp(box.root / "expected.csv") == slurp(box.root / "eval" / "evaluation.csv"));
}

TEST_CASE("stats and synth outputs") {
    Sandbox box;
    REQUIRE(run({"synth", "--n", "600", "--seed", "3", "--out", box.root / "corpus"}).status == 0);
    const auto dir = box.root / "corpus";
    auto r = run({"stats", "--nodes", dir / "nodes.tsv", "--edges", dir / "edges.tsv", "--out", box.root / "s",
                  "--dcm", "--realizations", "2", "--layers", "10"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    for (auto name : {"correlation_citing.csv", "correlation_cited.csv", "correlation_citing_raw.csv",
                      "correlation_cited_raw.csv", "correlation_citing_dcm.csv", "correlation_cited_dcm.csv",
                      "degree_in.csv", "degree_out.csv", "timing.json", "manifest.json"})
        CHECK(fs::exists(box.root / "s" / name));
    CHECK(r.out.find("tau_3 (all): ") != std::string::npos);
    auto timing = nlohmann::json::parse(slurp(box.root / "s" / "timing.json"));
    CHECK(timing["all"]["tau_3"]["k"] == 3);
}

TEST_CASE("output directory falls back to CITERANK_OUT") {
    Sandbox box;
    const auto nodes = box.write("nodes.tsv", kNodes), edges = box.write("edges.tsv", kEdges);
    ::setenv("CITERANK_OUT", (box.root / "env").c_str(), 1);
    auto r = run({"score", "--nodes", nodes, "--edges", edges, "--delta", "3"});
    ::unsetenv("CITERANK_OUT");
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(fs::exists(box.root / "env" / "scores_c.csv"));
    auto none = run({"score", "--nodes", nodes, "--edges", edges});
    CHECK(none.status != 0);
}

TEST_CASE("errors give a nonzero status and leave no partial output") {
    Sandbox box;
    const auto nodes = box.write("nodes.tsv", kNodes);
    const auto broken = box.write("edges.tsv", "2\t1\n3\n");
    auto r = run({"score", "--nodes", nodes, "--edges", broken, "--out", box.root / "o"});
    CHECK(r.status != 0);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.err.find(":2") != std::string::npos);
    CHECK_FALSE(fs::exists(box.root / "o" / "manifest.json"));

    CHECK(run({"score", "--edges", broken, "--out", box.root / "o"}).status != 0);
    CHECK(run({"evaluate", "--nodes", nodes, "--edges", box.write("e2.tsv", kEdges), "--out", box.root / "o"}).status != 0);
    CHECK(run({}).status != 0);
    CHECK(run({"frobnicate"}).status != 0);
    CHECK(run({"--version"}).status == 0);
}
