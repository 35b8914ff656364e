#include <doctest.h>

#include <cmath>

#include "citerank/centrality.hpp"
#include "support.hpp"

using namespace citerank;
using citerank::testing::make_network;

TEST_CASE("citation count is the in-view indegree") {
    SUBCASE("no edges") {
        auto net = make_network({{"a", "2000-01-01"}, {"b", "2001-01-01"}}, {});
        auto c = citation_count(NetworkView::full(net));
        CHECK(c.values == std::vector<double>{0.0, 0.0});
        CHECK(c.metric == Metric::Citations);
    }
    SUBCASE("chain") {
        auto net = make_network({{"A", "2000-01-01"}, {"B", "2001-01-01"}, {"C", "2002-01-01"}}, {{"B", "A"}, {"C", "B"}});
        auto c = citation_count(NetworkView::full(net));
        CHECK(c.values[*net.find("A")] == 1.0);
        CHECK(c.values[*net.find("B")] == 1.0);
        CHECK(c.values[*net.find("C")] == 0.0);
        auto early = citation_count(snapshot(net, *Date::parse("2002-01-01")));
        CHECK(early.size() == 2);
        CHECK(early.values[*net.find("B")] == 0.0);
    }
    SUBCASE("matches an edge scan on random corpora") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto net = citerank::testing::random_corpus(200, 5, 1000, seed);
            const Date cutoff = Date(2000, 1, 1) + 600;
            auto view = snapshot(net, cutoff);
            std::vector<double> scan(view.size(), 0.0);
            for (const auto &e : net.edges())
                if (net.date(e.citing) < cutoff)
                    scan[e.cited] += 1.0;
            REQUIRE(citation_count(view).values == scan);
        }
    }
}

TEST_CASE("pagerank on tiny graphs") {
    SUBCASE("single node") {
        auto net = make_network({{"a", "2000-01-01"}}, {});
        auto pr = pagerank(NetworkView::full(net));
        CHECK(pr.scores.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("two nodes, B cites A") {
        // Hand solution: pA = .5 pB + .25 pA + .25, pB = .25 pA + .25  =>  pA = .6, pB = .4
        auto net = make_network({{"A", "2000-01-01"}, {"B", "2001-01-01"}}, {{"B", "A"}});
        auto pr = pagerank(NetworkView::full(net), {.alpha = 0.5});
        CHECK(pr.scores.values[*net.find("A")] == doctest::Approx(0.6).epsilon(1e-9));
        CHECK(pr.scores.values[*net.find("B")] == doctest::Approx(0.4).epsilon(1e-9));
        CHECK(pr.residual < 1e-9);
    }
    SUBCASE("no edges gives 1/N") {
        auto net = citerank::testing::random_same_day_graph(37, 0.0, 0.0, 1);
        auto pr = pagerank(NetworkView::full(net));
        for (double v : pr.scores.values)
            CHECK(v == doctest::Approx(1.0 / 37.0).epsilon(1e-14));
        CHECK(pr.iterations == 1);
    }
    SUBCASE("empty view is an error") {
        auto net = make_network({{"a", "2000-01-01"}}, {});
        CHECK_THROWS_AS(pagerank(snapshot(net, Date(1990, 1, 1))), Error);
    }
}

TEST_CASE("pagerank agrees with a dense linear solve") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + rng.below(120);
        auto net = citerank::testing::random_same_day_graph(n, 0.02 + 0.1 * rng.uniform(), 0.3 * rng.uniform(), seed);
        const auto exact = citerank::testing::dense_pagerank(n, net.edges(), 0.5);
        const auto pr = pagerank(NetworkView::full(net));
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(std::abs(pr.scores.values[i] - exact[i]) < 1e-8);
            REQUIRE(pr.scores.values[i] >= 0.5 / static_cast<double>(n) - 1e-15);
            sum += pr.scores.values[i];
        }
        REQUIRE(std::abs(sum - 1.0) < 1e-8);
        REQUIRE(pr.iterations <= 30);
    }
}

TEST_CASE("pagerank stays stochastic at every iteration") {
    auto net = citerank::testing::random_same_day_graph(80, 0.05, 0.2, 11);
    for (std::size_t cap = 1; cap <= 12; ++cap) {
        PageRankConfig cfg;
        cfg.epsilon = 1e-300;
        cfg.max_iterations = cap;
        try {
            pagerank(NetworkView::full(net), cfg);
            FAIL("expected non-convergence");
        } catch (const ConvergenceError &e) {
            CHECK(e.iterations() == cap);
            CHECK(e.residual() > 0.0);
        }
    }
    // Converged vectors sum to one within 10 epsilon.
    auto pr = pagerank(NetworkView::full(net));
    double sum = 0.0;
    for (double v : pr.scores.values)
        sum += v;
    CHECK(std::abs(sum - 1.0) <= 10 * 1e-9);
}

TEST_CASE("pagerank is bit-identical across thread counts") {
    auto net = citerank::testing::random_corpus(40000, 6, 5000, 3);
    PageRankConfig one, four;
    four.threads = 4;
    auto a = pagerank(NetworkView::full(net), one);
    auto b = pagerank(NetworkView::full(net), four);
    CHECK(a.iterations == b.iterations);
    CHECK(a.scores.values == b.scores.values);
}

TEST_CASE("pagerank config validation") {
    auto net = make_network({{"a", "2000-01-01"}}, {});
    auto view = NetworkView::full(net);
    CHECK_THROWS_AS(pagerank(view, {.alpha = 0.0}), Error);
    CHECK_THROWS_AS(pagerank(view, {.alpha = 1.0}), Error);
    CHECK_THROWS_AS(pagerank(view, {.alpha = 0.5, .epsilon = 0.0}), Error);
    CHECK_THROWS_AS(pagerank(view, {.alpha = 0.5, .epsilon = 1e-9, .max_iterations = 0}), Error);
}

TEST_CASE("metric names round-trip") {
    for (Metric m : kAllMetrics) {
        CHECK(parse_metric(metric_name(m)) == m);
        CHECK(parse_metric(metric_slug(m)) == m);
    }
    CHECK_FALSE(parse_metric("hits"));
}
