#include <doctest.h>

#include <cmath>

#include "citerank/log.hpp"
#include "citerank/rescale.hpp"
#include "support.hpp"

using namespace citerank;

namespace {

CitationNetwork chain_of(std::size_t n) {
    std::vector<std::string> ids;
    std::vector<Date> dates;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(std::to_string(i + 1));
        dates.push_back(Date(2000, 1, 1) + static_cast<std::int32_t>(i / 3));
    }
    return CitationNetwork::build(ids, dates, {});
}

ScoreVector scores_of(std::vector<double> v, Metric m = Metric::Citations) { return {m, Date{}, std::move(v)}; }

} // namespace

TEST_CASE("window bounds") {
    CHECK(window_bounds(50, 10, 100) == WindowRange{45, 55});
    CHECK(window_bounds(2, 10, 100) == WindowRange{0, 10});
    CHECK(window_bounds(97, 10, 100) == WindowRange{90, 100});
    CHECK(window_bounds(3, 5, 100) == WindowRange{1, 6});
    CHECK(window_bounds(0, 200, 100) == WindowRange{0, 100});
}

TEST_CASE("window bounds match the membership oracle exhaustively for small sizes") {
    for (std::size_t n = 1; n <= 60; ++n)
        for (std::size_t delta = 2; delta <= n + 2; ++delta)
            for (std::size_t i = 0; i < n; ++i) {
                const auto w = window_bounds(i, delta, n);
                const auto members = citerank::testing::window_members(i, delta, n);
                REQUIRE(w.size() == std::min(delta, n));
                REQUIRE(w.contains(i));
                REQUIRE(members.size() == w.size());
                REQUIRE(members.front() == w.begin);
                REQUIRE(members.back() + 1 == w.end);
            }
}

TEST_CASE("rescale examples") {
    auto net = chain_of(20);
    SUBCASE("constant scores give zero") {
        auto r = rescale(scores_of(std::vector<double>(20, 3.7)), net, {.delta = 6});
        for (double v : r.values)
            CHECK(v == 0.0);
        CHECK(r.metric == Metric::RescaledCitations);
    }
    SUBCASE("hand-computed window {0,0,0,4}") {
        auto small = chain_of(4);
        auto r = rescale(scores_of({0, 0, 0, 4}), small, {.delta = 4});
        // mu = 1, sigma = sqrt(3)
        CHECK(r.values[3] == doctest::Approx(3.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(r.values[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));
        const std::vector<double> v{0, 0, 0, 4};
        CHECK(r.values[3] == doctest::Approx(citerank::testing::zscore(v, 3, {0, 1, 2, 3})).epsilon(1e-12));
    }
    SUBCASE("pagerank maps to R(p)") {
        auto r = rescale(scores_of(std::vector<double>(20, 0.05), Metric::PageRank), net, {.delta = 4});
        CHECK(r.metric == Metric::RescaledPageRank);
        CHECK_THROWS_AS(rescale(r, net, {.delta = 4}), Error);
    }
}

TEST_CASE("rescale matches a two-pass oracle on random scores") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        const std::size_t n = 10 + rng.below(150);
        auto net = chain_of(n);
        std::vector<double> v(n);
        for (auto &x : v)
            x = rng.uniform() < 0.3 ? 0.0 : std::floor(rng.uniform() * 20.0);
        const std::size_t delta = 2 + rng.below(n - 1);
        auto r = rescale(scores_of(v), net, {.delta = delta});
        for (std::size_t i = 0; i < n; ++i) {
            const double expect = citerank::testing::zscore(v, i, citerank::testing::window_members(i, delta, n));
            REQUIRE(r.values[i] == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("rescale is affine invariant") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 50 + rng.below(200);
        auto net = chain_of(n);
        std::vector<double> v(n), w(n);
        const double a = 0.01 + 100.0 * rng.uniform();
        const double b = -1000.0 + 2000.0 * rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = rng.uniform() * rng.uniform();
            w[i] = a * v[i] + b;
        }
        const std::size_t delta = 2 + rng.below(n - 1);
        auto r1 = rescale(scores_of(v), net, {.delta = delta});
        auto r2 = rescale(scores_of(w), net, {.delta = delta});
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE(std::abs(r1.values[i] - r2.values[i]) <= 1e-9 * std::max(1.0, std::abs(r1.values[i])));
    }
}

TEST_CASE("oversized delta clamps with a warning") {
    std::vector<std::string> seen;
    set_warning_sink([&](const std::string &m) { seen.push_back(m); });
    auto net = chain_of(10);
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto clamped = rescale(scores_of(v), net, {.delta = 15000});
    auto exact = rescale(scores_of(v), net, {.delta = 10});
    CHECK(clamped.values == exact.values);
    CHECK(seen.size() == 1);
    auto quiet = rescale(scores_of(v), net, {.delta = 15000, .warn_on_clamp = false});
    CHECK(seen.size() == 1);
    set_warning_sink(nullptr);
    CHECK_THROWS_AS(rescale(scores_of(v), net, {.delta = 1}), Error);
}

TEST_CASE("block means of R stay near zero") {
    const std::size_t n = 20000, delta = 1000;
    auto net = chain_of(n);
    auto block_means = [&](const std::vector<double> &v) {
        auto r = rescale(scores_of(v), net, {.delta = delta});
        std::vector<double> means;
        for (std::size_t start = 0; start + delta <= n; start += delta) {
            double mean = 0.0;
            for (std::size_t i = start; i < start + delta; ++i)
                mean += r.values[i];
            means.push_back(mean / static_cast<double>(delta));
        }
        return means;
    };
    const double bound = 4.0 / std::sqrt(static_cast<double>(delta));
    Rng rng(5);

    SUBCASE("i.i.d. scores") {
        std::vector<double> v(n);
        for (auto &x : v)
            x = rng.uniform();
        for (double m : block_means(v))
            CHECK(std::abs(m) < bound);
    }
    SUBCASE("linear age trend, interior blocks") {
        // The shared windows at either end cannot remove a trend; centred windows do.
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = static_cast<double>(n - i) * 0.01 + rng.uniform();
        auto means = block_means(v);
        for (std::size_t b = 1; b + 1 < means.size(); ++b)
            CHECK(std::abs(means[b]) < bound);
    }
}

TEST_CASE("rescale is deterministic") {
    auto net = chain_of(500);
    Rng rng(9);
    std::vector<double> v(500);
    for (auto &x : v)
        x = rng.uniform();
    CHECK(rescale(scores_of(v), net, {.delta = 40}).values == rescale(scores_of(v), net, {.delta = 40}).values);
}
