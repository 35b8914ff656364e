#pragma once

// Test fixtures and independent oracles. Nothing here calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "citerank/corpus.hpp"
#include "citerank/random.hpp"

namespace citerank::testing {

struct RawNode {
    std::string id;
    std::string date;
};

inline CitationNetwork make_network(const std::vector<RawNode> &nodes,
                                    const std::vector<std::pair<std::string, std::string>> &edges,
                                    IngestionReport *report = nullptr) {
    std::vector<std::string> ids;
    std::vector<Date> dates;
    for (const auto &n : nodes) {
        ids.push_back(n.id);
        dates.push_back(*Date::parse(n.date));
    }
    std::vector<Edge> raw;
    for (const auto &[a, b] : edges) {
        auto ia = std::find(ids.begin(), ids.end(), a) - ids.begin();
        auto ib = std::find(ids.begin(), ids.end(), b) - ids.begin();
        raw.push_back({static_cast<NodeIndex>(ia), static_cast<NodeIndex>(ib)});
    }
    return CitationNetwork::build(ids, dates, raw, report);
}

/// Random directed graph on one issue date (so any orientation is legal), ids "1".."n".
inline CitationNetwork random_same_day_graph(std::size_t n, double edge_p, double dangling_p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> ids;
    std::vector<Date> dates(n, Date(2000, 1, 1));
    for (std::size_t i = 0; i < n; ++i)
        ids.push_back(std::to_string(i + 1));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < dangling_p)
            continue;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rng.uniform() < edge_p)
                edges.push_back({static_cast<NodeIndex>(i), static_cast<NodeIndex>(j)});
    }
    return CitationNetwork::build(ids, dates, edges);
}

/// Random growing corpus: dates spread over `span_days`, each node citing up to `max_refs` older-or-same-day nodes.
inline CitationNetwork random_corpus(std::size_t n, std::size_t max_refs, std::int32_t span_days, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> ids;
    std::vector<Date> dates;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("n" + std::to_string(rng.next() % 1000000) + "_" + std::to_string(i));
        dates.push_back(Date(2000, 1, 1) + static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(span_days) + 1)));
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        const auto refs = rng.below(max_refs + 1);
        for (std::uint64_t r = 0; r < refs; ++r) {
            const auto j = rng.below(n);
            if (dates[j] <= dates[i] && j != i)
                edges.push_back({static_cast<NodeIndex>(i), static_cast<NodeIndex>(j)});
        }
    }
    return CitationNetwork::build(ids, dates, edges);
}

/// Dense PageRank with explicit dangling redistribution, by Gaussian elimination with partial pivoting:
/// (I - alpha * S) p = (1 - alpha) / N, S column-stochastic with dangling columns 1/N.
inline std::vector<double> dense_pagerank(std::size_t n, const std::vector<Edge> &edges, double alpha) {
    std::vector<double> out_deg(n, 0.0);
    for (const auto &e : edges)
        out_deg[e.citing] += 1.0;
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        a[i][n] = (1.0 - alpha) / static_cast<double>(n);
    }
    for (const auto &e : edges)
        a[e.cited][e.citing] -= alpha / out_deg[e.citing];
    for (std::size_t j = 0; j < n; ++j)
        if (out_deg[j] == 0.0)
            for (std::size_t i = 0; i < n; ++i)
                a[i][j] -= alpha / static_cast<double>(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0)
                continue;
            for (std::size_t k = col; k <= n; ++k)
                a[r][k] -= factor * a[col][k];
        }
    }
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = a[i][n] / a[i][i];
    return p;
}

/// Members of node i's comparison window, enumerated from the membership rule:
/// the delta/2 oldest (newest) positions share the first (last) delta nodes; otherwise
/// j belongs iff i - floor(delta/2) <= j < i - floor(delta/2) + delta.
inline std::vector<std::size_t> window_members(std::size_t i, std::size_t delta, std::size_t n) {
    std::vector<std::size_t> out;
    if (delta >= n) {
        for (std::size_t j = 0; j < n; ++j)
            out.push_back(j);
        return out;
    }
    const std::size_t half = delta / 2;
    for (std::size_t j = 0; j < n; ++j) {
        bool in;
        if (i < half)
            in = j < delta;
        else if (i + (delta - half) > n)
            in = j >= n - delta;
        else
            in = j + half >= i && j < i - half + delta;
        if (in)
            out.push_back(j);
    }
    return out;
}

/// Two-pass population z-score of values[i] against values[members].
inline double zscore(const std::vector<double> &values, std::size_t i, const std::vector<std::size_t> &members) {
    double mean = 0.0;
    for (auto j : members)
        mean += values[j];
    mean /= static_cast<double>(members.size());
    double var = 0.0;
    for (auto j : members)
        var += (values[j] - mean) * (values[j] - mean);
    var /= static_cast<double>(members.size());
    if (var == 0.0)
        return 0.0;
    return (values[i] - mean) / std::sqrt(var);
}

} // namespace citerank::testing
