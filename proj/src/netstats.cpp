#include "citerank/netstats.hpp"

#include <algorithm>
#include <cmath>

#include "citerank/error.hpp"

namespace citerank {

namespace {

std::vector<double> log_edges(std::size_t lo, std::size_t hi, std::size_t bins) {
    if (lo == hi)
        return {static_cast<double>(lo), static_cast<double>(hi)};
    const double a = std::log(static_cast<double>(lo));
    const double b = std::log(static_cast<double>(hi));
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(bins));
        // exp(log) round-off would otherwise move integer edges such as sqrt(9) off the integer
        const double r = std::round(edges[i]);
        if (std::abs(edges[i] - r) <= 1e-12 * r)
            edges[i] = r;
    }
    edges.front() = static_cast<double>(lo);
    edges.back() = static_cast<double>(hi);
    return edges;
}

std::size_t bin_of(const std::vector<double> &edges, double k) {
    auto it = std::upper_bound(edges.begin(), edges.end(), k);
    auto b = static_cast<std::size_t>(it - edges.begin());
    b = b == 0 ? 0 : b - 1;
    return std::min(b, edges.size() - 2);
}

struct NodeSample {
    std::size_t indegree;
    double mean;
};

std::vector<NodeSample> samples(const NetworkView &view, Direction direction) {
    auto means = neighbor_mean_indegree(view, direction);
    std::vector<NodeSample> out;
    for (NodeIndex i = 0; i < view.size(); ++i)
        if (means[i])
            out.push_back({view.in_degree(i), *means[i]});
    return out;
}

std::vector<CurveBin> bin_samples(const std::vector<NodeSample> &s, const std::vector<double> &edges) {
    std::vector<CurveBin> bins(edges.size() - 1);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        bins[b].lo = edges[b];
        bins[b].hi = edges[b + 1];
    }
    for (const auto &x : s) {
        if (x.indegree == 0)
            continue;
        auto &bin = bins[bin_of(edges, static_cast<double>(x.indegree))];
        ++bin.count;
        bin.mean += x.mean;
    }
    for (auto &bin : bins)
        if (bin.count)
            bin.mean /= static_cast<double>(bin.count);
    for (const auto &x : s) {
        if (x.indegree == 0)
            continue;
        auto &bin = bins[bin_of(edges, static_cast<double>(x.indegree))];
        bin.std += (x.mean - bin.mean) * (x.mean - bin.mean);
    }
    for (auto &bin : bins)
        if (bin.count)
            bin.std = std::sqrt(bin.std / static_cast<double>(bin.count));
    return bins;
}

} // namespace

std::vector<std::optional<double>> neighbor_mean_indegree(const NetworkView &view, Direction direction) {
    std::vector<std::optional<double>> out(view.size());
    for (NodeIndex i = 0; i < view.size(); ++i) {
        auto nbrs = direction == Direction::Citing ? view.citers(i) : view.references(i);
        if (nbrs.empty())
            continue;
        double sum = 0.0;
        for (NodeIndex j : nbrs)
            sum += static_cast<double>(view.in_degree(j));
        out[i] = sum / static_cast<double>(nbrs.size());
    }
    return out;
}

CorrelationCurve neighbor_indegree_profile(const NetworkView &view, Direction direction, std::size_t bins) {
    if (view.empty())
        throw Error("neighbor_indegree_profile: empty view");
    if (bins == 0)
        throw Error("neighbor_indegree_profile: bin count must be positive");
    CorrelationCurve curve;
    curve.direction = direction;
    const auto s = samples(view, direction);

    std::map<std::size_t, std::pair<double, std::size_t>> by_degree;
    std::size_t kmin = 0, kmax = 0;
    for (const auto &x : s) {
        auto &slot = by_degree[x.indegree];
        slot.first += x.mean;
        ++slot.second;
        if (x.indegree > 0) {
            kmin = kmin == 0 ? x.indegree : std::min(kmin, x.indegree);
            kmax = std::max(kmax, x.indegree);
        }
    }
    for (const auto &[k, acc] : by_degree)
        curve.raw.push_back({k, acc.first / static_cast<double>(acc.second), acc.second});
    if (kmin > 0)
        curve.bins = bin_samples(s, log_edges(kmin, kmax, bins));
    return curve;
}

CorrelationCurve ensemble_profile(std::span<const CitationNetwork> networks, Direction direction, std::size_t bins) {
    if (networks.size() < 2)
        throw Error("ensemble_profile: needs at least two networks");
    if (bins == 0)
        throw Error("ensemble_profile: bin count must be positive");
    const auto &ref = networks.front();
    for (const auto &net : networks) {
        if (net.node_count() != ref.node_count() || !std::equal(net.dates().begin(), net.dates().end(), ref.dates().begin()) ||
            !std::equal(net.ids().begin(), net.ids().end(), ref.ids().begin()))
            throw Error("ensemble_profile: networks have different node sets");
    }
    std::vector<std::vector<NodeSample>> all;
    std::size_t kmin = 0, kmax = 0;
    for (const auto &net : networks) {
        all.push_back(samples(NetworkView::full(net), direction));
        for (const auto &x : all.back())
            if (x.indegree > 0) {
                kmin = kmin == 0 ? x.indegree : std::min(kmin, x.indegree);
                kmax = std::max(kmax, x.indegree);
            }
    }
    CorrelationCurve curve;
    curve.direction = direction;
    curve.realizations = networks.size();
    if (kmin == 0)
        return curve;
    const auto edges = log_edges(kmin, kmax, bins);
    std::vector<std::vector<CurveBin>> per;
    for (const auto &s : all)
        per.push_back(bin_samples(s, edges));

    curve.bins.resize(edges.size() - 1);
    for (std::size_t b = 0; b < curve.bins.size(); ++b) {
        auto &out = curve.bins[b];
        out.lo = edges[b];
        out.hi = edges[b + 1];
        for (const auto &r : per)
            if (r[b].count) {
                out.mean += r[b].mean;
                ++out.count;
            }
        if (out.count == 0)
            continue;
        out.mean /= static_cast<double>(out.count);
        for (const auto &r : per)
            if (r[b].count)
                out.std += (r[b].mean - out.mean) * (r[b].mean - out.mean);
        out.std = out.count > 1 ? std::sqrt(out.std / static_cast<double>(out.count - 1)) : 0.0;
    }
    return curve;
}

TimingStats citation_timing(const CitationNetwork &network, std::size_t k,
                            std::optional<std::span<const NodeIndex>> subset) {
    if (k == 0)
        throw Error("citation_timing: k must be at least 1");
    TimingStats stats;
    stats.k = k;
    stats.restricted = subset.has_value();
    double total = 0.0;
    auto visit = [&](NodeIndex i) {
        auto c = network.citers(i);
        if (c.size() < k)
            return;
        total += static_cast<double>(network.date(c[k - 1]) - network.date(i)) / kDaysPerYear;
        ++stats.nodes;
    };
    if (subset) {
        for (NodeIndex i : *subset)
            visit(i);
    } else {
        for (NodeIndex i = 0; i < network.node_count(); ++i)
            visit(i);
    }
    if (stats.nodes)
        stats.mean_years = total / static_cast<double>(stats.nodes);
    return stats;
}

std::optional<double> mean_citations(const CitationNetwork &network, std::optional<std::span<const NodeIndex>> subset) {
    double total = 0.0;
    std::size_t count = 0;
    if (subset) {
        for (NodeIndex i : *subset) {
            total += static_cast<double>(network.in_degree(i));
            ++count;
        }
    } else {
        total = static_cast<double>(network.edge_count());
        count = network.node_count();
    }
    if (count == 0)
        return std::nullopt;
    return total / static_cast<double>(count);
}

std::map<std::size_t, std::size_t> degree_histogram(const NetworkView &view, bool in_degree) {
    std::map<std::size_t, std::size_t> h;
    for (NodeIndex i = 0; i < view.size(); ++i)
        ++h[in_degree ? view.in_degree(i) : view.out_degree(i)];
    return h;
}

} // namespace citerank
