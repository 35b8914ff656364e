#include "citerank/nullmodel.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "citerank/random.hpp"

namespace citerank {

namespace {

std::uint32_t lookup(const LayerDecomposition::Increments &inc, NodeIndex node) {
    auto it = std::lower_bound(inc.begin(), inc.end(), node, [](const auto &p, NodeIndex v) { return p.first < v; });
    return it != inc.end() && it->first == node ? it->second : 0;
}

LayerDecomposition::Increments tally(std::vector<NodeIndex> nodes) {
    std::sort(nodes.begin(), nodes.end());
    LayerDecomposition::Increments out;
    for (NodeIndex v : nodes) {
        if (!out.empty() && out.back().first == v)
            ++out.back().second;
        else
            out.emplace_back(v, 1);
    }
    return out;
}

std::uint64_t pair_key(NodeIndex citing, NodeIndex cited) {
    return (static_cast<std::uint64_t>(citing) << 32) | cited;
}

} // namespace

double LayerDecomposition::boundary(std::size_t n) const {
    return static_cast<double>(origin_.days()) +
           static_cast<double>(span_days_) * static_cast<double>(n) / static_cast<double>(layer_count());
}

std::size_t LayerDecomposition::layer_of(Date d) const {
    const std::int64_t offset = d - origin_;
    if (offset <= 0)
        return 0;
    const auto l = static_cast<std::size_t>(offset * static_cast<std::int64_t>(layer_count()) / span_days_);
    return std::min(l, layer_count() - 1);
}

std::uint32_t LayerDecomposition::in_increment(NodeIndex i, std::size_t n) const { return lookup(in_[n], i); }
std::uint32_t LayerDecomposition::out_increment(NodeIndex j, std::size_t n) const { return lookup(out_[n], j); }

LayerDecomposition build_layers(const CitationNetwork &network, std::size_t layers) {
    if (layers == 0)
        throw Error("build_layers: layer count must be at least 1");
    if (network.empty() || network.last_date() == network.first_date())
        throw Error("build_layers: corpus spans a single day");

    LayerDecomposition d;
    d.origin_ = network.first_date();
    d.span_days_ = network.last_date() - network.first_date();
    d.edges_.assign(layers, 0);
    d.in_.resize(layers);
    d.out_.resize(layers);
    d.node_start_.assign(layers + 1, static_cast<NodeIndex>(network.node_count()));

    const auto n = static_cast<NodeIndex>(network.node_count());
    NodeIndex first = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        d.node_start_[l] = first;
        NodeIndex last = first;
        while (last < n && d.layer_of(network.date(last)) == l)
            ++last;
        std::vector<NodeIndex> cited;
        LayerDecomposition::Increments out;
        for (NodeIndex j = first; j < last; ++j) {
            auto refs = network.references(j);
            if (refs.empty())
                continue;
            out.emplace_back(j, static_cast<std::uint32_t>(refs.size()));
            cited.insert(cited.end(), refs.begin(), refs.end());
        }
        d.edges_[l] = cited.size();
        d.out_[l] = std::move(out);
        d.in_[l] = tally(std::move(cited));
        first = last;
    }
    return d;
}

double expected_edges(const LayerDecomposition &layers, NodeIndex i, NodeIndex j, std::size_t n) {
    const std::size_t e = layers.edges_in(n);
    if (e == 0)
        return 0.0;
    return static_cast<double>(layers.in_increment(i, n)) * static_cast<double>(layers.out_increment(j, n)) /
           static_cast<double>(e);
}

RepairError::RepairError(std::size_t layer, std::size_t remaining)
    : Error("dynamic configuration model: could not repair layer " + std::to_string(layer) + " (" +
            std::to_string(remaining) + " forbidden citations left); try another seed"),
      layer_(layer) {}

CitationNetwork sample_randomized(const CitationNetwork &network, std::size_t layers, std::uint64_t seed) {
    const LayerDecomposition d = build_layers(network, layers);
    std::vector<Edge> edges;
    edges.reserve(network.edge_count());

    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t e_count = d.edges_in(l);
        if (e_count == 0)
            continue;
        std::vector<Edge> pairs;
        pairs.reserve(e_count);
        for (const auto &[j, k] : d.out_increments(l))
            for (std::uint32_t c = 0; c < k; ++c)
                pairs.push_back({j, 0});
        std::vector<NodeIndex> in_stubs;
        in_stubs.reserve(e_count);
        for (const auto &[i, k] : d.in_increments(l))
            in_stubs.insert(in_stubs.end(), k, i);

        Rng rng(derive_seed(seed, l));
        rng.shuffle(std::span<NodeIndex>(in_stubs));
        for (std::size_t k = 0; k < e_count; ++k)
            pairs[k].cited = in_stubs[k];

        auto allowed = [&](NodeIndex citing, NodeIndex cited) {
            return citing != cited && network.date(cited) <= network.date(citing);
        };
        std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
        multiplicity.reserve(e_count * 2);
        for (const Edge &p : pairs)
            ++multiplicity[pair_key(p.citing, p.cited)];
        auto is_bad = [&](const Edge &p) {
            return !allowed(p.citing, p.cited) || multiplicity[pair_key(p.citing, p.cited)] > 1;
        };

        std::vector<std::size_t> bad;
        auto collect = [&] {
            bad.clear();
            for (std::size_t k = 0; k < e_count; ++k)
                if (is_bad(pairs[k]))
                    bad.push_back(k);
        };

        const std::size_t budget = 100 * e_count;
        std::size_t attempts = 0;
        for (collect(); !bad.empty() && attempts < budget; collect()) {
            while (!bad.empty() && attempts < budget) {
                const std::size_t slot = rng.below(bad.size());
                const std::size_t a = bad[slot];
                if (!is_bad(pairs[a])) {
                    bad[slot] = bad.back();
                    bad.pop_back();
                    continue;
                }
                ++attempts;
                const std::size_t b = rng.below(e_count);
                if (b == a)
                    continue;
                const Edge na{pairs[a].citing, pairs[b].cited};
                const Edge nb{pairs[b].citing, pairs[a].cited};
                if (!allowed(na.citing, na.cited) || na == nb)
                    continue;
                // A swap must fix edge a; edge b may turn bad, in which case the defect moves to b.
                --multiplicity[pair_key(pairs[a].citing, pairs[a].cited)];
                --multiplicity[pair_key(pairs[b].citing, pairs[b].cited)];
                if (multiplicity[pair_key(na.citing, na.cited)] == 0) {
                    pairs[a] = na;
                    pairs[b] = nb;
                }
                ++multiplicity[pair_key(pairs[a].citing, pairs[a].cited)];
                ++multiplicity[pair_key(pairs[b].citing, pairs[b].cited)];
                if (is_bad(pairs[b]))
                    bad.push_back(b);
            }
        }
        std::size_t remaining = 0;
        for (const Edge &p : pairs)
            remaining += is_bad(p);
        if (remaining)
            throw RepairError(l, remaining);
        edges.insert(edges.end(), pairs.begin(), pairs.end());
    }

    std::vector<std::string> ids(network.ids().begin(), network.ids().end());
    std::vector<Date> dates(network.dates().begin(), network.dates().end());
    IngestionReport report;
    CitationNetwork out = CitationNetwork::build(std::move(ids), std::move(dates), std::move(edges), &report);
    if (report.edges_dropped() != 0)
        throw Error("dynamic configuration model: produced an invalid citation");
    return out;
}

} // namespace citerank
