#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "citerank/corpus.hpp"
#include "citerank/error.hpp"

namespace citerank {

/**
 * The corpus span [first_date, last_date] cut into L layers of equal duration.
 * A citation belongs to the layer holding its citing node's issue date; the last
 * issue date falls in layer L-1. Increments are stored sparsely per layer as
 * (node, count) pairs sorted by node.
 */
class LayerDecomposition {
public:
    using Increments = std::vector<std::pair<NodeIndex, std::uint32_t>>;

    std::size_t layer_count() const { return edges_.size(); }
    Date origin() const { return origin_; }
    std::int32_t span_days() const { return span_days_; }
    double layer_days() const { return static_cast<double>(span_days_) / static_cast<double>(layer_count()); }

    /// Start of layer n in days since the epoch (n = L gives the end of the span).
    double boundary(std::size_t n) const;
    std::size_t layer_of(Date d) const;

    std::size_t edges_in(std::size_t n) const { return edges_[n]; }
    const Increments &in_increments(std::size_t n) const { return in_[n]; }
    const Increments &out_increments(std::size_t n) const { return out_[n]; }
    std::uint32_t in_increment(NodeIndex i, std::size_t n) const;
    std::uint32_t out_increment(NodeIndex j, std::size_t n) const;

    /// Index range [first, last) of nodes issued inside layer n.
    std::pair<NodeIndex, NodeIndex> nodes_in(std::size_t n) const { return {node_start_[n], node_start_[n + 1]}; }

    bool operator==(const LayerDecomposition &) const = default;

private:
    friend LayerDecomposition build_layers(const CitationNetwork &, std::size_t);

    Date origin_;
    std::int32_t span_days_ = 0;
    std::vector<std::size_t> edges_;
    std::vector<Increments> in_, out_;
    std::vector<NodeIndex> node_start_;
};

/// Throws Error when L == 0 or the corpus covers a single day.
LayerDecomposition build_layers(const CitationNetwork &network, std::size_t layers);

/// Expected number of citations from j to i in layer n: dkin(i,n) * dkout(j,n) / E(n), or 0 if E(n) = 0.
double expected_edges(const LayerDecomposition &layers, NodeIndex i, NodeIndex j, std::size_t n);

/// Stub matching could not remove every self, duplicate or time-reversed citation in a layer.
class RepairError : public Error {
public:
    RepairError(std::size_t layer, std::size_t remaining);
    std::size_t layer() const { return layer_; }

private:
    std::size_t layer_;
};

/**
 * One realization of the dynamic configuration model. Within each layer the
 * in-stubs are shuffled against the out-stubs, then forbidden pairs are repaired
 * by random swaps of cited endpoints (budget 100 * E(n) attempts per layer).
 * Every node keeps its per-layer in- and out-degree increments exactly; node ids
 * and dates are unchanged. Layer n draws from stream derive_seed(seed, n) of
 * mt19937_64, so a seed fixes the output. Throws RepairError on budget exhaustion.
 */
CitationNetwork sample_randomized(const CitationNetwork &network, std::size_t layers, std::uint64_t seed);

} // namespace citerank
