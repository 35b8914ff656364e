#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "citerank/corpus.hpp"
#include "citerank/error.hpp"

namespace citerank {

/// Citing: a node's citers. Cited: the nodes it references.
enum class Direction { Citing, Cited };

struct CurvePoint {
    std::size_t indegree = 0;
    double mean = 0.0;      ///< average over nodes with this indegree
    std::size_t count = 0;  ///< nodes with this indegree and at least one neighbor
};

struct CurveBin {
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double std = 0.0;
    /// Nodes in the bin; for ensembles, realizations with a non-empty bin.
    std::size_t count = 0;
};

struct CorrelationCurve {
    Direction direction = Direction::Citing;
    std::vector<CurvePoint> raw;
    std::vector<CurveBin> bins;
    std::size_t realizations = 1;
};

/// Per node: mean in-view indegree of its neighbors in `direction`, nullopt when it has none.
std::vector<std::optional<double>> neighbor_mean_indegree(const NetworkView &view, Direction direction);

/**
 * Neighbor-indegree profile: each node's neighbor mean is grouped by the node's
 * own indegree (raw points), then grouped into `bins` bins of equal width in
 * log(indegree) spanning the observed indegrees >= 1. Bins are [lo, hi) except the
 * last, which is closed; their mean and population std weight every node once.
 * Indegree-0 nodes appear among the raw points only.
 */
CorrelationCurve neighbor_indegree_profile(const NetworkView &view, Direction direction, std::size_t bins = 10);

/**
 * Mean and sample standard deviation, across realizations, of each log bin's mean.
 * Bin edges span the indegree range of all realizations. Needs at least two
 * networks with identical node ids and dates; throws Error otherwise.
 */
CorrelationCurve ensemble_profile(std::span<const CitationNetwork> networks, Direction direction,
                                  std::size_t bins = 10);

struct TimingStats {
    std::size_t k = 0;
    std::optional<double> mean_years; ///< nullopt when no node qualifies
    std::size_t nodes = 0;            ///< nodes with at least k citations
    bool restricted = false;
};

/**
 * Mean time from issue to the k-th citation, over nodes with final indegree >= k
 * (restricted to `subset` when given). Citations arrive at the citing node's issue
 * date, ordered by (date, id); years are 365.25 days. Throws Error if k == 0.
 */
TimingStats citation_timing(const CitationNetwork &network, std::size_t k,
                            std::optional<std::span<const NodeIndex>> subset = std::nullopt);

/// Mean final indegree over all nodes, or over `subset`. nullopt for an empty set.
std::optional<double> mean_citations(const CitationNetwork &network,
                                     std::optional<std::span<const NodeIndex>> subset = std::nullopt);

/// degree -> number of nodes, within the view.
std::map<std::size_t, std::size_t> degree_histogram(const NetworkView &view, bool in_degree);

} // namespace citerank
