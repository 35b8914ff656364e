#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "citerank/corpus.hpp"

namespace citerank {

/**
 * Growing citation network with fitness, preferential attachment and aging.
 * Node t cites earlier nodes j without replacement with probability proportional to
 *
 *   (indegree_j + 1)^attachment_exponent * fitness_j * exp(-(date_t - date_j) / decay_days)
 *
 * Fitness is 1 except for the planted nodes, which get `fitness_multiplier`.
 * decay_days <= 0 disables aging.
 */
struct SynthConfig {
    std::size_t nodes = 10000;
    double mean_out_degree = 5.0;
    double attachment_exponent = 1.0;
    double decay_days = 5.0 * 365.25;
    std::size_t planted = 0;
    double fitness_multiplier = 1.0;
    /// Planted nodes are drawn from positions [planted_from, planted_to) * nodes.
    double planted_from = 0.1;
    double planted_to = 0.7;
    Date start{1950, 1, 1};
    double span_years = 50.0;
    std::uint64_t seed = 1;

    /// Throws Error unless nodes >= 10, mean_out_degree >= 1, fitness_multiplier >= 1
    /// and the planted range holds enough nodes.
    void validate() const;
};

struct SynthCorpus {
    CitationNetwork network;
    std::vector<NodeIndex> planted; ///< ascending
    std::vector<std::string> planted_ids;
};

/**
 * Node i (0-based) gets id "i+1" and date start + floor(i * span / nodes). Its
 * out-degree is floor(mean) or floor(mean) + 1, averaging `mean_out_degree`, and is
 * capped by the number of earlier nodes.
 */
SynthCorpus generate(const SynthConfig &config);

} // namespace citerank
