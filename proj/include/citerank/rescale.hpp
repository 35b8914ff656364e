#pragma once

#include <cstddef>

#include "citerank/centrality.hpp"
#include "citerank/corpus.hpp"

namespace citerank {

/// Half-open range [begin, end) of chronological positions.
struct WindowRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool contains(std::size_t i) const { return begin <= i && i < end; }
    bool operator==(const WindowRange &) const = default;
};

/**
 * Comparison window of `position` among n chronologically ordered nodes.
 * The window holds min(delta, n) consecutive positions starting at
 * position - floor(delta / 2), shifted inwards near either end so it keeps
 * its full length: the oldest nodes share the first window and the most
 * recent share the last. For even delta the older side gets the extra slot,
 * e.g. n = 100, delta = 10, position 50 gives [45, 55).
 */
WindowRange window_bounds(std::size_t position, std::size_t delta, std::size_t n);

struct RescaleConfig {
    std::size_t delta = 15000;
    bool warn_on_clamp = true;
};

/**
 * Age-rescaled scores R_i = (s_i - mu_i) / sigma_i, where mu_i and sigma_i are the
 * mean and population standard deviation of s over node i's window (including i).
 * Windows with all-equal scores give R_i = 0. A delta larger than the view is
 * clamped to the view size with a warning; delta < 2 throws Error, as does a
 * score vector that is already rescaled or longer than the network.
 */
ScoreVector rescale(const ScoreVector &scores, const CitationNetwork &network, const RescaleConfig &config = {});

} // namespace citerank
