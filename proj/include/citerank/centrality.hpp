#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "citerank/corpus.hpp"
#include "citerank/error.hpp"

namespace citerank {

enum class Metric { Citations, PageRank, RescaledCitations, RescaledPageRank };

inline constexpr Metric kAllMetrics[] = {Metric::Citations, Metric::PageRank, Metric::RescaledCitations,
                                         Metric::RescaledPageRank};

/// "c", "p", "R(c)", "R(p)".
std::string_view metric_name(Metric m);
/// Accepts the names above plus the file-friendly spellings "rc" and "rp".
std::optional<Metric> parse_metric(std::string_view name);
/// "c", "p", "rc", "rp".
std::string_view metric_slug(Metric m);

/// Per-node scores for one metric on one view; values[i] belongs to node index i.
struct ScoreVector {
    Metric metric = Metric::Citations;
    Date cutoff;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

struct PageRankConfig {
    double alpha = 0.5;
    double epsilon = 1e-9;
    std::size_t max_iterations = 1000;
    unsigned threads = 1;

    /// Throws Error unless 0 < alpha < 1, epsilon > 0 and max_iterations >= 1.
    void validate() const;
};

struct PageRankResult {
    ScoreVector scores;
    std::size_t iterations = 0;
    double residual = 0.0;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(std::size_t iterations, double residual);
    std::size_t iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// In-degree of every node within the view.
ScoreVector citation_count(const NetworkView &view);

/**
 * PageRank by power iteration from the uniform vector:
 *
 *   p_i <- alpha * sum_{j cites i} p_j / kout_j + alpha * sum_{kout_j = 0} p_j / N + (1 - alpha) / N
 *
 * Dangling nodes spread their score over all N nodes. Iteration stops once the
 * L1 distance between successive vectors is strictly below epsilon; `iterations`
 * counts the updates performed. Every sum is reduced in fixed node order over
 * fixed-size blocks, so the result is bit-identical for any thread count.
 * Throws ConvergenceError after max_iterations updates, and Error on an empty view.
 */
PageRankResult pagerank(const NetworkView &view, const PageRankConfig &config = {});

} // namespace citerank
