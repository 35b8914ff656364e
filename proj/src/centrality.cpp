#include "citerank/centrality.hpp"

#include <cmath>
#include <string>

#include "citerank/parallel.hpp"

namespace citerank {

std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::Citations:
        return "c";
    case Metric::PageRank:
        return "p";
    case Metric::RescaledCitations:
        return "R(c)";
    case Metric::RescaledPageRank:
        return "R(p)";
    }
    return "?";
}

std::string_view metric_slug(Metric m) {
    switch (m) {
    case Metric::Citations:
        return "c";
    case Metric::PageRank:
        return "p";
    case Metric::RescaledCitations:
        return "rc";
    case Metric::RescaledPageRank:
        return "rp";
    }
    return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics)
        if (name == metric_name(m) || name == metric_slug(m))
            return m;
    return std::nullopt;
}

void PageRankConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("pagerank: alpha must lie in (0, 1), got " + std::to_string(alpha));
    if (!(epsilon > 0.0))
        throw Error("pagerank: epsilon must be positive");
    if (max_iterations == 0)
        throw Error("pagerank: max_iterations must be at least 1");
}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : Error("pagerank did not converge after " + std::to_string(iterations) +
            " iterations (last L1 residual " + std::to_string(residual) + ")"),
      iterations_(iterations), residual_(residual) {}

ScoreVector citation_count(const NetworkView &view) {
    ScoreVector out{Metric::Citations, view.cutoff(), std::vector<double>(view.size())};
    for (NodeIndex i = 0; i < view.size(); ++i)
        out.values[i] = static_cast<double>(view.in_degree(i));
    return out;
}

PageRankResult pagerank(const NetworkView &view, const PageRankConfig &config) {
    config.validate();
    const std::size_t n = view.size();
    if (n == 0)
        throw Error("pagerank: empty view");

    const double inv_n = 1.0 / static_cast<double>(n);
    const double alpha = config.alpha;
    const double teleport = (1.0 - alpha) * inv_n;

    std::vector<double> score(n, inv_n), next(n), contrib(n);
    std::vector<double> block_dangling(block_count(n)), block_residual(block_count(n));

    // Citers are restricted to the view once; references never leave it.
    std::vector<std::size_t> cit_offsets(n + 1, 0);
    for (NodeIndex i = 0; i < n; ++i)
        cit_offsets[i + 1] = cit_offsets[i] + view.in_degree(i);
    std::vector<NodeIndex> cit_sources(cit_offsets[n]);
    for_each_block(n, config.threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto c = view.citers(static_cast<NodeIndex>(i));
            std::copy(c.begin(), c.end(), cit_sources.begin() + static_cast<std::ptrdiff_t>(cit_offsets[i]));
        }
    });

    std::vector<double> inv_out(n);
    for (NodeIndex j = 0; j < n; ++j) {
        auto k = view.out_degree(j);
        inv_out[j] = k ? 1.0 / static_cast<double>(k) : 0.0;
    }

    PageRankResult result;
    for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
        for_each_block(n, config.threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
            double dangling = 0.0;
            for (std::size_t j = lo; j < hi; ++j) {
                contrib[j] = score[j] * inv_out[j];
                if (inv_out[j] == 0.0)
                    dangling += score[j];
            }
            block_dangling[b] = dangling;
        });
        double dangling = 0.0;
        for (double d : block_dangling)
            dangling += d;
        const double base = alpha * dangling * inv_n + teleport;

        for_each_block(n, config.threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
            double residual = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                double sum = 0.0;
                for (std::size_t k = cit_offsets[i]; k < cit_offsets[i + 1]; ++k)
                    sum += contrib[cit_sources[k]];
                next[i] = alpha * sum + base;
                residual += std::abs(next[i] - score[i]);
            }
            block_residual[b] = residual;
        });
        double residual = 0.0;
        for (double r : block_residual)
            residual += r;

        score.swap(next);
        result.iterations = iter;
        result.residual = residual;
        if (residual < config.epsilon) {
            result.scores = ScoreVector{Metric::PageRank, view.cutoff(), std::move(score)};
            return result;
        }
    }
    throw ConvergenceError(result.iterations, result.residual);
}

} // namespace citerank
