#include "citerank/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "citerank/log.hpp"

namespace citerank {

WindowRange window_bounds(std::size_t position, std::size_t delta, std::size_t n) {
    const std::size_t len = std::min(delta, n);
    const std::size_t half = delta / 2;
    std::size_t begin = position > half ? position - half : 0;
    begin = std::min(begin, n - len);
    return {begin, begin + len};
}

ScoreVector rescale(const ScoreVector &scores, const CitationNetwork &network, const RescaleConfig &config) {
    if (config.delta < 2)
        throw Error("rescale: delta must be at least 2");
    if (scores.metric == Metric::RescaledCitations || scores.metric == Metric::RescaledPageRank)
        throw Error("rescale: scores are already rescaled");
    const std::size_t n = scores.size();
    if (n > network.node_count())
        throw Error("rescale: score vector is longer than the network");

    ScoreVector out{scores.metric == Metric::Citations ? Metric::RescaledCitations : Metric::RescaledPageRank,
                    scores.cutoff, std::vector<double>(n, 0.0)};
    if (n == 0)
        return out;

    std::size_t delta = config.delta;
    if (delta > n) {
        if (config.warn_on_clamp)
            warn("rescale: delta " + std::to_string(delta) + " exceeds the " + std::to_string(n) +
                 " nodes in view; using " + std::to_string(n));
        delta = n;
    }

    const auto &s = scores.values;

    // run_end[i]: first position after i holding a different score.
    std::vector<std::size_t> run_end(n);
    run_end[n - 1] = n;
    for (std::size_t i = n - 1; i-- > 0;)
        run_end[i] = s[i] == s[i + 1] ? run_end[i + 1] : i + 1;

    // Centering on the global mean keeps the moment sums well conditioned.
    long double shift = 0.0L;
    for (double v : s)
        shift += v;
    shift /= static_cast<long double>(n);

    std::vector<long double> sum1(n + 1, 0.0L), sum2(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        const long double x = static_cast<long double>(s[i]) - shift;
        sum1[i + 1] = sum1[i] + x;
        sum2[i + 1] = sum2[i] + x * x;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const WindowRange w = window_bounds(i, delta, n);
        if (run_end[w.begin] >= w.end)
            continue; // constant window
        const long double len = static_cast<long double>(w.size());
        long double mean = (sum1[w.end] - sum1[w.begin]) / len;
        long double var = (sum2[w.end] - sum2[w.begin]) / len - mean * mean;
        if (!(var > 0.0L)) {
            // Cancellation swallowed a tiny but nonzero spread; fall back to two passes.
            mean = 0.0L;
            for (std::size_t j = w.begin; j < w.end; ++j)
                mean += static_cast<long double>(s[j]) - shift;
            mean /= len;
            var = 0.0L;
            for (std::size_t j = w.begin; j < w.end; ++j) {
                const long double d = static_cast<long double>(s[j]) - shift - mean;
                var += d * d;
            }
            var /= len;
        }
        const long double x = static_cast<long double>(s[i]) - shift;
        out.values[i] = static_cast<double>((x - mean) / std::sqrt(var));
    }
    return out;
}

} // namespace citerank
