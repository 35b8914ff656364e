#include "citerank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citerank/error.hpp"
#include "citerank/random.hpp"

namespace citerank {

namespace {

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0) {}

    void reset(const std::vector<double> &w) {
        std::fill(tree_.begin(), tree_.end(), 0.0);
        for (std::size_t i = 0; i < w.size(); ++i) {
            tree_[i + 1] += w[i];
            const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
            if (parent < tree_.size())
                tree_[parent] += tree_[i + 1];
        }
    }

    void add(std::size_t i, double delta) {
        for (++i; i < tree_.size(); i += i & (~i + 1))
            tree_[i] += delta;
    }

    double total(std::size_t count) const {
        double s = 0.0;
        for (std::size_t i = count; i > 0; i -= i & (~i + 1))
            s += tree_[i];
        return s;
    }

    /// Smallest index whose inclusive prefix sum exceeds u.
    std::size_t find(double u) const {
        std::size_t pos = 0;
        std::size_t step = std::size_t{1} << static_cast<unsigned>(std::floor(std::log2(static_cast<double>(tree_.size()))));
        for (; step > 0; step >>= 1) {
            if (pos + step < tree_.size() && tree_[pos + step] <= u) {
                pos += step;
                u -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<double> tree_;
};

} // namespace

void SynthConfig::validate() const {
    if (nodes < 10)
        throw Error("synth: need at least 10 nodes");
    if (!(mean_out_degree >= 1.0))
        throw Error("synth: mean out-degree must be at least 1");
    if (!(fitness_multiplier >= 1.0))
        throw Error("synth: fitness multiplier must be at least 1");
    if (!(span_years > 0.0))
        throw Error("synth: span must be positive");
    if (!(0.0 <= planted_from && planted_from < planted_to && planted_to <= 1.0))
        throw Error("synth: planted range must satisfy 0 <= from < to <= 1");
    const auto lo = static_cast<std::size_t>(planted_from * static_cast<double>(nodes));
    const auto hi = static_cast<std::size_t>(planted_to * static_cast<double>(nodes));
    if (planted > hi - lo)
        throw Error("synth: planted range holds fewer nodes than requested");
}

SynthCorpus generate(const SynthConfig &config) {
    config.validate();
    const std::size_t n = config.nodes;
    Rng rng(derive_seed(config.seed, 0));

    std::vector<std::string> ids(n);
    std::vector<Date> dates(n);
    const double span_days = config.span_years * kDaysPerYear;
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = std::to_string(i + 1);
        dates[i] = config.start + static_cast<std::int32_t>(std::floor(static_cast<double>(i) * span_days / static_cast<double>(n)));
    }

    std::vector<double> fitness(n, 1.0);
    std::vector<NodeIndex> planted;
    {
        const auto lo = static_cast<std::size_t>(config.planted_from * static_cast<double>(n));
        const auto hi = static_cast<std::size_t>(config.planted_to * static_cast<double>(n));
        std::vector<NodeIndex> pool(hi - lo);
        std::iota(pool.begin(), pool.end(), static_cast<NodeIndex>(lo));
        for (std::size_t k = 0; k < config.planted; ++k) {
            std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
            planted.push_back(pool[k]);
            fitness[pool[k]] = config.fitness_multiplier;
        }
        std::sort(planted.begin(), planted.end());
    }

    const bool aging = config.decay_days > 0.0;
    const double base_out = std::floor(config.mean_out_degree);
    const double extra_p = config.mean_out_degree - base_out;
    std::vector<std::size_t> indegree(n, 0);
    std::vector<double> weight(n, 0.0);
    double t_ref = dates[0].days();
    auto weight_of = [&](std::size_t j) {
        double w = std::pow(static_cast<double>(indegree[j] + 1), config.attachment_exponent) * fitness[j];
        if (aging)
            w *= std::exp((dates[j].days() - t_ref) / config.decay_days);
        return w;
    };

    Fenwick tree(n);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(config.mean_out_degree * static_cast<double>(n)) + n);
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n; ++i) {
        if (aging && (dates[i].days() - t_ref) / config.decay_days > 20.0) {
            // Keep the exp(date / decay) factors in range.
            t_ref = dates[i].days();
            for (std::size_t j = 0; j < i; ++j)
                weight[j] = weight_of(j);
            tree.reset(weight);
        }
        std::size_t out = static_cast<std::size_t>(base_out) + (rng.uniform() < extra_p ? 1 : 0);
        out = std::min(out, i);
        chosen.clear();
        if (out == i) {
            for (std::size_t j = 0; j < i; ++j)
                chosen.push_back(j);
        } else {
            std::size_t misses = 0;
            while (chosen.size() < out) {
                const double total = tree.total(i);
                std::size_t j = total > 0.0 && misses < 1000 ? tree.find(rng.uniform() * total) : rng.below(i);
                if (j >= i || std::find(chosen.begin(), chosen.end(), j) != chosen.end()) {
                    ++misses;
                    continue;
                }
                chosen.push_back(j);
                tree.add(j, -weight[j]);
            }
            for (std::size_t j : chosen)
                tree.add(j, weight[j]);
        }
        for (std::size_t j : chosen) {
            edges.push_back({static_cast<NodeIndex>(i), static_cast<NodeIndex>(j)});
            ++indegree[j];
            const double w = weight_of(j);
            tree.add(j, w - weight[j]);
            weight[j] = w;
        }
        weight[i] = weight_of(i);
        tree.add(i, weight[i]);
    }

    SynthCorpus out;
    out.network = CitationNetwork::build(std::move(ids), std::move(dates), std::move(edges));
    out.planted = std::move(planted);
    for (NodeIndex p : out.planted)
        out.planted_ids.push_back(out.network.id(p));
    return out;
}

} // namespace citerank
