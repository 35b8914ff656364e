#include "citerank/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "citerank/parallel.hpp"

namespace citerank {

RankVector rank_nodes(const ScoreVector &scores) {
    const std::size_t n = scores.size();
    const auto &s = scores.values;
    if (std::any_of(s.begin(), s.end(), [](double v) { return std::isnan(v); }))
        throw Error("rank_nodes: NaN score");
    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), NodeIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return s[a] > s[b]; });
    RankVector out{scores.metric, scores.cutoff, std::vector<std::uint32_t>(n)};
    for (std::size_t r = 0; r < n; ++r)
        out.ranks[order[r]] = static_cast<std::uint32_t>(r + 1);
    return out;
}

std::size_t top_count(double fraction, std::size_t n) {
    if (n == 0)
        return 0;
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

BiasProfile bias_profile(const RankVector &ranks, double f, std::size_t groups) {
    if (!(f > 0.0 && f < 1.0))
        throw Error("bias_profile: f must lie in (0, 1)");
    const std::size_t n = ranks.size();
    if (groups == 0 || groups > n)
        throw Error("bias_profile: need between 1 and N groups");
    BiasProfile p;
    p.metric = ranks.metric;
    p.f = f;
    p.top = top_count(f, n);
    p.expected = f * static_cast<double>(n) / static_cast<double>(groups);
    p.group_sizes.resize(groups);
    p.counts.assign(groups, 0);
    std::size_t g = 0;
    for (std::size_t b = 0; b < groups; ++b)
        p.group_sizes[b] = (b + 1) * n / groups - b * n / groups;
    std::size_t group_end = p.group_sizes[0];
    for (NodeIndex i = 0; i < n; ++i) {
        while (i >= group_end)
            group_end += p.group_sizes[++g];
        if (ranks.ranks[i] <= p.top)
            ++p.counts[g];
    }
    return p;
}

RankingRatios ranking_ratio(std::span<const RankVector> ranks, std::span<const NodeIndex> targets,
                            std::span<const NodeIndex> exclude) {
    if (ranks.empty())
        throw Error("ranking_ratio: no rank vectors");
    const std::size_t n = ranks.front().size();
    for (const auto &r : ranks)
        if (r.size() != n)
            throw Error("ranking_ratio: rank vectors cover different views");

    RankingRatios out;
    for (const auto &r : ranks)
        out.metrics.push_back(r.metric);
    const std::set<NodeIndex> skip(exclude.begin(), exclude.end());
    std::set<NodeIndex> unique(targets.begin(), targets.end());
    for (NodeIndex t : unique) {
        if (skip.count(t)) {
            ++out.excluded;
            continue;
        }
        if (t >= n) {
            ++out.absent;
            continue;
        }
        std::uint32_t best = ranks.front().ranks[t];
        for (const auto &r : ranks)
            best = std::min(best, r.ranks[t]);
        std::vector<double> row;
        row.reserve(ranks.size());
        for (const auto &r : ranks)
            row.push_back(static_cast<double>(r.ranks[t]) / static_cast<double>(best));
        out.targets.push_back(t);
        out.ratios.push_back(std::move(row));
    }
    if (!out.targets.empty()) {
        out.average.assign(ranks.size(), 0.0);
        for (const auto &row : out.ratios)
            for (std::size_t m = 0; m < row.size(); ++m)
                out.average[m] += row[m];
        for (double &a : out.average)
            a /= static_cast<double>(out.targets.size());
    }
    return out;
}

std::optional<double> identification_rate(const RankVector &ranks, std::span<const NodeIndex> targets, double z) {
    if (!(z > 0.0 && z < 1.0))
        throw Error("identification_rate: z must lie in (0, 1)");
    const std::size_t top = top_count(z, ranks.size());
    std::size_t present = 0, hits = 0;
    for (NodeIndex t : std::set<NodeIndex>(targets.begin(), targets.end())) {
        if (t >= ranks.size())
            continue;
        ++present;
        if (ranks.ranks[t] <= top)
            ++hits;
    }
    if (present == 0)
        return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(present);
}

std::vector<ScoreVector> compute_metrics(const NetworkView &view, std::span<const Metric> metrics,
                                         const PageRankConfig &pagerank_config, const RescaleConfig &rescale_config) {
    auto wants = [&](Metric a, Metric b) {
        return std::find(metrics.begin(), metrics.end(), a) != metrics.end() ||
               std::find(metrics.begin(), metrics.end(), b) != metrics.end();
    };
    std::optional<ScoreVector> c, p;
    if (wants(Metric::Citations, Metric::RescaledCitations))
        c = citation_count(view);
    if (wants(Metric::PageRank, Metric::RescaledPageRank))
        p = pagerank(view, pagerank_config).scores;
    std::vector<ScoreVector> out;
    for (Metric m : metrics) {
        switch (m) {
        case Metric::Citations:
            out.push_back(*c);
            break;
        case Metric::PageRank:
            out.push_back(*p);
            break;
        case Metric::RescaledCitations:
            out.push_back(rescale(*c, view.network(), rescale_config));
            break;
        case Metric::RescaledPageRank:
            out.push_back(rescale(*p, view.network(), rescale_config));
            break;
        }
    }
    return out;
}

const AgeBin *EvaluationReport::bin(std::size_t index) const {
    auto it = std::lower_bound(bins.begin(), bins.end(), index, [](const AgeBin &b, std::size_t v) { return b.index < v; });
    return it != bins.end() && it->index == index ? &*it : nullptr;
}

std::size_t EvaluationReport::metric_slot(Metric m) const {
    auto it = std::find(metrics.begin(), metrics.end(), m);
    if (it == metrics.end())
        throw Error("report does not contain metric " + std::string(metric_name(m)));
    return static_cast<std::size_t>(it - metrics.begin());
}

std::vector<double> snapshot_grid(const CitationNetwork &network, double cadence_days) {
    if (!(cadence_days > 0.0))
        throw Error("snapshot_grid: cadence must be positive");
    std::vector<double> grid;
    if (network.empty())
        return grid;
    const double first = network.first_date().days();
    const double last = network.last_date().days();
    for (std::size_t k = 1;; ++k) {
        double t = first + static_cast<double>(k) * cadence_days;
        // keep cutoffs that are whole days in exact arithmetic on the whole day
        if (const double r = std::round(t); std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t)))
            t = r;
        grid.push_back(t);
        if (t > last)
            break;
    }
    return grid;
}

namespace {

void validate(const EvaluationConfig &config) {
    if (config.metrics.empty())
        throw Error("evaluation: no metrics");
    if (!(config.cadence_days > 0.0))
        throw Error("evaluation: cadence must be positive");
    if (!(config.z > 0.0 && config.z < 1.0))
        throw Error("evaluation: z must lie in (0, 1)");
    if (config.min_target_age_years < 0.0 || config.max_age_years < 0.0)
        throw Error("evaluation: ages must be non-negative");
    config.pagerank.validate();
    if (config.rescale.delta < 2)
        throw Error("evaluation: delta must be at least 2");
}

std::vector<NodeIndex> select_cohort(const CitationNetwork &network, std::span<const NodeIndex> targets,
                                     const EvaluationConfig &config) {
    const std::set<NodeIndex> skip(config.exclude.begin(), config.exclude.end());
    std::vector<NodeIndex> cohort;
    if (network.empty())
        return cohort;
    const double min_age_days = config.min_target_age_years * kDaysPerYear;
    for (NodeIndex t : std::set<NodeIndex>(targets.begin(), targets.end())) {
        if (t >= network.node_count() || skip.count(t))
            continue;
        if (static_cast<double>(network.last_date() - network.date(t)) >= min_age_days)
            cohort.push_back(t);
    }
    return cohort;
}

// Runs every snapshot and returns its observations, grouped by snapshot in grid order.
std::vector<std::vector<Observation>> observe(const CitationNetwork &network, std::span<const NodeIndex> cohort,
                                              const EvaluationConfig &config, std::size_t *snapshot_count) {
    const auto grid = snapshot_grid(network, config.cadence_days);
    *snapshot_count = grid.size();
    const double max_age_days = config.max_age_years * kDaysPerYear;
    std::vector<std::vector<Observation>> per(grid.size());

    PageRankConfig pr = config.pagerank;
    RescaleConfig rs = config.rescale;
    rs.warn_on_clamp = false;
    const unsigned outer = std::max(1u, config.threads);
    pr.threads = grid.size() > 1 ? 1 : outer;

    parallel_for(grid.size(), outer, [&](std::size_t s) {
        const double t = grid[s];
        const Date cutoff(static_cast<std::int32_t>(std::ceil(t)));
        const NetworkView view(network, cutoff);
        std::vector<NodeIndex> present;
        for (NodeIndex target : cohort) {
            if (!view.contains(target))
                break;
            const double age = t - network.date(target).days();
            if (max_age_days > 0.0 && age >= max_age_days)
                continue;
            present.push_back(target);
        }
        if (present.empty())
            return;
        std::vector<RankVector> ranks;
        for (const auto &scores : compute_metrics(view, config.metrics, pr, rs))
            ranks.push_back(rank_nodes(scores));
        for (NodeIndex target : present) {
            Observation o;
            o.target = target;
            o.snapshot = s + 1;
            o.cutoff_days = t;
            o.age_days = t - network.date(target).days();
            o.age_bin = static_cast<std::size_t>(std::floor(o.age_days / config.cadence_days + 1e-9));
            o.view_size = view.size();
            o.cited = view.in_degree(target) > 0;
            for (const auto &r : ranks)
                o.ranks.push_back(r.ranks[target]);
            per[s].push_back(std::move(o));
        }
    });
    return per;
}

} // namespace

EvaluationReport temporal_evaluation(const CitationNetwork &network, std::span<const NodeIndex> targets,
                                     const EvaluationConfig &config) {
    validate(config);
    EvaluationReport report;
    report.metrics = config.metrics;
    report.cadence_days = config.cadence_days;
    report.z = config.z;
    report.min_target_age_years = config.min_target_age_years;
    report.max_age_years = config.max_age_years;
    report.targets_requested = targets.size();
    report.cohort = select_cohort(network, targets, config);

    const auto per = observe(network, report.cohort, config, &report.snapshots);
    const std::size_t m_count = config.metrics.size();

    struct Acc {
        std::size_t n = 0;
        std::vector<double> ratio_sum;
        std::vector<std::size_t> hits;
    };
    std::map<std::size_t, Acc> acc;
    for (const auto &snap : per) {
        for (const auto &o : snap) {
            auto &a = acc[o.age_bin];
            if (a.ratio_sum.empty()) {
                a.ratio_sum.assign(m_count, 0.0);
                a.hits.assign(m_count, 0);
            }
            ++a.n;
            const std::uint32_t best = *std::min_element(o.ranks.begin(), o.ranks.end());
            const std::size_t top = top_count(config.z, o.view_size);
            for (std::size_t m = 0; m < m_count; ++m) {
                a.ratio_sum[m] += static_cast<double>(o.ranks[m]) / static_cast<double>(best);
                if (o.ranks[m] <= top)
                    ++a.hits[m];
            }
        }
    }
    for (const auto &[index, a] : acc) {
        AgeBin bin;
        bin.index = index;
        bin.age_lo_years = static_cast<double>(index) * config.cadence_days / kDaysPerYear;
        bin.age_hi_years = static_cast<double>(index + 1) * config.cadence_days / kDaysPerYear;
        bin.n_targets = a.n;
        for (std::size_t m = 0; m < m_count; ++m) {
            bin.avg_ranking_ratio.push_back(a.ratio_sum[m] / static_cast<double>(a.n));
            bin.identification_rate.push_back(static_cast<double>(a.hits[m]) / static_cast<double>(a.n));
        }
        report.bins.push_back(std::move(bin));
    }
    if (config.keep_observations)
        for (const auto &snap : per)
            report.observations.insert(report.observations.end(), snap.begin(), snap.end());
    return report;
}

std::vector<DifferenceCurve> null_comparison(const EvaluationReport &real, std::span<const EvaluationReport> random) {
    if (random.empty())
        throw Error("null_comparison: no randomized reports");
    for (const auto &r : random) {
        if (r.metrics != real.metrics || r.cadence_days != real.cadence_days || r.z != real.z ||
            r.min_target_age_years != real.min_target_age_years || r.max_age_years != real.max_age_years ||
            r.cohort != real.cohort)
            throw Error("null_comparison: randomized report was produced with a different configuration");
    }
    std::vector<DifferenceCurve> curves;
    for (std::size_t m = 0; m < real.metrics.size(); ++m) {
        DifferenceCurve curve;
        curve.metric = real.metrics[m];
        for (const auto &bin : real.bins) {
            std::vector<double> ratios, rates;
            for (const auto &r : random)
                if (const AgeBin *b = r.bin(bin.index)) {
                    ratios.push_back(b->avg_ranking_ratio[m]);
                    rates.push_back(b->identification_rate[m]);
                }
            if (ratios.empty())
                continue;
            auto mean_se = [](const std::vector<double> &v) {
                const double n = static_cast<double>(v.size());
                // shifted by the first value so identical inputs give their value back exactly
                double shift = 0.0;
                for (double x : v)
                    shift += x - v.front();
                const double mean = v.front() + shift / n;
                if (v.size() < 2)
                    return std::pair{mean, 0.0};
                double ss = 0.0;
                for (double x : v)
                    ss += (x - mean) * (x - mean);
                return std::pair{mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
            };
            const auto [ratio_mean, ratio_se] = mean_se(ratios);
            const auto [rate_mean, rate_se] = mean_se(rates);
            DifferencePoint p;
            p.age_bin = bin.index;
            p.age_lo_years = bin.age_lo_years;
            p.ratio_difference = bin.avg_ranking_ratio[m] - ratio_mean;
            p.ratio_stderr = ratio_se;
            p.rate_difference = bin.identification_rate[m] - rate_mean;
            p.rate_stderr = rate_se;
            p.realizations = ratios.size();
            curve.points.push_back(p);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<TrajectoryRow> trajectory_export(const CitationNetwork &network, std::span<const NodeIndex> targets,
                                             const EvaluationConfig &config) {
    EvaluationConfig cfg = config;
    cfg.keep_observations = true;
    const auto report = temporal_evaluation(network, targets, cfg);
    std::vector<TrajectoryRow> rows;
    rows.reserve(report.observations.size());
    for (const auto &o : report.observations) {
        TrajectoryRow row;
        row.target = o.target;
        row.snapshot = o.snapshot;
        row.cutoff = Date(static_cast<std::int32_t>(std::ceil(o.cutoff_days)));
        row.age_years = o.age_days / kDaysPerYear;
        row.view_size = o.view_size;
        row.cited = o.cited;
        row.ranks = o.ranks;
        for (auto r : o.ranks)
            row.normalized_ranks.push_back(static_cast<double>(r) / static_cast<double>(o.view_size));
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) { return a.target < b.target; });
    return rows;
}

} // namespace citerank
