#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citerank/centrality.hpp"
#include "citerank/corpus.hpp"
#include "citerank/rescale.hpp"

namespace citerank {

inline constexpr const char *kTieRule = "score-desc/chrono-asc";

/// rank[i] in 1..N for node i; 1 is best.
struct RankVector {
    Metric metric = Metric::Citations;
    Date cutoff;
    std::vector<std::uint32_t> ranks;

    std::size_t size() const { return ranks.size(); }
    /// rank / N, the system-size-normalized position.
    double normalized(NodeIndex i) const { return static_cast<double>(ranks[i]) / static_cast<double>(ranks.size()); }
};

/// Ranks by descending score; equal scores go to the older node (lower index), so
/// ties follow the chronological order, ids breaking same-day ties.
RankVector rank_nodes(const ScoreVector &scores);

/// Size of a top-fraction list: round(fraction * n), at least 1, at most n.
std::size_t top_count(double fraction, std::size_t n);

struct BiasProfile {
    Metric metric = Metric::Citations;
    double f = 0.005;
    std::size_t top = 0;                   ///< round(f * N), at least 1
    std::vector<std::size_t> group_sizes;  ///< chronological groups, oldest first
    std::vector<std::size_t> counts;       ///< members of each group in the top list
    double expected = 0.0;                 ///< f * N / groups
};

/// Throws Error unless 0 < f < 1 and 1 <= groups <= N.
BiasProfile bias_profile(const RankVector &ranks, double f = 0.005, std::size_t groups = 40);

struct RankingRatios {
    std::vector<Metric> metrics;
    std::vector<NodeIndex> targets;         ///< contributing targets, ascending
    std::vector<std::vector<double>> ratios; ///< [target][metric]
    std::vector<double> average;             ///< per metric; empty if no target contributes
    std::size_t absent = 0;                  ///< targets outside the ranked view
    std::size_t excluded = 0;                ///< targets dropped by the exclusion list
};

/**
 * Per-target ranking ratio r_i(m) / min_m' r_i(m') and its average per metric.
 * All rank vectors must cover the same view. Targets outside the view or listed
 * in `exclude` are skipped and counted.
 */
RankingRatios ranking_ratio(std::span<const RankVector> ranks, std::span<const NodeIndex> targets,
                            std::span<const NodeIndex> exclude = {});

/// Fraction of in-view targets ranked within the top top_count(z, N). nullopt if none is in view.
std::optional<double> identification_rate(const RankVector &ranks, std::span<const NodeIndex> targets, double z);

/// Scores for `metrics` on one view, in the order requested. PageRank is computed once if both p and R(p) are asked.
std::vector<ScoreVector> compute_metrics(const NetworkView &view, std::span<const Metric> metrics,
                                         const PageRankConfig &pagerank_config, const RescaleConfig &rescale_config);

struct EvaluationConfig {
    std::vector<Metric> metrics{std::begin(kAllMetrics), std::end(kAllMetrics)};
    double cadence_days = kDaysPerYear / 2.0;
    double z = 0.005;
    /// Cohort: targets at least this old at the last issue date.
    double min_target_age_years = 20.0;
    /// Ages at or beyond this are not recorded; 0 records every age.
    double max_age_years = 0.0;
    PageRankConfig pagerank;
    RescaleConfig rescale;
    std::vector<NodeIndex> exclude;
    unsigned threads = 1;
    bool keep_observations = false;
};

/// One target seen at one snapshot.
struct Observation {
    NodeIndex target = 0;
    std::size_t snapshot = 0;   ///< k >= 1; cutoff = first date + k * cadence
    double cutoff_days = 0.0;   ///< days since the epoch (fractional)
    double age_days = 0.0;
    std::size_t age_bin = 0;    ///< floor(age / cadence)
    std::size_t view_size = 0;
    bool cited = false;         ///< at least one citation within the view
    std::vector<std::uint32_t> ranks; ///< per metric, config order
};

struct AgeBin {
    std::size_t index = 0;
    double age_lo_years = 0.0;
    double age_hi_years = 0.0;
    std::size_t n_targets = 0;
    std::vector<double> avg_ranking_ratio;    ///< per metric
    std::vector<double> identification_rate;  ///< per metric
};

struct EvaluationReport {
    std::vector<Metric> metrics;
    double cadence_days = 0.0;
    double z = 0.0;
    double min_target_age_years = 0.0;
    double max_age_years = 0.0;
    std::vector<NodeIndex> cohort;
    std::size_t targets_requested = 0;
    std::size_t snapshots = 0;
    std::vector<AgeBin> bins;                 ///< ascending, only bins with observations
    std::vector<Observation> observations;    ///< filled when keep_observations is set

    const AgeBin *bin(std::size_t index) const;
    std::size_t metric_slot(Metric m) const;
};

/// Snapshot cutoffs, in fractional days since the epoch: first + k * cadence for
/// k = 1..K, where the K-th is the first past the last issue date.
std::vector<double> snapshot_grid(const CitationNetwork &network, double cadence_days);

/**
 * Six-month style evaluation. At every grid cutoff all metrics are computed on
 * the view, ranked, and each cohort target already issued contributes its
 * ranking ratio and top-z membership to the age bin floor(age / cadence).
 * Snapshots run in parallel on `threads` workers; aggregation follows snapshot
 * order so the report does not depend on the thread count.
 */
EvaluationReport temporal_evaluation(const CitationNetwork &network, std::span<const NodeIndex> targets,
                                     const EvaluationConfig &config);

struct DifferencePoint {
    std::size_t age_bin = 0;
    double age_lo_years = 0.0;
    double ratio_difference = 0.0;
    double ratio_stderr = 0.0;
    double rate_difference = 0.0;
    double rate_stderr = 0.0;
    std::size_t realizations = 0;
};

struct DifferenceCurve {
    Metric metric = Metric::Citations;
    std::vector<DifferencePoint> points;
};

/**
 * Real minus ensemble mean per metric and age bin, with the ensemble standard
 * error (sample std / sqrt(n)). Bins absent from every randomized report are
 * skipped. Throws Error on an empty ensemble or when metrics, cadence, z, cohort or age limits differ.
 */
std::vector<DifferenceCurve> null_comparison(const EvaluationReport &real, std::span<const EvaluationReport> random);

struct TrajectoryRow {
    NodeIndex target = 0;
    std::size_t snapshot = 0;
    Date cutoff;            ///< first excluded issue date
    double age_years = 0.0;
    std::size_t view_size = 0;
    bool cited = false;
    std::vector<std::uint32_t> ranks;
    std::vector<double> normalized_ranks;
};

/// Per-target rank trajectories, produced by the same pass as temporal_evaluation.
std::vector<TrajectoryRow> trajectory_export(const CitationNetwork &network, std::span<const NodeIndex> targets,
                                             const EvaluationConfig &config);

} // namespace citerank
