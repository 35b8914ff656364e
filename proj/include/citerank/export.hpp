#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "citerank/centrality.hpp"
#include "citerank/evaluate.hpp"
#include "citerank/netstats.hpp"

namespace citerank {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// `node_id,score`, best first; ties in chronological order.
void write_scores_csv(const std::filesystem::path &path, const CitationNetwork &network, const ScoreVector &scores);

nlohmann::json to_json(const EvaluationReport &report, const CitationNetwork &network);
nlohmann::json to_json(const TimingStats &stats);
nlohmann::json to_json(const BiasProfile &profile);
nlohmann::json to_json(const RankingRatios &ratios, const CitationNetwork &network);

/// `metric,age_bin_years,avg_ranking_ratio,identification_rate,n_targets`
void write_report_csv(const std::filesystem::path &path, const EvaluationReport &report);
/// `bin_lo,bin_hi,mean,std,count`
void write_curve_csv(const std::filesystem::path &path, const CorrelationCurve &curve);
/// `indegree,mean,count`
void write_curve_raw_csv(const std::filesystem::path &path, const CorrelationCurve &curve);
/// `metric,age_bin_years,ratio_difference,ratio_stderr,rate_difference,rate_stderr,realizations`
void write_difference_csv(const std::filesystem::path &path, std::span<const DifferenceCurve> curves);
/// One row per target and snapshot, with rank and normalized rank per metric.
void write_trajectory_csv(const std::filesystem::path &path, const CitationNetwork &network,
                          std::span<const Metric> metrics, std::span<const TrajectoryRow> rows);
void write_json(const std::filesystem::path &path, const nlohmann::json &doc);

/// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path &path);

/**
 * Collects a command's outputs in a hidden staging directory under `out`, then
 * moves them into `out` on commit(). Dropped without commit, the staging
 * directory is removed and `out` is left untouched.
 */
class OutputStage {
public:
    explicit OutputStage(std::filesystem::path out);
    ~OutputStage();
    OutputStage(const OutputStage &) = delete;
    OutputStage &operator=(const OutputStage &) = delete;

    /// Path for `name` inside the staging directory; subdirectories are created.
    std::filesystem::path path(const std::string &name);
    std::vector<std::string> files() const { return files_; }
    void commit();

private:
    std::filesystem::path out_;
    std::filesystem::path stage_;
    std::vector<std::string> files_;
    bool committed_ = false;
};

} // namespace citerank
