#include "citerank/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "citerank/error.hpp"

namespace citerank {

namespace {

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out)
        throw Error("write failed: " + path.string());
}

nlohmann::json number(double v) {
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_scores_csv(const std::filesystem::path &path, const CitationNetwork &network, const ScoreVector &scores) {
    const RankVector ranks = rank_nodes(scores);
    std::vector<NodeIndex> order(scores.size());
    for (NodeIndex i = 0; i < scores.size(); ++i)
        order[ranks.ranks[i] - 1] = i;
    auto out = open_output(path);
    out << "node_id,score\n";
    for (NodeIndex i : order)
        out << network.id(i) << ',' << format_double(scores.values[i]) << '\n';
    finish(out, path);
}

nlohmann::json to_json(const EvaluationReport &report, const CitationNetwork &network) {
    nlohmann::json j;
    for (Metric m : report.metrics)
        j["metrics"].push_back(metric_name(m));
    j["cadence_days"] = report.cadence_days;
    j["z"] = report.z;
    j["min_target_age_years"] = report.min_target_age_years;
    j["max_age_years"] = report.max_age_years;
    j["targets_requested"] = report.targets_requested;
    j["snapshots"] = report.snapshots;
    j["tie_rule"] = kTieRule;
    j["cohort"] = nlohmann::json::array();
    for (NodeIndex t : report.cohort)
        j["cohort"].push_back(network.id(t));
    j["bins"] = nlohmann::json::array();
    for (const auto &b : report.bins) {
        nlohmann::json jb;
        jb["index"] = b.index;
        jb["age_lo_years"] = b.age_lo_years;
        jb["age_hi_years"] = b.age_hi_years;
        jb["n_targets"] = b.n_targets;
        for (std::size_t m = 0; m < report.metrics.size(); ++m) {
            const std::string name(metric_name(report.metrics[m]));
            jb["avg_ranking_ratio"][name] = number(b.avg_ranking_ratio[m]);
            jb["identification_rate"][name] = number(b.identification_rate[m]);
        }
        j["bins"].push_back(std::move(jb));
    }
    return j;
}

nlohmann::json to_json(const TimingStats &stats) {
    nlohmann::json j;
    j["k"] = stats.k;
    j["mean_years"] = stats.mean_years ? nlohmann::json(*stats.mean_years) : nlohmann::json(nullptr);
    j["nodes"] = stats.nodes;
    j["restricted"] = stats.restricted;
    return j;
}

nlohmann::json to_json(const BiasProfile &profile) {
    nlohmann::json j;
    j["metric"] = metric_name(profile.metric);
    j["f"] = profile.f;
    j["top"] = profile.top;
    j["expected"] = profile.expected;
    j["group_sizes"] = profile.group_sizes;
    j["counts"] = profile.counts;
    return j;
}

nlohmann::json to_json(const RankingRatios &ratios, const CitationNetwork &network) {
    nlohmann::json j;
    for (std::size_t m = 0; m < ratios.metrics.size(); ++m) {
        const std::string name(metric_name(ratios.metrics[m]));
        j["average"][name] = ratios.average.empty() ? nlohmann::json(nullptr) : number(ratios.average[m]);
    }
    j["absent"] = ratios.absent;
    j["excluded"] = ratios.excluded;
    j["targets"] = nlohmann::json::array();
    for (std::size_t t = 0; t < ratios.targets.size(); ++t) {
        nlohmann::json row;
        row["id"] = network.id(ratios.targets[t]);
        for (std::size_t m = 0; m < ratios.metrics.size(); ++m)
            row["ratio"][std::string(metric_name(ratios.metrics[m]))] = ratios.ratios[t][m];
        j["targets"].push_back(std::move(row));
    }
    return j;
}

void write_report_csv(const std::filesystem::path &path, const EvaluationReport &report) {
    auto out = open_output(path);
    out << "metric,age_bin_years,avg_ranking_ratio,identification_rate,n_targets\n";
    for (std::size_t m = 0; m < report.metrics.size(); ++m)
        for (const auto &b : report.bins)
            out << metric_name(report.metrics[m]) << ',' << format_double(b.age_lo_years) << ','
                << format_double(b.avg_ranking_ratio[m]) << ',' << format_double(b.identification_rate[m]) << ','
                << b.n_targets << '\n';
    finish(out, path);
}

void write_curve_csv(const std::filesystem::path &path, const CorrelationCurve &curve) {
    auto out = open_output(path);
    out << "bin_lo,bin_hi,mean,std,count\n";
    for (const auto &b : curve.bins) {
        const double mean = b.count ? b.mean : std::nan("");
        const double std = b.count ? b.std : std::nan("");
        out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(mean) << ','
            << format_double(std) << ',' << b.count << '\n';
    }
    finish(out, path);
}

void write_curve_raw_csv(const std::filesystem::path &path, const CorrelationCurve &curve) {
    auto out = open_output(path);
    out << "indegree,mean,count\n";
    for (const auto &p : curve.raw)
        out << p.indegree << ',' << format_double(p.mean) << ',' << p.count << '\n';
    finish(out, path);
}

void write_difference_csv(const std::filesystem::path &path, std::span<const DifferenceCurve> curves) {
    auto out = open_output(path);
    out << "metric,age_bin_years,ratio_difference,ratio_stderr,rate_difference,rate_stderr,realizations\n";
    for (const auto &c : curves)
        for (const auto &p : c.points)
            out << metric_name(c.metric) << ',' << format_double(p.age_lo_years) << ','
                << format_double(p.ratio_difference) << ',' << format_double(p.ratio_stderr) << ','
                << format_double(p.rate_difference) << ',' << format_double(p.rate_stderr) << ',' << p.realizations
                << '\n';
    finish(out, path);
}

void write_trajectory_csv(const std::filesystem::path &path, const CitationNetwork &network,
                          std::span<const Metric> metrics, std::span<const TrajectoryRow> rows) {
    auto out = open_output(path);
    out << "node_id,snapshot,cutoff,age_years,view_size,cited";
    for (Metric m : metrics)
        out << ",rank_" << metric_slug(m) << ",norm_rank_" << metric_slug(m);
    out << '\n';
    for (const auto &r : rows) {
        out << network.id(r.target) << ',' << r.snapshot << ',' << r.cutoff.str() << ',' << format_double(r.age_years)
            << ',' << r.view_size << ',' << (r.cited ? 1 : 0);
        for (std::size_t m = 0; m < r.ranks.size(); ++m)
            out << ',' << r.ranks[m] << ',' << format_double(r.normalized_ranks[m]);
        out << '\n';
    }
    finish(out, path);
}

void write_json(const std::filesystem::path &path, const nlohmann::json &doc) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

std::string file_digest(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

OutputStage::OutputStage(std::filesystem::path out) : out_(std::move(out)) {
    std::filesystem::create_directories(out_);
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        char name[32];
        std::snprintf(name, sizeof name, ".staging-%08x", rd());
        stage_ = out_ / name;
        if (std::filesystem::create_directory(stage_))
            return;
    }
    throw Error("cannot create staging directory in " + out_.string());
}

OutputStage::~OutputStage() {
    std::error_code ec;
    std::filesystem::remove_all(stage_, ec);
}

std::filesystem::path OutputStage::path(const std::string &name) {
    auto p = stage_ / name;
    std::filesystem::create_directories(p.parent_path());
    if (std::find(files_.begin(), files_.end(), name) == files_.end())
        files_.push_back(name);
    return p;
}

void OutputStage::commit() {
    if (committed_)
        return;
    for (const auto &name : files_) {
        const auto dest = out_ / name;
        std::filesystem::create_directories(dest.parent_path());
        std::filesystem::rename(stage_ / name, dest);
    }
    committed_ = true;
}

} // namespace citerank
