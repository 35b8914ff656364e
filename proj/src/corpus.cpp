#include "citerank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>

#include "citerank/error.hpp"

namespace citerank {

namespace {

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    std::uint64_t v = 0;
    if (s.empty())
        return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

// Splits "a<TAB>b" into exactly two non-empty fields.
bool split_pair(std::string_view line, std::string_view &a, std::string_view &b) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos)
        return false;
    a = line.substr(0, tab);
    b = line.substr(tab + 1);
    return !a.empty() && !b.empty() && b.find('\t') == std::string_view::npos;
}

std::string_view trim_eol(const std::string &line) {
    std::string_view v(line);
    while (!v.empty() && (v.back() == '\r' || v.back() == '\n'))
        v.remove_suffix(1);
    return v;
}

std::ifstream open_input(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return in;
}

template <typename T> std::vector<T> apply_permutation(std::vector<T> &&src, const std::vector<NodeIndex> &order) {
    std::vector<T> out;
    out.reserve(src.size());
    for (NodeIndex old : order)
        out.push_back(std::move(src[old]));
    return out;
}

} // namespace

CitationNetwork CitationNetwork::build(std::vector<std::string> ids, std::vector<Date> dates,
                                       std::vector<Edge> edges, IngestionReport *report) {
    if (ids.size() != dates.size())
        throw Error("node ids and dates differ in length");
    const std::size_t n = ids.size();
    if (n > std::numeric_limits<NodeIndex>::max())
        throw Error("too many nodes");

    CitationNetwork net;
    std::vector<std::uint64_t> numeric(n);
    net.numeric_ids_ = n > 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto v = parse_uint(ids[i]);
        if (!v) {
            net.numeric_ids_ = false;
            break;
        }
        numeric[i] = *v;
    }

    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), NodeIndex{0});
    std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
        if (dates[a] != dates[b])
            return dates[a] < dates[b];
        if (net.numeric_ids_ && numeric[a] != numeric[b])
            return numeric[a] < numeric[b];
        return ids[a] < ids[b];
    });
    std::vector<NodeIndex> rank(n);
    for (std::size_t r = 0; r < n; ++r)
        rank[order[r]] = static_cast<NodeIndex>(r);

    net.ids_ = apply_permutation(std::move(ids), order);
    net.dates_ = apply_permutation(std::move(dates), order);
    net.lookup_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!net.lookup_.emplace(net.ids_[i], static_cast<NodeIndex>(i)).second)
            throw Error("duplicate node id '" + net.ids_[i] + "'");
    }

    IngestionReport local;
    IngestionReport &rep = report ? *report : local;
    rep.nodes_loaded = n;
    rep.edges_read += edges.size();

    std::vector<Edge> kept;
    kept.reserve(edges.size());
    for (const Edge &e : edges) {
        if (e.citing >= n || e.cited >= n) {
            ++rep.dropped_unknown_endpoint;
            continue;
        }
        Edge r{rank[e.citing], rank[e.cited]};
        if (r.citing == r.cited) {
            ++rep.dropped_self_citation;
            continue;
        }
        if (net.dates_[r.citing] < net.dates_[r.cited]) {
            ++rep.dropped_citing_before_cited;
            continue;
        }
        kept.push_back(r);
    }
    std::sort(kept.begin(), kept.end());
    auto last = std::unique(kept.begin(), kept.end());
    rep.dropped_duplicate += static_cast<std::size_t>(kept.end() - last);
    kept.erase(last, kept.end());
    rep.edges_kept = kept.size();

    net.ref_offsets_.assign(n + 1, 0);
    net.cit_offsets_.assign(n + 1, 0);
    for (const Edge &e : kept) {
        ++net.ref_offsets_[e.citing + 1];
        ++net.cit_offsets_[e.cited + 1];
    }
    std::partial_sum(net.ref_offsets_.begin(), net.ref_offsets_.end(), net.ref_offsets_.begin());
    std::partial_sum(net.cit_offsets_.begin(), net.cit_offsets_.end(), net.cit_offsets_.begin());
    net.ref_targets_.resize(kept.size());
    net.cit_sources_.resize(kept.size());
    // kept is sorted by (citing, cited), so both fills below produce ascending lists.
    std::vector<std::size_t> cursor(net.cit_offsets_.begin(), net.cit_offsets_.end() - 1);
    for (std::size_t k = 0; k < kept.size(); ++k) {
        net.ref_targets_[k] = kept[k].cited;
        net.cit_sources_[cursor[kept[k].cited]++] = kept[k].citing;
    }
    return net;
}

std::size_t CitationNetwork::count_before(Date cutoff) const {
    return static_cast<std::size_t>(std::lower_bound(dates_.begin(), dates_.end(), cutoff) - dates_.begin());
}

std::optional<NodeIndex> CitationNetwork::find(std::string_view id) const {
    auto it = lookup_.find(std::string(id));
    if (it == lookup_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Edge> CitationNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeIndex i = 0; i < node_count(); ++i)
        for (NodeIndex j : references(i))
            out.push_back({i, j});
    return out;
}

void CitationNetwork::write_nodes(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    for (std::size_t i = 0; i < node_count(); ++i)
        out << ids_[i] << '\t' << dates_[i].str() << '\n';
    if (!out)
        throw Error("write failed: " + path.string());
}

void CitationNetwork::write_edges(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    for (NodeIndex i = 0; i < node_count(); ++i)
        for (NodeIndex j : references(i))
            out << ids_[i] << '\t' << ids_[j] << '\n';
    if (!out)
        throw Error("write failed: " + path.string());
}

NetworkView::NetworkView(const CitationNetwork &network, Date cutoff)
    : network_(&network), cutoff_(cutoff), size_(network.count_before(cutoff)) {}

NetworkView NetworkView::full(const CitationNetwork &network) {
    Date cutoff = network.empty() ? Date{} : network.last_date() + 1;
    return NetworkView(network, cutoff);
}

std::span<const NodeIndex> NetworkView::citers(NodeIndex i) const {
    auto all = network_->citers(i);
    auto end = std::lower_bound(all.begin(), all.end(), static_cast<NodeIndex>(size_));
    return all.first(static_cast<std::size_t>(end - all.begin()));
}

NetworkView snapshot(const CitationNetwork &network, Date cutoff) { return NetworkView(network, cutoff); }

LoadedCorpus load_corpus(const std::filesystem::path &nodes_path, const std::filesystem::path &edges_path) {
    std::vector<std::string> ids;
    std::vector<Date> dates;
    {
        auto in = open_input(nodes_path);
        std::string raw;
        std::size_t lineno = 0;
        bool seen_record = false;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string_view line = trim_eol(raw);
            if (line.empty())
                continue;
            std::string_view id, date_text;
            if (!split_pair(line, id, date_text))
                throw ParseError(nodes_path.string(), lineno, "expected node_id<TAB>YYYY-MM-DD");
            auto date = Date::parse(date_text);
            if (!date) {
                if (!seen_record && ids.empty()) {
                    seen_record = true; // header
                    continue;
                }
                throw ParseError(nodes_path.string(), lineno, "bad date '" + std::string(date_text) + "'");
            }
            seen_record = true;
            ids.emplace_back(id);
            dates.push_back(*date);
        }
    }

    std::unordered_map<std::string, NodeIndex> index;
    index.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (!index.emplace(ids[i], static_cast<NodeIndex>(i)).second)
            throw Error(nodes_path.string() + ": duplicate node id '" + ids[i] + "'");

    IngestionReport report;
    std::vector<Edge> edges;
    {
        auto in = open_input(edges_path);
        std::string raw;
        std::size_t lineno = 0;
        constexpr NodeIndex kUnknown = std::numeric_limits<NodeIndex>::max();
        std::string key;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string_view line = trim_eol(raw);
            if (line.empty())
                continue;
            std::string_view a, b;
            if (!split_pair(line, a, b))
                throw ParseError(edges_path.string(), lineno, "expected citing_id<TAB>cited_id");
            auto lookup = [&](std::string_view s) {
                key.assign(s);
                auto it = index.find(key);
                return it == index.end() ? kUnknown : it->second;
            };
            edges.push_back({lookup(a), lookup(b)});
        }
    }
    auto net = CitationNetwork::build(std::move(ids), std::move(dates), std::move(edges), &report);
    return {std::move(net), report};
}

std::vector<std::string> load_id_list(const std::filesystem::path &path) {
    auto in = open_input(path);
    std::vector<std::string> out;
    std::string raw;
    while (std::getline(in, raw)) {
        std::string_view line = trim_eol(raw);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
            line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.remove_prefix(1);
        if (line.empty() || line.front() == '#')
            continue;
        out.emplace_back(line);
    }
    return out;
}

std::vector<NodeIndex> resolve_ids(const CitationNetwork &network, std::span<const std::string> ids,
                                   std::size_t *missing) {
    std::vector<NodeIndex> out;
    out.reserve(ids.size());
    std::size_t miss = 0;
    for (const auto &id : ids) {
        if (auto i = network.find(id))
            out.push_back(*i);
        else
            ++miss;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (missing)
        *missing = miss;
    return out;
}

} // namespace citerank
