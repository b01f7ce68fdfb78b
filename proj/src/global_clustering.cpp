#include "sdbdc/global_clustering.hpp"

#include "sdbdc/dataset_io.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace sdbdc {

void GlobalParams::validate() const {
    if (!(epsilon > 0.0)) throw InputError("global parameters: epsilon must be positive");
    if (min_pts < 1) throw InputError("global parameters: MinPts must be at least 1");
}

std::optional<ClusterId> GlobalLabeling::find(SiteId site, Seq seq) const {
    auto it = lookup_.find({site, seq});
    if (it == lookup_.end()) return std::nullopt;
    return labels[it->second];
}

namespace {

ClusterId max_label(const std::vector<ClusterId>& labels) {
    ClusterId k = 0;
    for (ClusterId l : labels) k = std::max(k, l);
    return k;
}

bool unclassified_or_noise(ClusterId id) { return id == kUnclassified || id == kNoise; }

}  // namespace

ClusterId GlobalLabeling::n_clusters() const { return max_label(labels); }

GlobalLabeling make_global_labeling(std::vector<RepKey> keys, std::vector<ClusterId> labels) {
    if (keys.size() != labels.size()) throw InputError("global labeling: keys and labels differ in length");
    GlobalLabeling out;
    out.keys = std::move(keys);
    out.labels = std::move(labels);
    for (std::size_t i = 0; i < out.keys.size(); ++i) {
        if (!out.lookup_.emplace(out.keys[i], i).second) {
            throw InputError("global labeling: duplicate representative (site " +
                             std::to_string(out.keys[i].first) + ", seq " +
                             std::to_string(out.keys[i].second) + ")");
        }
    }
    return out;
}

std::map<ObjectId, ClusterId> ReferenceLabeling::as_map() const {
    std::map<ObjectId, ClusterId> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], labels[i]);
    return out;
}

ClusterId ReferenceLabeling::n_clusters() const { return max_label(labels); }

double enlarged_radius(const RepresentativeRecord& rep, const GlobalParams& params) {
    return params.epsilon + rep.cov_rad;
}

std::int64_t weighted_neighborhood_count(const std::vector<RepresentativeRecord>& seeds) {
    std::int64_t sum = 0;
    for (const auto& s : seeds) sum += s.cov_cnt;
    return sum;
}

std::int64_t weighted_neighborhood_count(const std::vector<RepresentativeRecord>& reps,
                                         const std::vector<Index>& seeds) {
    std::int64_t sum = 0;
    for (Index s : seeds) sum += reps[static_cast<std::size_t>(s)].cov_cnt;
    return sum;
}

GlobalLabeling global_dbscan(const std::vector<RepresentativeRecord>& reps, const GlobalParams& params) {
    params.validate();
    std::vector<RepKey> keys;
    keys.reserve(reps.size());
    for (const auto& r : reps) keys.emplace_back(r.site, r.seq);
    if (reps.empty()) return make_global_labeling({}, {});

    const Index dim = reps.front().point.coords.size();
    Dataset points(dim);
    points.reserve(static_cast<Index>(reps.size()));
    double max_cov_rad = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (reps[i].point.coords.size() != dim) throw InputError("global clustering: mixed dimensionality");
        if (!(reps[i].cov_rad >= 0.0) || reps[i].cov_cnt < 0) {
            throw InputError("global clustering: negative cov_rad or cov_cnt");
        }
        points.push_back(static_cast<ObjectId>(i), reps[i].point.coords);
        max_cov_rad = std::max(max_cov_rad, reps[i].cov_rad);
    }
    const RangeIndex index(points, IndexOptions{IndexKind::automatic, params.epsilon + max_cov_rad});

    std::vector<ClusterId> label(reps.size(), kUnclassified);
    auto neighbourhood = [&](Index i) {
        return index.query_positions(points.coords(i), enlarged_radius(reps[static_cast<std::size_t>(i)], params));
    };

    auto expand_cluster = [&](Index start, ClusterId cluster) {
        const auto first = neighbourhood(start);
        if (weighted_neighborhood_count(reps, first) < params.min_pts) {
            label[static_cast<std::size_t>(start)] = kNoise;
            return false;
        }
        std::deque<Index> seeds;
        for (Index s : first) {
            auto& l = label[static_cast<std::size_t>(s)];
            if (unclassified_or_noise(l)) l = cluster;
            if (s != start) seeds.push_back(s);
        }
        while (!seeds.empty()) {
            const Index current = seeds.front();
            const auto around = neighbourhood(current);
            if (weighted_neighborhood_count(reps, around) >= params.min_pts) {
                for (Index p : around) {
                    auto& l = label[static_cast<std::size_t>(p)];
                    if (!unclassified_or_noise(l)) continue;
                    if (l == kUnclassified) seeds.push_back(p);
                    l = cluster;
                }
            }
            seeds.pop_front();
        }
        return true;
    };

    ClusterId cluster = 1;
    for (Index i = 0; i < points.size(); ++i) {
        if (label[static_cast<std::size_t>(i)] != kUnclassified) continue;
        if (expand_cluster(i, cluster)) ++cluster;
    }
    return make_global_labeling(std::move(keys), std::move(label));
}

ReferenceLabeling reference_dbscan(const Dataset& ds, const GlobalParams& params) {
    params.validate();
    ReferenceLabeling out;
    out.ids = ds.ids();
    out.labels.assign(static_cast<std::size_t>(ds.size()), kUnclassified);
    if (ds.empty()) return out;

    const RangeIndex index(ds, IndexOptions{IndexKind::automatic, params.epsilon});
    const auto min_pts = static_cast<std::size_t>(params.min_pts);
    auto& label = out.labels;

    ClusterId cluster = 0;
    for (Index p = 0; p < ds.size(); ++p) {
        if (label[static_cast<std::size_t>(p)] != kUnclassified) continue;
        const auto neighbours = index.query_positions(ds.coords(p), params.epsilon);
        if (neighbours.size() < min_pts) {
            label[static_cast<std::size_t>(p)] = kNoise;
            continue;
        }
        ++cluster;
        label[static_cast<std::size_t>(p)] = cluster;
        std::vector<Index> frontier;
        for (Index q : neighbours) {
            if (q != p) frontier.push_back(q);
        }
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            const Index q = frontier[k];
            auto& lq = label[static_cast<std::size_t>(q)];
            if (lq == kNoise) lq = cluster;  // border point
            if (lq != kUnclassified) continue;
            lq = cluster;
            const auto reach = index.query_positions(ds.coords(q), params.epsilon);
            if (reach.size() >= min_pts) frontier.insert(frontier.end(), reach.begin(), reach.end());
        }
    }
    return out;
}

std::vector<ClusterId> canonicalize_labels(const std::vector<ClusterId>& labels) {
    std::unordered_map<ClusterId, ClusterId> remap;
    std::vector<ClusterId> out;
    out.reserve(labels.size());
    for (ClusterId l : labels) {
        if (l <= 0) {
            out.push_back(l);
            continue;
        }
        auto [it, inserted] = remap.emplace(l, static_cast<ClusterId>(remap.size()) + 1);
        out.push_back(it->second);
    }
    return out;
}

void write_global_labels_csv(std::ostream& out, const GlobalLabeling& labeling) {
    out << "site,seq,cluster_id\n";
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        out << labeling.keys[i].first << ',' << labeling.keys[i].second << ',' << labeling.labels[i] << '\n';
    }
}

GlobalLabeling read_global_labels_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::split_csv_line(line) != std::vector<std::string_view>{"site", "seq", "cluster_id"}) {
        throw InputError("global labels CSV: header must be site,seq,cluster_id");
    }
    std::vector<RepKey> keys;
    std::vector<ClusterId> labels;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 3) throw InputError("global labels CSV: expected 3 fields");
        keys.emplace_back(static_cast<SiteId>(detail::parse_int(f[0], "site")), detail::parse_int(f[1], "seq"));
        labels.push_back(detail::parse_int(f[2], "cluster_id"));
    }
    return make_global_labeling(std::move(keys), std::move(labels));
}

void write_reference_labels_csv(std::ostream& out, const ReferenceLabeling& labeling) {
    out << "id,cluster_id\n";
    for (std::size_t i = 0; i < labeling.ids.size(); ++i) out << labeling.ids[i] << ',' << labeling.labels[i] << '\n';
}

ReferenceLabeling read_reference_labels_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::split_csv_line(line) != std::vector<std::string_view>{"id", "cluster_id"}) {
        throw InputError("reference labels CSV: header must be id,cluster_id");
    }
    ReferenceLabeling out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 2) throw InputError("reference labels CSV: expected 2 fields");
        out.ids.push_back(detail::parse_int(f[0], "id"));
        out.labels.push_back(detail::parse_int(f[1], "cluster_id"));
    }
    return out;
}

}  // namespace sdbdc
