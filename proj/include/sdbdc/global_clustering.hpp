#pragma once

#include "sdbdc/geometry.hpp"
#include "sdbdc/representatives.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace sdbdc {

using ClusterId = std::int64_t;
inline constexpr ClusterId kUnclassified = -1;
inline constexpr ClusterId kNoise = 0;

struct GlobalParams {
    double epsilon = 1.0;
    std::int64_t min_pts = 1;

    void validate() const;
};

using RepKey = std::pair<SiteId, Seq>;

/// Cluster id per representative, aligned with the input sequence.
struct GlobalLabeling {
    std::vector<RepKey> keys;
    std::vector<ClusterId> labels;

    std::size_t size() const { return labels.size(); }
    std::optional<ClusterId> find(SiteId site, Seq seq) const;
    ClusterId n_clusters() const;

private:
    friend GlobalLabeling make_global_labeling(std::vector<RepKey>, std::vector<ClusterId>);
    std::map<RepKey, std::size_t> lookup_;
};

GlobalLabeling make_global_labeling(std::vector<RepKey> keys, std::vector<ClusterId> labels);

/// Cluster id per object, aligned with the dataset order.
struct ReferenceLabeling {
    std::vector<ObjectId> ids;
    std::vector<ClusterId> labels;

    std::map<ObjectId, ClusterId> as_map() const;
    ClusterId n_clusters() const;
};

/// eps + CovRad: the query radius used around a representative.
double enlarged_radius(const RepresentativeRecord& rep, const GlobalParams& params);

/// Sum of cov_cnt over a neighbourhood.
std::int64_t weighted_neighborhood_count(const std::vector<RepresentativeRecord>& seeds);
std::int64_t weighted_neighborhood_count(const std::vector<RepresentativeRecord>& reps,
                                         const std::vector<Index>& seeds);

/// Density-based clustering of representatives. A representative is core when
/// the cov_cnt weights inside its enlarged radius reach min_pts; reachability
/// from q uses q's own enlarged radius. Representatives are visited in input
/// order and clusters are numbered 1, 2, ... in discovery order.
GlobalLabeling global_dbscan(const std::vector<RepresentativeRecord>& reps, const GlobalParams& params);

/// Plain DBSCAN on all objects (closed balls, |N(p)| >= min_pts counting p),
/// the centralized baseline.
ReferenceLabeling reference_dbscan(const Dataset& ds, const GlobalParams& params);

/// Canonical form: cluster ids renumbered 1.. by first occurrence, noise kept at 0.
std::vector<ClusterId> canonicalize_labels(const std::vector<ClusterId>& labels);

void write_global_labels_csv(std::ostream& out, const GlobalLabeling& labeling);
GlobalLabeling read_global_labels_csv(std::istream& in);
void write_reference_labels_csv(std::ostream& out, const ReferenceLabeling& labeling);
ReferenceLabeling read_reference_labels_csv(std::istream& in);

}  // namespace sdbdc
