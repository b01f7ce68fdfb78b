#pragma once

#include "sdbdc/global_clustering.hpp"

#include <iosfwd>
#include <map>
#include <vector>

namespace sdbdc {

/// Final labels of one site's objects, in the site's dataset order.
/// owner_seq is -1 for objects no representative covered; those are NOISE.
struct LocalLabeling {
    SiteId site = 0;
    std::vector<ObjectId> ids;
    std::vector<ClusterId> labels;
    std::vector<Seq> owner_seq;

    std::size_t size() const { return ids.size(); }
};

/// Consistency violation between a site's coverage and the global labeling,
/// typically a coverage map from a longer stream than the server clustered.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every object inherits the global label of the representative that first
/// covered it; uncovered objects become NOISE.
LocalLabeling relabel_site(const Dataset& site_data, const CoverageOwner& owner, const GlobalLabeling& global,
                           SiteId site);

/// Object id -> cluster id over all sites; throws InputError on an id seen twice.
std::map<ObjectId, ClusterId> combine_labelings(const std::vector<LocalLabeling>& sites);

void write_local_labels_csv(std::ostream& out, const LocalLabeling& labeling);
LocalLabeling read_local_labels_csv(std::istream& in, SiteId site = 0);

/// Coverage map as CSV `id,owner_seq`.
void write_coverage_owner_csv(std::ostream& out, const CoverageOwner& owner);
CoverageOwner read_coverage_owner_csv(std::istream& in);

}  // namespace sdbdc
