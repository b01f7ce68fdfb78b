#include "sdbdc/relabeling.hpp"

#include "sdbdc/dataset_io.hpp"

#include <istream>
#include <ostream>

namespace sdbdc {

LocalLabeling relabel_site(const Dataset& site_data, const CoverageOwner& owner, const GlobalLabeling& global,
                           SiteId site) {
    LocalLabeling out;
    out.site = site;
    out.ids.reserve(static_cast<std::size_t>(site_data.size()));
    out.labels.reserve(out.ids.capacity());
    out.owner_seq.reserve(out.ids.capacity());

    std::size_t matched = 0;
    for (Index i = 0; i < site_data.size(); ++i) {
        const ObjectId id = site_data.id(i);
        ClusterId label = kNoise;
        Seq seq = -1;
        if (auto it = owner.find(id); it != owner.end()) {
            seq = it->second;
            const auto global_label = global.find(site, seq);
            if (!global_label) {
                throw ConsistencyError("relabel: site " + std::to_string(site) + " representative " +
                                       std::to_string(seq) + " has no global label");
            }
            label = *global_label;
            ++matched;
        }
        out.ids.push_back(id);
        out.labels.push_back(label);
        out.owner_seq.push_back(seq);
    }
    if (matched != owner.size()) {
        throw InputError("relabel: coverage map names objects that are not part of site " + std::to_string(site));
    }
    return out;
}

std::map<ObjectId, ClusterId> combine_labelings(const std::vector<LocalLabeling>& sites) {
    std::map<ObjectId, ClusterId> out;
    for (const auto& s : sites) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!out.emplace(s.ids[i], s.labels[i]).second) {
                throw InputError("combine: object " + std::to_string(s.ids[i]) + " labeled by more than one site");
            }
        }
    }
    return out;
}

void write_local_labels_csv(std::ostream& out, const LocalLabeling& labeling) {
    out << "id,cluster_id,owner_seq\n";
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        out << labeling.ids[i] << ',' << labeling.labels[i] << ',' << labeling.owner_seq[i] << '\n';
    }
}

LocalLabeling read_local_labels_csv(std::istream& in, SiteId site) {
    std::string line;
    if (!std::getline(in, line) ||
        detail::split_csv_line(line) != std::vector<std::string_view>{"id", "cluster_id", "owner_seq"}) {
        throw InputError("local labels CSV: header must be id,cluster_id,owner_seq");
    }
    LocalLabeling out;
    out.site = site;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 3) throw InputError("local labels CSV: expected 3 fields");
        out.ids.push_back(detail::parse_int(f[0], "id"));
        out.labels.push_back(detail::parse_int(f[1], "cluster_id"));
        out.owner_seq.push_back(detail::parse_int(f[2], "owner_seq"));
    }
    return out;
}

void write_coverage_owner_csv(std::ostream& out, const CoverageOwner& owner) {
    out << "id,owner_seq\n";
    for (const auto& [id, seq] : owner) out << id << ',' << seq << '\n';
}

CoverageOwner read_coverage_owner_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::split_csv_line(line) != std::vector<std::string_view>{"id", "owner_seq"}) {
        throw InputError("coverage CSV: header must be id,owner_seq");
    }
    CoverageOwner out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 2) throw InputError("coverage CSV: expected 2 fields");
        const Seq seq = detail::parse_int(f[1], "owner_seq");
        if (seq < 0) continue;
        if (!out.emplace(detail::parse_int(f[0], "id"), seq).second) throw InputError("coverage CSV: duplicate id");
    }
    return out;
}

}  // namespace sdbdc
