#include "sdbdc/evaluation.hpp"

#include "sdbdc/dataset_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <set>

namespace sdbdc {

void CostModel::validate() const {
    if (bytes_per_object <= 0 || bytes_per_aggregate <= 0) {
        throw InputError("cost model: byte sizes must be positive");
    }
}

std::vector<Index> max_weight_assignment(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& weights) {
    const Index rows = weights.rows(), cols = weights.cols();
    const Index n = std::max(rows, cols);
    std::vector<Index> assignment(static_cast<std::size_t>(rows), -1);
    if (n == 0) return assignment;

    // Square min-cost problem on cost = max - w, zero-padded; Hungarian method with potentials.
    const std::int64_t top = rows && cols ? weights.maxCoeff() : 0;
    auto cost = [&](Index i, Index j) -> std::int64_t {
        return (i < rows && j < cols) ? top - weights(i, j) : top;
    };
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> u(static_cast<std::size_t>(n + 1), 0), v(static_cast<std::size_t>(n + 1), 0);
    std::vector<Index> match(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
    for (Index i = 1; i <= n; ++i) {
        match[0] = i;
        Index j0 = 0;
        std::vector<std::int64_t> min_v(static_cast<std::size_t>(n + 1), inf);
        std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const Index i0 = match[static_cast<std::size_t>(j0)];
            std::int64_t delta = inf;
            Index j1 = 0;
            for (Index j = 1; j <= n; ++j) {
                const auto js = static_cast<std::size_t>(j);
                if (used[js]) continue;
                const std::int64_t cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[js];
                if (cur < min_v[js]) {
                    min_v[js] = cur;
                    way[js] = j0;
                }
                if (min_v[js] < delta) {
                    delta = min_v[js];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                const auto js = static_cast<std::size_t>(j);
                if (used[js]) {
                    u[static_cast<std::size_t>(match[js])] += delta;
                    v[js] -= delta;
                } else {
                    min_v[js] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const Index j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    for (Index j = 1; j <= n; ++j) {
        const Index i = match[static_cast<std::size_t>(j)] - 1;
        if (i < rows && j - 1 < cols) assignment[static_cast<std::size_t>(i)] = j - 1;
    }
    return assignment;
}

namespace {

void require_same_ids(const Labels& a, const Labels& b) {
    if (a.size() != b.size() ||
        !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) { return x.first == y.first; })) {
        throw InputError("labelings cover different object id sets");
    }
}

// Dense renumbering of the non-noise ids of one side: cluster id -> row/col.
std::map<ClusterId, Index> cluster_slots(const Labels& labels) {
    std::map<ClusterId, Index> slots;
    for (const auto& [id, l] : labels) {
        if (l != kNoise) slots.emplace(l, 0);
    }
    Index k = 0;
    for (auto& [l, slot] : slots) slot = k++;
    return slots;
}

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double matching_quality(const Labels& distributed, const Labels& reference) {
    require_same_ids(distributed, reference);
    if (distributed.empty()) return 1.0;

    const auto rows = cluster_slots(distributed);
    const auto cols = cluster_slots(reference);
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> confusion =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Index>(rows.size()),
                                                                           static_cast<Index>(cols.size()));
    std::int64_t noise_both = 0;
    for (auto a = distributed.begin(), b = reference.begin(); a != distributed.end(); ++a, ++b) {
        if (a->second == kNoise || b->second == kNoise) {
            if (a->second == kNoise && b->second == kNoise) ++noise_both;
            continue;
        }
        ++confusion(rows.at(a->second), cols.at(b->second));
    }
    std::int64_t matched = 0;
    const auto assignment = max_weight_assignment(confusion);
    for (Index r = 0; r < confusion.rows(); ++r) {
        const Index c = assignment[static_cast<std::size_t>(r)];
        if (c >= 0) matched += confusion(r, c);
    }
    return static_cast<double>(matched + noise_both) / static_cast<double>(distributed.size());
}

double adjusted_rand(const Labels& a, const Labels& b) {
    require_same_ids(a, b);
    const auto n = static_cast<double>(a.size());
    if (a.size() < 2) return 1.0;

    std::map<std::pair<ClusterId, ClusterId>, std::int64_t> joint;
    std::map<ClusterId, std::int64_t> row_sums, col_sums;
    for (auto x = a.begin(), y = b.begin(); x != a.end(); ++x, ++y) {
        ++joint[{x->second, y->second}];
        ++row_sums[x->second];
        ++col_sums[y->second];
    }
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [k, c] : joint) index += choose2(static_cast<double>(c));
    for (const auto& [k, c] : row_sums) sum_a += choose2(static_cast<double>(c));
    for (const auto& [k, c] : col_sums) sum_b += choose2(static_cast<double>(c));

    const double expected = sum_a * sum_b / choose2(n);
    const double max_index = 0.5 * (sum_a + sum_b);
    // max == expected only when both sides are all-singletons or both one class
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

QualityReport evaluate(const Labels& distributed, const Labels& reference) {
    QualityReport r;
    r.matching_quality = matching_quality(distributed, reference);
    r.adjusted_rand = adjusted_rand(distributed, reference);
    r.n_objects = static_cast<std::int64_t>(distributed.size());
    r.n_clusters_distributed = static_cast<std::int64_t>(cluster_slots(distributed).size());
    r.n_clusters_reference = static_cast<std::int64_t>(cluster_slots(reference).size());
    return r;
}

std::string to_json(const QualityReport& report) {
    nlohmann::ordered_json j;
    j["matching_quality"] = report.matching_quality;
    j["adjusted_rand"] = report.adjusted_rand;
    j["n_objects"] = report.n_objects;
    j["n_clusters_distributed"] = report.n_clusters_distributed;
    j["n_clusters_reference"] = report.n_clusters_reference;
    return j.dump();
}

TransmissionCost transmission_cost(std::int64_t n_reps, std::int64_t n_total, const CostModel& model) {
    model.validate();
    if (n_reps < 0 || n_reps > n_total) throw InputError("transmission cost: need 0 <= n_reps <= n_total");
    TransmissionCost c;
    c.bytes_distributed = n_reps * (model.bytes_per_object + 2 * model.bytes_per_aggregate);
    c.bytes_full = n_total * model.bytes_per_object;
    c.speedup = c.bytes_distributed == 0
                    ? std::numeric_limits<double>::infinity()
                    : static_cast<double>(c.bytes_full) / static_cast<double>(c.bytes_distributed);
    return c;
}

std::string cost_csv_row(double fraction, const TransmissionCost& cost) {
    return format_double(fraction) + ',' + std::to_string(cost.bytes_distributed) + ',' +
           std::to_string(cost.bytes_full) + ',' + format_double(cost.speedup);
}

}  // namespace sdbdc
