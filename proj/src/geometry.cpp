#include "sdbdc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sdbdc {

namespace {

constexpr Index kLeafSize = 16;
constexpr Index kMaxGridDim = 3;

// Cell-range padding so that rounding in the cell arithmetic can never drop a
// point that passes the exact distance test.
double query_slack(double radius, double scale) {
    return 1e-9 * (radius + scale) + std::numeric_limits<double>::min();
}

}  // namespace

Dataset::Dataset(Index dim) : dim_(dim) {
    if (dim < 1) throw InputError("Dataset: dimensionality must be positive");
}

Dataset::Dataset(Index dim, std::vector<Point> points) : Dataset(dim) {
    reserve(static_cast<Index>(points.size()));
    for (const auto& p : points) push_back(p);
}

Index Dataset::position_of(ObjectId id) const {
    auto it = positions_.find(id);
    return it == positions_.end() ? -1 : it->second;
}

void Dataset::push_back(ObjectId id, const Eigen::Ref<const Eigen::VectorXd>& coords) {
    if (coords.size() != dim_) {
        throw InputError("Dataset: point " + std::to_string(id) + " has " +
                         std::to_string(coords.size()) + " coordinates, expected " +
                         std::to_string(dim_));
    }
    if (id < 0) throw InputError("Dataset: negative id " + std::to_string(id));
    if (!coords.allFinite()) {
        throw InputError("Dataset: point " + std::to_string(id) + " has non-finite coordinates");
    }
    if (!positions_.emplace(id, size()).second) {
        throw InputError("Dataset: duplicate id " + std::to_string(id));
    }
    ids_.push_back(id);
    storage_.insert(storage_.end(), coords.data(), coords.data() + dim_);
}

void Dataset::reserve(Index n) {
    ids_.reserve(static_cast<std::size_t>(n));
    storage_.reserve(static_cast<std::size_t>(n * dim_));
    positions_.reserve(static_cast<std::size_t>(n));
}

Dataset Dataset::subset(const std::vector<Index>& positions) const {
    Dataset out(dim_);
    out.reserve(static_cast<Index>(positions.size()));
    for (Index i : positions) out.push_back(id(i), coords(i));
    return out;
}

// ---------------------------------------------------------------------------

std::size_t RangeIndex::CellHash::operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t v : k.c) {
        h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

RangeIndex::RangeIndex(const Dataset& ds, IndexOptions options)
    : dim_(ds.dim()), kind_(options.kind), cell_side_(options.cell_side), ids_(ds.ids()) {
    const auto m = ds.matrix();
    coords_.assign(m.data(), m.data() + m.size());

    lower_.assign(static_cast<std::size_t>(dim_), 0.0);
    if (!ds.empty()) {
        Eigen::VectorXd lo = m.rowwise().minCoeff();
        Eigen::VectorXd hi = m.rowwise().maxCoeff();
        std::copy(lo.data(), lo.data() + dim_, lower_.begin());
        if (cell_side_ <= 0.0) {
            const double extent = (hi - lo).maxCoeff();
            const double per_axis = std::pow(static_cast<double>(ds.size()), 1.0 / static_cast<double>(dim_));
            cell_side_ = extent > 0.0 ? extent / std::max(1.0, per_axis) : 1.0;
        }
    } else if (cell_side_ <= 0.0) {
        cell_side_ = 1.0;
    }

    const bool want_grid = kind_ == IndexKind::grid ||
                           (kind_ == IndexKind::automatic && dim_ <= kMaxGridDim);
    const bool want_kd = kind_ == IndexKind::kd_tree || kind_ == IndexKind::automatic;
    if (kind_ == IndexKind::grid && dim_ > kMaxGridDim) {
        throw InputError("RangeIndex: grid index supports at most 3 dimensions");
    }
    if (want_grid) build_grid();
    if (want_kd) {
        kd_enabled_ = true;
        kd_order_.resize(ids_.size());
        std::iota(kd_order_.begin(), kd_order_.end(), Index{0});
        if (!ids_.empty()) build_kd(0, size(), 0);
    }
}

RangeIndex::CellKey RangeIndex::cell_of(const double* x) const {
    CellKey key;
    for (Index k = 0; k < dim_; ++k) {
        key.c[static_cast<std::size_t>(k)] =
            static_cast<std::int64_t>(std::floor((x[k] - lower_[static_cast<std::size_t>(k)]) / cell_side_));
    }
    return key;
}

void RangeIndex::build_grid() {
    grid_enabled_ = true;
    for (Index i = 0; i < size(); ++i) cells_[cell_of(coords_.data() + i * dim_)].push_back(i);
}

std::int32_t RangeIndex::build_kd(Index begin, Index end, int depth) {
    const auto node_id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(KdNode{begin, end});
    if (end - begin <= kLeafSize) return node_id;

    // split on the axis of largest spread
    int axis = 0;
    double best_spread = -1.0;
    for (Index k = 0; k < dim_; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (Index j = begin; j < end; ++j) {
            const double v = coords_[static_cast<std::size_t>(kd_order_[static_cast<std::size_t>(j)] * dim_ + k)];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            axis = static_cast<int>(k);
        }
    }
    if (best_spread <= 0.0) return node_id;  // all coincident

    const Index mid = begin + (end - begin) / 2;
    auto first = kd_order_.begin() + begin;
    auto value = [&](Index i) { return coords_[static_cast<std::size_t>(i * dim_ + axis)]; };
    std::nth_element(first, kd_order_.begin() + mid, kd_order_.begin() + end,
                     [&](Index a, Index b) { return value(a) < value(b); });
    const double split = value(kd_order_[static_cast<std::size_t>(mid)]);

    nodes_[static_cast<std::size_t>(node_id)].split_dim = axis;
    nodes_[static_cast<std::size_t>(node_id)].split = split;
    const std::int32_t left = build_kd(begin, mid, depth + 1);
    const std::int32_t right = build_kd(mid, end, depth + 1);
    nodes_[static_cast<std::size_t>(node_id)].left = left;
    nodes_[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
}

double RangeIndex::dist_to(const double* c, Index i) const {
    return distance(Eigen::Map<const Eigen::VectorXd>(c, dim_), coords(i));
}

void RangeIndex::query_brute(const double* c, double radius, std::vector<Neighbor>& out) const {
    for (Index i = 0; i < size(); ++i) {
        const double d = dist_to(c, i);
        if (d <= radius) out.push_back({i, d});
    }
}

bool RangeIndex::query_grid(const double* c, double radius, std::vector<Neighbor>& out) const {
    std::array<std::int64_t, 3> lo{}, hi{};
    double n_cells = 1.0;
    for (Index k = 0; k < dim_; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const double base = lower_[ks];
        const double slack = query_slack(radius, cell_side_ + std::abs(c[k]) + std::abs(base));
        lo[ks] = static_cast<std::int64_t>(std::floor((c[k] - radius - slack - base) / cell_side_));
        hi[ks] = static_cast<std::int64_t>(std::floor((c[k] + radius + slack - base) / cell_side_));
        n_cells *= static_cast<double>(hi[ks] - lo[ks] + 1);
    }
    // Too many (mostly empty) cells: let the caller fall back.
    if (n_cells > std::max(64.0, 4.0 * static_cast<double>(std::max<std::size_t>(cells_.size(), 1)))) {
        return false;
    }

    CellKey key;
    key.c = lo;
    for (;;) {
        if (auto it = cells_.find(key); it != cells_.end()) {
            for (Index i : it->second) {
                const double d = dist_to(c, i);
                if (d <= radius) out.push_back({i, d});
            }
        }
        Index k = 0;
        for (; k < dim_; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            if (++key.c[ks] <= hi[ks]) break;
            key.c[ks] = lo[ks];
        }
        if (k == dim_) break;
    }
    return true;
}

void RangeIndex::query_kd(std::int32_t node_id, const double* c, double radius, double slack,
                          std::vector<Neighbor>& out) const {
    const KdNode& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.split_dim < 0) {
        for (Index j = node.begin; j < node.end; ++j) {
            const Index i = kd_order_[static_cast<std::size_t>(j)];
            const double d = dist_to(c, i);
            if (d <= radius) out.push_back({i, d});
        }
        return;
    }
    const double diff = c[node.split_dim] - node.split;
    // left holds values <= split, right holds values >= split
    if (diff <= radius + slack) query_kd(node.left, c, radius, slack, out);
    if (-diff <= radius + slack) query_kd(node.right, c, radius, slack, out);
}

std::vector<Neighbor> RangeIndex::query(const Eigen::Ref<const Eigen::VectorXd>& center,
                                        double radius) const {
    if (center.size() != dim_) {
        throw InputError("range query: center has " + std::to_string(center.size()) +
                         " coordinates, index has " + std::to_string(dim_));
    }
    if (!(radius >= 0.0)) throw InputError("range query: radius must be non-negative");

    std::vector<Neighbor> out;
    if (ids_.empty()) return out;

    Eigen::VectorXd c = center;  // contiguous copy
    bool done = false;
    if (grid_enabled_) done = query_grid(c.data(), radius, out);
    if (!done && kd_enabled_) {
        query_kd(0, c.data(), radius, query_slack(radius, std::abs(c.maxCoeff()) + std::abs(c.minCoeff())), out);
        done = true;
    }
    if (!done) query_brute(c.data(), radius, out);

    std::sort(out.begin(), out.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.position < b.position; });
    return out;
}

std::vector<Index> RangeIndex::query_positions(const Eigen::Ref<const Eigen::VectorXd>& center,
                                               double radius) const {
    std::vector<Index> out;
    for (const auto& n : query(center, radius)) out.push_back(n.position);
    return out;
}

RangeIndex build_index(const Dataset& ds, IndexOptions options) { return RangeIndex(ds, options); }

std::vector<ObjectId> range_query(const RangeIndex& index, const Point& center, double radius) {
    std::vector<ObjectId> out;
    for (const auto& n : index.query(center.coords, radius)) out.push_back(index.id(n.position));
    return out;
}

std::vector<Index> brute_force_range_query(const Dataset& ds,
                                           const Eigen::Ref<const Eigen::VectorXd>& center,
                                           double radius) {
    if (center.size() != ds.dim()) throw InputError("brute-force range query: dimension mismatch");
    std::vector<Index> out;
    for (Index i = 0; i < ds.size(); ++i) {
        if (distance(ds.coords(i), center) <= radius) out.push_back(i);
    }
    return out;
}

}  // namespace sdbdc
