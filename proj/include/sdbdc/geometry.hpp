#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sdbdc {

using ObjectId = std::int64_t;
using Index = Eigen::Index;

/// Raised for malformed or inconsistent caller input (dimension mismatch, bad ids, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Point {
    ObjectId id = 0;
    Eigen::VectorXd coords;
};

/// Euclidean distance between two coordinate vectors.
template <class DerivedA, class DerivedB>
double distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size()) {
        throw InputError("distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    return std::sqrt((a - b).squaredNorm());
}

inline double distance(const Point& a, const Point& b) { return distance(a.coords, b.coords); }

/// A set of d-dimensional points with unique ids, stored point-major so each
/// point is a contiguous column of a dim x size matrix.
class Dataset {
public:
    using ConstColumn = Eigen::Map<const Eigen::VectorXd>;
    using ConstMatrix = Eigen::Map<const Eigen::MatrixXd>;

    explicit Dataset(Index dim = 1);
    Dataset(Index dim, std::vector<Point> points);

    Index dim() const { return dim_; }
    Index size() const { return static_cast<Index>(ids_.size()); }
    bool empty() const { return ids_.empty(); }

    ObjectId id(Index i) const { return ids_[static_cast<std::size_t>(i)]; }
    const std::vector<ObjectId>& ids() const { return ids_; }
    ConstColumn coords(Index i) const { return ConstColumn(storage_.data() + i * dim_, dim_); }
    /// All coordinates as a dim x size matrix view.
    ConstMatrix matrix() const { return ConstMatrix(storage_.data(), dim_, size()); }
    Point point(Index i) const { return Point{id(i), coords(i)}; }

    /// Position of `id`, or -1 when absent.
    Index position_of(ObjectId id) const;
    bool contains(ObjectId id) const { return position_of(id) >= 0; }

    /// Appends a point; throws InputError on wrong dimensionality, non-finite
    /// coordinates or a duplicate id.
    void push_back(ObjectId id, const Eigen::Ref<const Eigen::VectorXd>& coords);
    void push_back(const Point& p) { push_back(p.id, p.coords); }
    void reserve(Index n);

    /// New dataset holding the points at `positions`, in that order.
    Dataset subset(const std::vector<Index>& positions) const;

private:
    Index dim_;
    std::vector<ObjectId> ids_;
    std::vector<double> storage_;
    std::unordered_map<ObjectId, Index> positions_;
};

enum class IndexKind { automatic, grid, kd_tree, brute_force };

struct IndexOptions {
    IndexKind kind = IndexKind::automatic;
    /// Grid cell side; <= 0 picks one from the data extent.
    double cell_side = 0.0;
};

struct Neighbor {
    Index position;
    double dist;
};

/// Fixed-radius range index over a snapshot of a dataset. Results are closed
/// balls, {p : d(p, center) <= radius}, reported in ascending position order.
/// Immutable after construction; concurrent queries are safe.
class RangeIndex {
public:
    explicit RangeIndex(const Dataset& ds, IndexOptions options = {});

    Index dim() const { return dim_; }
    Index size() const { return static_cast<Index>(ids_.size()); }
    ObjectId id(Index i) const { return ids_[static_cast<std::size_t>(i)]; }
    Eigen::Map<const Eigen::VectorXd> coords(Index i) const {
        return Eigen::Map<const Eigen::VectorXd>(coords_.data() + i * dim_, dim_);
    }

    std::vector<Neighbor> query(const Eigen::Ref<const Eigen::VectorXd>& center, double radius) const;
    std::vector<Index> query_positions(const Eigen::Ref<const Eigen::VectorXd>& center,
                                       double radius) const;

    bool has_grid() const { return grid_enabled_; }
    bool has_kd_tree() const { return kd_enabled_; }

private:
    struct CellKey {
        std::array<std::int64_t, 3> c{};
        bool operator==(const CellKey&) const = default;
    };
    struct CellHash {
        std::size_t operator()(const CellKey& k) const noexcept;
    };
    struct KdNode {
        Index begin = 0, end = 0;  // range in kd_order_
        int split_dim = -1;        // -1 for leaves
        double split = 0.0;
        std::int32_t left = -1, right = -1;
    };

    CellKey cell_of(const double* x) const;
    void build_grid();
    std::int32_t build_kd(Index begin, Index end, int depth);

    void query_brute(const double* c, double radius, std::vector<Neighbor>& out) const;
    bool query_grid(const double* c, double radius, std::vector<Neighbor>& out) const;
    void query_kd(std::int32_t node, const double* c, double radius, double slack,
                  std::vector<Neighbor>& out) const;
    double dist_to(const double* c, Index i) const;

    Index dim_;
    IndexKind kind_;
    double cell_side_ = 0.0;
    bool grid_enabled_ = false;
    bool kd_enabled_ = false;
    std::vector<ObjectId> ids_;
    std::vector<double> coords_;
    std::vector<double> lower_;
    std::unordered_map<CellKey, std::vector<Index>, CellHash> cells_;
    std::vector<Index> kd_order_;
    std::vector<KdNode> nodes_;
};

RangeIndex build_index(const Dataset& ds, IndexOptions options = {});

/// Ids of all indexed points within the closed ball, ascending by position.
std::vector<ObjectId> range_query(const RangeIndex& index, const Point& center, double radius);

/// Linear-scan reference for range queries.
std::vector<Index> brute_force_range_query(const Dataset& ds,
                                           const Eigen::Ref<const Eigen::VectorXd>& center,
                                           double radius);

}  // namespace sdbdc
