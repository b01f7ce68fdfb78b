#include "sdbdc/dataset_io.hpp"
#include "sdbdc/geometry.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

using namespace sdbdc;

namespace {

Eigen::VectorXd v2(double x, double y) { return Eigen::Vector2d(x, y); }

std::vector<Index> as_positions(const std::vector<Neighbor>& ns) {
    std::vector<Index> out;
    for (const auto& n : ns) out.push_back(n.position);
    return out;
}

}  // namespace

TEST_CASE("distance on hand-checkable pairs") {
    CHECK(distance(v2(0, 0), v2(0, 0)) == 0.0);
    CHECK(distance(v2(0, 0), v2(3, 4)) == 5.0);
    CHECK(distance(v2(1, 2), v2(4, 6)) == 5.0);
    CHECK(distance(Point{0, v2(3, 4)}, Point{1, v2(0, 0)}) == 5.0);
}

TEST_CASE("distance rejects mismatched dimensions") {
    CHECK_THROWS_AS(distance(v2(0, 0), Eigen::Vector3d(0, 0, 0)), InputError);
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int t = 0; t < 500; ++t) {
        Eigen::VectorXd a(3), b(3), c(3);
        for (int k = 0; k < 3; ++k) {
            a[k] = u(rng);
            b[k] = u(rng);
            c[k] = u(rng);
        }
        CHECK(distance(a, b) == distance(b, a));
        CHECK(distance(a, c) <= (distance(a, b) + distance(b, c)) * (1 + 1e-9));
    }
}

TEST_CASE("Dataset validates its invariants") {
    Dataset ds(2);
    ds.push_back(4, v2(1, 1));
    CHECK_THROWS_AS(ds.push_back(4, v2(2, 2)), InputError);  // duplicate id
    CHECK_THROWS_AS(ds.push_back(5, Eigen::Vector3d(1, 2, 3)), InputError);
    CHECK_THROWS_AS(ds.push_back(6, v2(std::numeric_limits<double>::quiet_NaN(), 0)), InputError);
    CHECK_THROWS_AS(ds.push_back(7, v2(std::numeric_limits<double>::infinity(), 0)), InputError);
    CHECK_THROWS_AS(ds.push_back(-1, v2(0, 0)), InputError);
    CHECK_THROWS_AS(Dataset(0), InputError);
    CHECK(ds.size() == 1);
    CHECK(ds.position_of(4) == 0);
    CHECK(ds.position_of(5) == -1);
}

TEST_CASE("duplicate coordinates are distinct objects") {
    Dataset ds(2);
    ds.push_back(0, v2(1, 1));
    ds.push_back(1, v2(1, 1));
    const auto idx = build_index(ds);
    CHECK(range_query(idx, ds.point(0), 0.0) == std::vector<ObjectId>{0, 1});
}

TEST_CASE("empty and singleton indexes") {
    Dataset empty(2);
    for (auto kind : {IndexKind::automatic, IndexKind::grid, IndexKind::kd_tree, IndexKind::brute_force}) {
        const RangeIndex idx(empty, IndexOptions{kind, 1.0});
        CHECK(idx.query(v2(0, 0), 100.0).empty());
    }
    Dataset one(2);
    one.push_back(9, v2(2, 3));
    for (auto kind : {IndexKind::automatic, IndexKind::grid, IndexKind::kd_tree, IndexKind::brute_force}) {
        const RangeIndex idx(one, IndexOptions{kind, 1.0});
        for (double r : {0.0, 0.5, 10.0}) CHECK(range_query(idx, one.point(0), r) == std::vector<ObjectId>{9});
    }
}

TEST_CASE("range query uses closed balls") {
    Dataset ds(2);
    ds.push_back(10, v2(0, 0));
    ds.push_back(11, v2(1, 0));
    ds.push_back(12, v2(3, 0));
    for (auto kind : {IndexKind::grid, IndexKind::kd_tree, IndexKind::brute_force}) {
        const RangeIndex idx(ds, IndexOptions{kind, 1.0});
        CHECK(range_query(idx, ds.point(0), 1.0) == std::vector<ObjectId>{10, 11});
        CHECK(range_query(idx, ds.point(0), 0.0) == std::vector<ObjectId>{10});
        CHECK(range_query(idx, ds.point(1), 2.0) == std::vector<ObjectId>{10, 11, 12});
    }
}

TEST_CASE("range query rejects bad input") {
    Dataset ds(2);
    ds.push_back(0, v2(0, 0));
    const auto idx = build_index(ds);
    CHECK_THROWS_AS(idx.query(Eigen::Vector3d(0, 0, 0), 1.0), InputError);
    CHECK_THROWS_AS(idx.query(v2(0, 0), -1.0), InputError);
    CHECK_THROWS_AS(RangeIndex(Dataset(4), IndexOptions{IndexKind::grid, 1.0}), InputError);
}

TEST_CASE("index matches brute force on random data") {
    std::mt19937_64 rng(11);
    struct Case {
        Index n, dim;
        int queries;
    };
    for (const Case c : {Case{200, 2, 50}, Case{500, 2, 100}, Case{300, 3, 60}, Case{250, 5, 60}}) {
        const Dataset ds = oracle::random_instance(rng, c.n, c.dim, 4, 0.3, 10.0);
        std::uniform_real_distribution<double> u(-1.0, 11.0);
        std::uniform_real_distribution<double> radius(0.0, 3.0);
        std::vector<RangeIndex> indexes;
        indexes.emplace_back(ds, IndexOptions{IndexKind::automatic, 0.7});
        indexes.emplace_back(ds, IndexOptions{IndexKind::kd_tree, 0.0});
        indexes.emplace_back(ds, IndexOptions{IndexKind::automatic, 0.0});
        if (c.dim <= 3) indexes.emplace_back(ds, IndexOptions{IndexKind::grid, 0.25});
        for (int q = 0; q < c.queries; ++q) {
            Eigen::VectorXd center(c.dim);
            for (Index k = 0; k < c.dim; ++k) center[k] = u(rng);
            // half the queries centred on members
            if (q % 2 == 0) center = ds.coords(q % ds.size());
            const double r = q % 7 == 0 ? 25.0 : radius(rng);
            const auto expected = brute_force_range_query(ds, center, r);
            for (const auto& idx : indexes) CHECK(as_positions(idx.query(center, r)) == expected);
        }
    }
}

TEST_CASE("index matches brute force on points lying exactly on the radius") {
    // integer lattice: many points at exactly distance 1, 2, sqrt(2) ...
    Dataset ds(2);
    ObjectId id = 0;
    for (int x = -5; x <= 5; ++x)
        for (int y = -5; y <= 5; ++y) ds.push_back(id++, v2(x, y));
    for (auto kind : {IndexKind::grid, IndexKind::kd_tree}) {
        for (double side : {1.0, 0.5, 2.0, 0.3}) {
            const RangeIndex idx(ds, IndexOptions{kind, side});
            for (Index i = 0; i < ds.size(); i += 7) {
                for (double r : {0.0, 1.0, 2.0, 3.0, 5.0}) {
                    CHECK(idx.query_positions(ds.coords(i), r) == brute_force_range_query(ds, ds.coords(i), r));
                }
            }
        }
    }
}

TEST_CASE("index stays exact at 10^4 points") {
    std::mt19937_64 rng(5);
    const Dataset ds = oracle::random_instance(rng, 10000, 2, 8, 0.3, 100.0);
    const RangeIndex idx(ds, IndexOptions{IndexKind::automatic, 2.0});
    std::uniform_int_distribution<Index> pick(0, ds.size() - 1);
    for (int q = 0; q < 40; ++q) {
        const Index i = pick(rng);
        CHECK(idx.query_positions(ds.coords(i), 2.0) == brute_force_range_query(ds, ds.coords(i), 2.0));
        CHECK(idx.query_positions(ds.coords(i), 9.0) == brute_force_range_query(ds, ds.coords(i), 9.0));
    }
}

TEST_CASE("dataset CSV round trip and header validation") {
    Dataset ds(2);
    ds.push_back(3, v2(0.1, -2.5e-7));
    ds.push_back(1, v2(1.0 / 3.0, 12345.678));
    std::stringstream buf;
    write_dataset_csv(buf, ds);
    CHECK(buf.str().rfind("id,c0,c1\n3,0.1,-2.5e-07\n", 0) == 0);
    const Dataset back = read_dataset_csv(buf);
    REQUIRE(back.size() == 2);
    CHECK(back.ids() == ds.ids());
    CHECK(back.matrix() == ds.matrix());

    std::istringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(read_dataset_csv(no_header), InputError);
    std::istringstream bad_header("id,x,y\n1,2,3\n");
    CHECK_THROWS_AS(read_dataset_csv(bad_header), InputError);
    std::istringstream short_row("id,c0,c1\n1,2\n");
    CHECK_THROWS_AS(read_dataset_csv(short_row), InputError);
    std::istringstream bad_number("id,c0\n1,abc\n");
    CHECK_THROWS_AS(read_dataset_csv(bad_number), InputError);
    std::istringstream dup("id,c0\n1,0\n1,1\n");
    CHECK_THROWS_AS(read_dataset_csv(dup), InputError);
}
