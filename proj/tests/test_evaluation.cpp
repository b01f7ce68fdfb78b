#include "sdbdc/evaluation.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

using namespace sdbdc;

namespace {

using Matrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

Labels labels_from(const std::vector<ClusterId>& v, ObjectId stride = 1) {
    Labels out;
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace(static_cast<ObjectId>(i) * stride, v[i]);
    return out;
}

// Best total over all injective row -> column maps (rows <= cols after transposing).
std::int64_t brute_force_best(const Matrix& w) {
    const Matrix m = w.rows() <= w.cols() ? w : Matrix(w.transpose());
    std::vector<Index> cols(static_cast<std::size_t>(m.cols()));
    std::iota(cols.begin(), cols.end(), Index{0});
    std::int64_t best = 0;
    do {
        std::int64_t s = 0;
        for (Index r = 0; r < m.rows(); ++r) s += m(r, cols[static_cast<std::size_t>(r)]);
        best = std::max(best, s);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

}  // namespace

TEST_CASE("identical labelings score 1") {
    const auto l = labels_from({1, 1, 2, 0, 2, 3});
    CHECK(matching_quality(l, l) == 1.0);
    CHECK(adjusted_rand(l, l) == 1.0);
}

TEST_CASE("renamed clusters still score 1") {
    CHECK(matching_quality(labels_from({1, 1, 2, 2, 0}), labels_from({5, 5, 3, 3, 0})) == 1.0);
    CHECK(adjusted_rand(labels_from({1, 1, 2, 2, 0}), labels_from({5, 5, 3, 3, 0})) == doctest::Approx(1.0));
}

TEST_CASE("noise never matches a cluster") {
    CHECK(matching_quality(labels_from({0, 0, 0, 0}), labels_from({1, 1, 1, 1})) == 0.0);
    CHECK(matching_quality(labels_from({0, 0, 1, 1}), labels_from({0, 1, 1, 1})) == 0.75);
}

TEST_CASE("matching is one to one") {
    // distributed merged two reference clusters: only the larger can match
    CHECK(matching_quality(labels_from({1, 1, 1, 1, 1}), labels_from({1, 1, 1, 2, 2})) == doctest::Approx(0.6));
    // split: only the larger half matches
    CHECK(matching_quality(labels_from({1, 1, 2, 2, 2}), labels_from({1, 1, 1, 1, 1})) == doctest::Approx(0.6));
}

TEST_CASE("metrics need the same object ids") {
    CHECK_THROWS_AS(matching_quality(labels_from({1, 1}), labels_from({1, 1, 1})), InputError);
    CHECK_THROWS_AS(adjusted_rand(labels_from({1, 1}), labels_from({1, 1}, 2)), InputError);
    CHECK(matching_quality({}, {}) == 1.0);
}

TEST_CASE("assignment matches a permutation search") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> dim(0, 5);
    std::uniform_int_distribution<std::int64_t> val(0, 30);
    for (int t = 0; t < 200; ++t) {
        Matrix w(dim(rng), dim(rng));
        for (Index r = 0; r < w.rows(); ++r)
            for (Index c = 0; c < w.cols(); ++c) w(r, c) = t % 3 == 0 ? val(rng) % 3 : val(rng);
        const auto a = max_weight_assignment(w);
        REQUIRE(a.size() == static_cast<std::size_t>(w.rows()));
        std::int64_t total = 0;
        std::vector<char> used(static_cast<std::size_t>(w.cols()), 0);
        for (Index r = 0; r < w.rows(); ++r) {
            const Index c = a[static_cast<std::size_t>(r)];
            if (c < 0) continue;
            REQUIRE(c < w.cols());
            CHECK_FALSE(used[static_cast<std::size_t>(c)]);
            used[static_cast<std::size_t>(c)] = 1;
            total += w(r, c);
        }
        CHECK(total == brute_force_best(w));
    }
}

TEST_CASE("adjusted Rand on hand-counted cases") {
    // singletons against one class: index 0, expected 0, max 3
    CHECK(adjusted_rand(labels_from({1, 2, 3, 4}), labels_from({1, 1, 1, 1})) == 0.0);
    // both one class, or both singletons: max == expected, defined as 1
    CHECK(adjusted_rand(labels_from({1, 1, 1}), labels_from({7, 7, 7})) == 1.0);
    CHECK(adjusted_rand(labels_from({1, 2, 3}), labels_from({3, 2, 1})) == 1.0);
    // {a,b}{c,d} against {a,b,c}{d}: index 1, sums 2 and 3, expected 1, max 2.5
    CHECK(adjusted_rand(labels_from({1, 1, 2, 2}), labels_from({1, 1, 1, 2})) == doctest::Approx(0.0));
    // n = 6: {0,1,2}{3,4,5} vs {0,1}{2,3}{4,5}: index 2, sums 6 and 3, expected 1.2, max 4.5
    CHECK(adjusted_rand(labels_from({1, 1, 1, 2, 2, 2}), labels_from({1, 1, 2, 2, 3, 3})) ==
          doctest::Approx((2.0 - 1.2) / (4.5 - 1.2)));
}

TEST_CASE("adjusted Rand averages to zero for independent labelings") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<ClusterId> pick(0, 4);
    double sum = 0.0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        std::vector<ClusterId> a(200), b(200);
        for (auto& x : a) x = pick(rng);
        for (auto& x : b) x = pick(rng);
        sum += adjusted_rand(labels_from(a), labels_from(b));
    }
    CHECK(std::abs(sum / trials) <= 0.05);
}

TEST_CASE("evaluate fills the report and serializes in fixed key order") {
    const auto r = evaluate(labels_from({1, 1, 2, 0}), labels_from({1, 1, 1, 0}));
    CHECK(r.matching_quality == 0.75);
    CHECK(r.n_objects == 4);
    CHECK(r.n_clusters_distributed == 2);
    CHECK(r.n_clusters_reference == 1);
    const auto json = to_json(r);
    CHECK(json.find("{\"matching_quality\":0.75,\"adjusted_rand\":") == 0);
    CHECK(json.find("\"n_objects\":4,\"n_clusters_distributed\":2,\"n_clusters_reference\":1}") != std::string::npos);
}

TEST_CASE("transmission cost examples") {
    const CostModel m;
    const auto a = transmission_cost(100, 10000, m);
    CHECK(a.bytes_distributed == 10800);
    CHECK(a.bytes_full == 1000000);
    CHECK(a.speedup == doctest::Approx(1000000.0 / 10800.0).epsilon(1e-12));

    const auto b = transmission_cost(1, 1, m);
    CHECK(b.speedup == doctest::Approx(100.0 / 108.0).epsilon(1e-12));

    const auto none = transmission_cost(0, 50, m);
    CHECK(none.bytes_distributed == 0);
    CHECK(std::isinf(none.speedup));

    const CostModel custom{10, 2};
    CHECK(transmission_cost(5, 17, custom).bytes_distributed == 5 * 14);
    CHECK(static_cast<double>(transmission_cost(5, 17, custom).bytes_full) /
              static_cast<double>(transmission_cost(5, 17, custom).bytes_distributed) ==
          doctest::Approx(170.0 / 70.0));

    CHECK_THROWS_AS(transmission_cost(-1, 10, m), InputError);
    CHECK_THROWS_AS(transmission_cost(11, 10, m), InputError);
    CHECK_THROWS_AS(transmission_cost(1, 10, CostModel{0, 4}), InputError);
}

TEST_CASE("17% of the objects costs 3.4 times as much as 5%") {
    const CostModel m;
    const auto low = transmission_cost(50, 1000, m);
    const auto high = transmission_cost(170, 1000, m);
    CHECK(static_cast<double>(high.bytes_distributed) / static_cast<double>(low.bytes_distributed) == 3.4);
    CHECK(std::abs(low.speedup - 100.0 / (0.05 * 108.0)) <= 1e-12);
}

TEST_CASE("cost CSV rows") {
    CHECK(cost_csv_row(0.05, transmission_cost(5, 100, CostModel{})) == "0.05,540,10000,18.51851851851852");
    CHECK(std::string(kCostCsvHeader) == "frac,bytes_distributed,bytes_full,speedup");
}
