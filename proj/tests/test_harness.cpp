#include "sdbdc/dataset_io.hpp"
#include "sdbdc/pipeline.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace sdbdc;

namespace {

std::string csv_of(const Dataset& ds) {
    std::ostringstream out;
    write_dataset_csv(out, ds);
    return out.str();
}

ExperimentConfig shipped(const std::string& name) {
    return load_experiment_config(std::string(SDBDC_CONFIG_DIR) + "/" + name + ".json");
}

}  // namespace

TEST_CASE("presets have the documented sizes") {
    CHECK(generate(preset_spec(DatasetKind::A, 1)).size() == 8700);
    CHECK(generate(preset_spec(DatasetKind::B, 1)).size() == 4000);
    CHECK(generate(preset_spec(DatasetKind::C, 1)).size() == 1021);
    CHECK(parse_dataset_kind("b") == DatasetKind::B);
    CHECK(to_string(DatasetKind::C) == "C");
    CHECK_THROWS_AS(parse_dataset_kind("D"), InputError);
}

TEST_CASE("generation is deterministic per seed") {
    const auto spec = preset_spec(DatasetKind::B, 7);
    CHECK(csv_of(generate(spec)) == csv_of(generate(spec)));
    CHECK(csv_of(generate(spec)) != csv_of(generate(preset_spec(DatasetKind::B, 8))));
}

TEST_CASE("generated points stay inside the box and ids are 0..n-1") {
    auto spec = preset_spec(DatasetKind::A, 2);
    const Dataset ds = generate(spec);
    for (Index i = 0; i < ds.size(); ++i) {
        CHECK(ds.id(i) == i);
        CHECK((ds.coords(i).array() >= spec.lower.array()).all());
        CHECK((ds.coords(i).array() <= spec.upper.array()).all());
    }
}

TEST_CASE("dataset specs are validated") {
    auto spec = preset_spec(DatasetKind::C, 1);
    spec.noise_fraction = 1.5;
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = preset_spec(DatasetKind::C, 1);
    spec.n_points = -1;
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = preset_spec(DatasetKind::C, 1);
    spec.min_spread = 5.0;
    spec.max_spread = 1.0;
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = preset_spec(DatasetKind::C, 1);
    spec.n_points = 0;
    CHECK_THROWS_AS(generate(spec), InputError);
}

TEST_CASE("dataset C has three reference clusters") {
    const auto cfg = shipped("C");
    const Dataset ds = generate(cfg.dataset);
    CHECK(reference_dbscan(ds, cfg.pipeline.params).n_clusters() == 3);
}

TEST_CASE("partition splits into disjoint near-equal parts") {
    Dataset ds(1);
    for (int k = 0; k < 10; ++k) ds.push_back(k, Eigen::VectorXd::Constant(1, k));
    const auto parts = partition(ds, 3, 5);
    REQUIRE(parts.size() == 3);
    std::multiset<Index> sizes;
    std::set<ObjectId> all;
    for (const auto& p : parts) {
        sizes.insert(p.size());
        for (ObjectId id : p.ids()) CHECK(all.insert(id).second);
    }
    CHECK(sizes == std::multiset<Index>{3, 3, 4});
    CHECK(all.size() == 10);

    const auto one = partition(ds, 1, 5);
    REQUIRE(one.size() == 1);
    CHECK(one[0].size() == 10);
    CHECK(csv_of(partition(ds, 3, 5)[1]) == csv_of(parts[1]));
    CHECK_THROWS_AS(partition(ds, 0, 1), InputError);
}

TEST_CASE("one site with full coverage transmits every object once") {
    std::mt19937_64 rng(51);
    const Dataset ds = oracle::random_instance(rng, 500, 2);
    PipelineConfig cfg;
    cfg.n_sites = 1;
    cfg.params = {0.5, 5};
    for (auto stop : {StopCriterion::max_fraction(1.0), StopCriterion::error_bound(0.0)}) {
        cfg.stop = stop;
        const auto r = run_pipeline(ds, cfg);
        std::int64_t total = 0;
        for (const auto& rep : r.merged) total += rep.cov_cnt;
        CHECK(total == ds.size());
        CHECK(r.owners[0].size() == static_cast<std::size_t>(ds.size()));
    }
}

TEST_CASE("with eps below every pairwise distance both sides are all noise") {
    Dataset ds(2);
    for (int x = 0; x < 10; ++x)
        for (int y = 0; y < 10; ++y) ds.push_back(10 * x + y, Eigen::Vector2d(x, y));
    PipelineConfig cfg;
    cfg.n_sites = 3;
    cfg.params = {0.5, 2};
    cfg.stop = StopCriterion::max_fraction(0.3);
    const auto r = run_pipeline(ds, cfg);
    CHECK(r.quality.matching_quality == 1.0);
    CHECK(r.reference.n_clusters() == 0);
}

TEST_CASE("dataset C reaches high quality with 20% representatives on 4 sites") {
    const auto r = run_pipeline(shipped("C"));
    CHECK(r.quality.matching_quality >= 0.95);
    CHECK(r.sites.size() == 4);
    CHECK(r.cost.bytes_full == 1021 * 100);
    CHECK(r.cost.bytes_distributed == r.n_representatives() * 108);
    CHECK(r.cpu_time >= r.global_cpu_seconds);
}

TEST_CASE("merge orders") {
    auto mk = [](SiteId site, Seq seq) { return RepresentativeRecord{Point{-1, Eigen::Vector2d(0, 0)}, 0, 1, site, seq}; };
    const std::vector<std::vector<RepresentativeRecord>> streams{{mk(0, 0), mk(0, 1), mk(0, 2)}, {mk(1, 0)}};
    std::vector<RepKey> rr, sm;
    for (const auto& r : merge_streams(streams, MergeOrder::round_robin)) rr.emplace_back(r.site, r.seq);
    for (const auto& r : merge_streams(streams, MergeOrder::site_major)) sm.emplace_back(r.site, r.seq);
    CHECK(rr == std::vector<RepKey>{{0, 0}, {1, 0}, {0, 1}, {0, 2}});
    CHECK(sm == std::vector<RepKey>{{0, 0}, {0, 1}, {0, 2}, {1, 0}});
    CHECK(parse_merge_order("site-major") == MergeOrder::site_major);
    CHECK_THROWS_AS(parse_merge_order("random"), InputError);
}

TEST_CASE("sequential and concurrent runs give identical results") {
    auto cfg = shipped("B");
    cfg.pipeline.n_sites = 6;
    const Dataset ds = generate(cfg.dataset);
    const auto seq_run = run_pipeline(ds, cfg.pipeline);
    cfg.pipeline.concurrent = true;
    const auto par_run = run_pipeline(ds, cfg.pipeline, seq_run.reference);
    CHECK(par_run.global.labels == seq_run.global.labels);
    CHECK(par_run.quality.matching_quality == seq_run.quality.matching_quality);
    REQUIRE(par_run.merged.size() == seq_run.merged.size());
    for (std::size_t i = 0; i < par_run.merged.size(); ++i) {
        CHECK(par_run.merged[i].point.id == seq_run.merged[i].point.id);
        CHECK(par_run.merged[i].cov_rad == seq_run.merged[i].cov_rad);
    }
}

TEST_CASE("sweep produces one row per combination") {
    auto cfg = shipped("C");
    const Dataset ds = generate(cfg.dataset);
    const auto rows = sweep(ds, cfg.pipeline, {0.05, 0.2}, {2, 3});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].fraction == 0.05);
    CHECK(rows[0].n_sites == 2);
    CHECK(rows[1].fraction == 0.2);
    CHECK(rows[3].n_sites == 3);
    CHECK(rows[1].speedup < rows[0].speedup);
    std::ostringstream out;
    write_sweep_csv(out, rows);
    CHECK(out.str().rfind("fraction,n_sites,quality,bytes,speedup,cpu_time\n0.05,2,", 0) == 0);
    CHECK_THROWS_AS(sweep(ds, cfg.pipeline, {}, {2}), InputError);
    CHECK_THROWS_AS(sweep(ds, cfg.pipeline, {0.1}, {}), InputError);
}

TEST_CASE("experiment configs") {
    const auto a = shipped("A");
    CHECK(a.dataset.kind == DatasetKind::A);
    CHECK(a.pipeline.params.epsilon == 2.5);
    CHECK(a.pipeline.params.min_pts == 20);
    CHECK(a.fractions == std::vector<double>{0.01, 0.02, 0.05, 0.1, 0.2});
    CHECK(a.pipeline.stop.size_limit(1000) == 50);

    const auto custom = parse_experiment_config(
        R"({"dataset":{"kind":"C","seed":3,"n_points":50},"epsilon":1.5,"min_pts":4,"merge":"site-major"})");
    CHECK(custom.dataset.n_points == 50);
    CHECK(custom.dataset.seed == 3);
    CHECK(custom.pipeline.merge == MergeOrder::site_major);
    CHECK(custom.pipeline.n_sites == 4);

    CHECK_THROWS_AS(parse_experiment_config("{"), InputError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"dataset":{"kind":"A"},"min_pts":4})"), InputError);
    CHECK_THROWS_AS(parse_experiment_config(R"({"dataset":{"kind":"A"},"epsilon":1,"min_pts":4,"budget":2})"),
                    InputError);
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), InputError);
}
