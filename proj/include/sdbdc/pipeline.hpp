#pragma once

#include "sdbdc/datagen.hpp"
#include "sdbdc/evaluation.hpp"
#include "sdbdc/global_clustering.hpp"
#include "sdbdc/relabeling.hpp"
#include "sdbdc/representatives.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdbdc {

/// Order in which the server visits the merged representatives.
enum class MergeOrder {
    round_robin,  // ascending (seq, site): every site's best first
    site_major,   // ascending (site, seq)
};

MergeOrder parse_merge_order(const std::string& text);

struct PipelineConfig {
    int n_sites = 4;
    GlobalParams params;
    StopCriterion stop = StopCriterion::max_fraction(0.05);
    CostModel cost;
    std::uint64_t partition_seed = 1;
    MergeOrder merge = MergeOrder::round_robin;
    bool concurrent = false;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    PipelineConfig pipeline;
    std::vector<double> fractions;
    std::vector<int> site_counts;
};

/// JSON experiment description; see configs/ for the shipped presets.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct PipelineResult {
    std::vector<Dataset> sites;
    std::vector<std::vector<RepresentativeRecord>> streams;
    std::vector<CoverageOwner> owners;
    std::vector<RepresentativeRecord> merged;
    GlobalLabeling global;
    std::vector<LocalLabeling> local;
    ReferenceLabeling reference;
    QualityReport quality;
    TransmissionCost cost;

    std::vector<double> site_cpu_seconds;
    double global_cpu_seconds = 0.0;
    /// Slowest site plus the global clustering, as in a truly distributed run.
    double cpu_time = 0.0;

    std::int64_t n_representatives() const { return static_cast<std::int64_t>(merged.size()); }
};

std::vector<RepresentativeRecord> merge_streams(const std::vector<std::vector<RepresentativeRecord>>& streams,
                                                MergeOrder order);

/// partition -> per-site selection -> merge -> global clustering -> relabel ->
/// comparison with centralized DBSCAN. `reference` may be passed in to avoid
/// recomputing it across runs on the same data.
PipelineResult run_pipeline(const Dataset& data, const PipelineConfig& config,
                            const std::optional<ReferenceLabeling>& reference = std::nullopt);
PipelineResult run_pipeline(const ExperimentConfig& config);

struct SweepRow {
    double fraction = 0.0;
    int n_sites = 0;
    double quality = 0.0;
    std::int64_t bytes = 0;
    double speedup = 0.0;
    double cpu_time = 0.0;
};

/// One pipeline run per (fraction, n_sites) pair, fractions varying fastest
/// within each site count.
std::vector<SweepRow> sweep(const Dataset& data, const PipelineConfig& base, const std::vector<double>& fractions,
                            const std::vector<int>& site_counts);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace sdbdc
