#pragma once

#include "sdbdc/global_clustering.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sdbdc {

using Labels = std::map<ObjectId, ClusterId>;

struct QualityReport {
    double matching_quality = 0.0;
    double adjusted_rand = 0.0;
    std::int64_t n_objects = 0;
    std::int64_t n_clusters_distributed = 0;
    std::int64_t n_clusters_reference = 0;
};

struct CostModel {
    std::int64_t bytes_per_object = 100;
    std::int64_t bytes_per_aggregate = 4;  // each of CovRad and CovCnt

    void validate() const;
};

struct TransmissionCost {
    std::int64_t bytes_distributed = 0;
    std::int64_t bytes_full = 0;
    double speedup = 0.0;  // bytes_full / bytes_distributed; +inf for zero representatives
};

/// Row-to-column assignment maximizing the total weight of a non-negative
/// integer matrix; -1 marks unassigned rows.
std::vector<Index> max_weight_assignment(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& weights);

/// Fraction of objects labeled consistently under the best one-to-one
/// matching of non-noise clusters; noise only ever matches noise.
double matching_quality(const Labels& distributed, const Labels& reference);

/// Pair-counting adjusted Rand index, NOISE treated as one ordinary class.
double adjusted_rand(const Labels& a, const Labels& b);

QualityReport evaluate(const Labels& distributed, const Labels& reference);
std::string to_json(const QualityReport& report);

TransmissionCost transmission_cost(std::int64_t n_reps, std::int64_t n_total, const CostModel& model);
/// CSV row `frac,bytes_distributed,bytes_full,speedup`.
std::string cost_csv_row(double fraction, const TransmissionCost& cost);
inline constexpr const char* kCostCsvHeader = "frac,bytes_distributed,bytes_full,speedup";

}  // namespace sdbdc
