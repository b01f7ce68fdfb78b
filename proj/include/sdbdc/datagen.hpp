#pragma once

#include "sdbdc/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sdbdc {

enum class DatasetKind { A, B, C, custom };

DatasetKind parse_dataset_kind(const std::string& text);
std::string to_string(DatasetKind kind);

/// Gaussian blobs plus uniform noise inside an axis-aligned box.
struct DatasetSpec {
    DatasetKind kind = DatasetKind::custom;
    std::int64_t n_points = 1000;
    std::int64_t n_clusters = 3;
    double noise_fraction = 0.0;
    std::uint64_t seed = 1;
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(2, 100.0);
    /// Range of per-blob standard deviations.
    double min_spread = 2.0;
    double max_spread = 4.0;

    void validate() const;
};

/// Presets: A = 8700 points in randomly placed blobs with moderate noise,
/// B = 4000 points of very noisy data, C = 1021 points in 3 separated blobs.
DatasetSpec preset_spec(DatasetKind kind, std::uint64_t seed);

/// Deterministic for a fixed spec; ids are 0..n-1 in generation order.
Dataset generate(const DatasetSpec& spec);

/// Seeded shuffle followed by a round-robin split into n_sites parts.
std::vector<Dataset> partition(const Dataset& ds, int n_sites, std::uint64_t seed);

}  // namespace sdbdc
