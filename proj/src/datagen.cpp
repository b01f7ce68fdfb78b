#include "sdbdc/datagen.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace sdbdc {

DatasetKind parse_dataset_kind(const std::string& text) {
    if (text == "A" || text == "a") return DatasetKind::A;
    if (text == "B" || text == "b") return DatasetKind::B;
    if (text == "C" || text == "c") return DatasetKind::C;
    if (text == "custom") return DatasetKind::custom;
    throw InputError("unknown dataset kind '" + text + "' (expected A, B, C or custom)");
}

std::string to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::A: return "A";
        case DatasetKind::B: return "B";
        case DatasetKind::C: return "C";
        case DatasetKind::custom: return "custom";
    }
    return "custom";
}

void DatasetSpec::validate() const {
    if (n_points < 1) throw InputError("dataset spec: n_points must be positive");
    if (n_clusters < 0) throw InputError("dataset spec: n_clusters must be non-negative");
    if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
        throw InputError("dataset spec: noise_fraction must lie in [0, 1]");
    }
    if (n_clusters == 0 && noise_fraction < 1.0) {
        throw InputError("dataset spec: without clusters every point must be noise");
    }
    if (lower.size() < 1 || lower.size() != upper.size() || !(upper.array() > lower.array()).all()) {
        throw InputError("dataset spec: bounds must be a non-empty box");
    }
    if (!(min_spread > 0.0 && max_spread >= min_spread)) throw InputError("dataset spec: bad spread range");
}

DatasetSpec preset_spec(DatasetKind kind, std::uint64_t seed) {
    DatasetSpec s;
    s.kind = kind;
    s.seed = seed;
    switch (kind) {
        case DatasetKind::A:
            s.n_points = 8700;
            s.n_clusters = 8;
            s.noise_fraction = 0.1;
            s.min_spread = 2.0;
            s.max_spread = 4.0;
            break;
        case DatasetKind::B:
            s.n_points = 4000;
            s.n_clusters = 4;
            s.noise_fraction = 0.4;
            s.min_spread = 3.0;
            s.max_spread = 5.0;
            break;
        case DatasetKind::C:
            s.n_points = 1021;
            s.n_clusters = 3;
            s.noise_fraction = 0.0;
            s.min_spread = 4.0;
            s.max_spread = 6.0;
            break;
        case DatasetKind::custom:
            break;
    }
    return s;
}

namespace {

struct Blob {
    Eigen::VectorXd center;
    double spread;
};

// Blob centres keep at least 5 spreads (summed) of distance, so the presets
// produce separable clusters; falls back to the last draw after enough tries.
std::vector<Blob> place_blobs(const DatasetSpec& spec, std::mt19937_64& rng) {
    const Index dim = spec.lower.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> spread(spec.min_spread, spec.max_spread);
    std::vector<Blob> blobs;
    for (std::int64_t c = 0; c < spec.n_clusters; ++c) {
        Blob b;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            b.spread = spread(rng);
            const double margin = 2.5 * b.spread;
            b.center.resize(dim);
            for (Index k = 0; k < dim; ++k) {
                const double lo = spec.lower[k] + margin, hi = spec.upper[k] - margin;
                b.center[k] = lo < hi ? lo + (hi - lo) * unit(rng) : 0.5 * (spec.lower[k] + spec.upper[k]);
            }
            const bool clear = std::all_of(blobs.begin(), blobs.end(), [&](const Blob& o) {
                return distance(o.center, b.center) >= 5.0 * (o.spread + b.spread);
            });
            if (clear) break;
        }
        blobs.push_back(std::move(b));
    }
    return blobs;
}

}  // namespace

Dataset generate(const DatasetSpec& spec) {
    spec.validate();
    const Index dim = spec.lower.size();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto blobs = place_blobs(spec, rng);
    const auto n_noise = spec.n_clusters == 0
                             ? spec.n_points
                             : static_cast<std::int64_t>(std::llround(spec.noise_fraction * static_cast<double>(spec.n_points)));
    const std::int64_t n_clustered = spec.n_points - n_noise;

    // Blob sizes from random weights in [0.5, 1.5], remainder spread one by one.
    std::vector<std::int64_t> sizes(blobs.size(), 0);
    if (!blobs.empty()) {
        std::vector<double> w(blobs.size());
        for (auto& x : w) x = 0.5 + unit(rng);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        std::int64_t assigned = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            sizes[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(n_clustered) * w[i] / total));
            assigned += sizes[i];
        }
        for (std::size_t i = 0; assigned < n_clustered; i = (i + 1) % sizes.size(), ++assigned) ++sizes[i];
    }

    Dataset ds(dim);
    ds.reserve(spec.n_points);
    Eigen::VectorXd x(dim);
    ObjectId next_id = 0;
    auto inside = [&](const Eigen::VectorXd& p) {
        return (p.array() >= spec.lower.array()).all() && (p.array() <= spec.upper.array()).all();
    };
    for (std::size_t b = 0; b < blobs.size(); ++b) {
        for (std::int64_t i = 0; i < sizes[b]; ++i) {
            do {
                for (Index k = 0; k < dim; ++k) x[k] = blobs[b].center[k] + blobs[b].spread * normal(rng);
            } while (!inside(x));
            ds.push_back(next_id++, x);
        }
    }
    for (std::int64_t i = 0; i < n_noise; ++i) {
        for (Index k = 0; k < dim; ++k) x[k] = spec.lower[k] + (spec.upper[k] - spec.lower[k]) * unit(rng);
        ds.push_back(next_id++, x);
    }
    return ds;
}

std::vector<Dataset> partition(const Dataset& ds, int n_sites, std::uint64_t seed) {
    if (n_sites < 1) throw InputError("partition: need at least one site");
    std::vector<Index> order(static_cast<std::size_t>(ds.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<Index>> parts(static_cast<std::size_t>(n_sites));
    for (std::size_t i = 0; i < order.size(); ++i) parts[i % parts.size()].push_back(order[i]);
    std::vector<Dataset> out;
    out.reserve(parts.size());
    for (auto& p : parts) {
        std::sort(p.begin(), p.end());
        out.push_back(ds.subset(p));
    }
    return out;
}

}  // namespace sdbdc
