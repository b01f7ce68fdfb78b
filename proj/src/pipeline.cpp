#include "sdbdc/pipeline.hpp"

#include "sdbdc/dataset_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace sdbdc {

namespace {

double thread_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

struct SiteOutput {
    std::vector<RepresentativeRecord> stream;
    CoverageOwner owner;
    double cpu_seconds = 0.0;
};

SiteOutput run_site(const Dataset& site_data, SiteId site, const PipelineConfig& config) {
    const double start = thread_cpu_seconds();
    SiteOutput out;
    if (!site_data.empty()) {
        RepresentativeSelector selector(site_data, config.params.epsilon, config.stop, site);
        out.stream = selector.drain();
        out.owner = selector.state().coverage_owner();
    }
    out.cpu_seconds = thread_cpu_seconds() - start;
    return out;
}

}  // namespace

MergeOrder parse_merge_order(const std::string& text) {
    if (text == "round-robin" || text == "round_robin") return MergeOrder::round_robin;
    if (text == "site-major" || text == "site_major") return MergeOrder::site_major;
    throw InputError("unknown merge order '" + text + "' (expected round-robin or site-major)");
}

std::vector<RepresentativeRecord> merge_streams(const std::vector<std::vector<RepresentativeRecord>>& streams,
                                                MergeOrder order) {
    std::vector<RepresentativeRecord> merged;
    if (order == MergeOrder::site_major) {
        for (const auto& s : streams) merged.insert(merged.end(), s.begin(), s.end());
        return merged;
    }
    std::size_t longest = 0;
    for (const auto& s : streams) longest = std::max(longest, s.size());
    for (std::size_t seq = 0; seq < longest; ++seq) {
        for (const auto& s : streams) {
            if (seq < s.size()) merged.push_back(s[seq]);
        }
    }
    return merged;
}

PipelineResult run_pipeline(const Dataset& data, const PipelineConfig& config,
                            const std::optional<ReferenceLabeling>& reference) {
    config.params.validate();
    config.cost.validate();
    PipelineResult result;
    result.sites = partition(data, config.n_sites, config.partition_seed);

    const auto n_sites = result.sites.size();
    std::vector<SiteOutput> outputs(n_sites);
    if (config.concurrent) {
        std::vector<std::jthread> workers;
        std::vector<std::exception_ptr> errors(n_sites);
        for (std::size_t s = 0; s < n_sites; ++s) {
            workers.emplace_back([&, s] {
                try {
                    outputs[s] = run_site(result.sites[s], static_cast<SiteId>(s), config);
                } catch (...) {
                    errors[s] = std::current_exception();
                }
            });
        }
        workers.clear();  // joins
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    } else {
        for (std::size_t s = 0; s < n_sites; ++s) {
            outputs[s] = run_site(result.sites[s], static_cast<SiteId>(s), config);
        }
    }
    for (auto& o : outputs) {
        result.streams.push_back(std::move(o.stream));
        result.owners.push_back(std::move(o.owner));
        result.site_cpu_seconds.push_back(o.cpu_seconds);
    }

    result.merged = merge_streams(result.streams, config.merge);
    const double global_start = thread_cpu_seconds();
    result.global = global_dbscan(result.merged, config.params);
    result.global_cpu_seconds = thread_cpu_seconds() - global_start;
    result.cpu_time = result.global_cpu_seconds +
                      (result.site_cpu_seconds.empty()
                           ? 0.0
                           : *std::max_element(result.site_cpu_seconds.begin(), result.site_cpu_seconds.end()));

    for (std::size_t s = 0; s < n_sites; ++s) {
        result.local.push_back(relabel_site(result.sites[s], result.owners[s], result.global, static_cast<SiteId>(s)));
    }

    result.reference = reference ? *reference : reference_dbscan(data, config.params);
    result.quality = evaluate(combine_labelings(result.local), result.reference.as_map());
    result.cost = transmission_cost(result.n_representatives(), data.size(), config.cost);
    return result;
}

PipelineResult run_pipeline(const ExperimentConfig& config) {
    return run_pipeline(generate(config.dataset), config.pipeline);
}

std::vector<SweepRow> sweep(const Dataset& data, const PipelineConfig& base, const std::vector<double>& fractions,
                            const std::vector<int>& site_counts) {
    if (fractions.empty()) throw InputError("sweep: empty fraction list");
    if (site_counts.empty()) throw InputError("sweep: empty site-count list");
    const ReferenceLabeling reference = reference_dbscan(data, base.params);

    std::vector<SweepRow> rows;
    for (int n_sites : site_counts) {
        for (double fraction : fractions) {
            PipelineConfig cfg = base;
            cfg.n_sites = n_sites;
            cfg.stop = StopCriterion::max_fraction(fraction);
            const auto r = run_pipeline(data, cfg, reference);
            rows.push_back({fraction, n_sites, r.quality.matching_quality, r.cost.bytes_distributed, r.cost.speedup,
                            r.cpu_time});
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "fraction,n_sites,quality,bytes,speedup,cpu_time\n";
    for (const auto& r : rows) {
        out << format_double(r.fraction) << ',' << r.n_sites << ',' << format_double(r.quality) << ',' << r.bytes
            << ',' << format_double(r.speedup) << ',' << format_double(r.cpu_time) << '\n';
    }
}

// ---------------------------------------------------------------------------

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("experiment config: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        const auto& d = j.at("dataset");
        const auto kind = parse_dataset_kind(d.at("kind").get<std::string>());
        cfg.dataset = preset_spec(kind, d.value("seed", std::uint64_t{1}));
        cfg.dataset.n_points = d.value("n_points", cfg.dataset.n_points);
        cfg.dataset.n_clusters = d.value("n_clusters", cfg.dataset.n_clusters);
        cfg.dataset.noise_fraction = d.value("noise_fraction", cfg.dataset.noise_fraction);
        cfg.dataset.min_spread = d.value("min_spread", cfg.dataset.min_spread);
        cfg.dataset.max_spread = d.value("max_spread", cfg.dataset.max_spread);
        cfg.dataset.validate();

        auto& p = cfg.pipeline;
        p.params.epsilon = j.at("epsilon").get<double>();
        p.params.min_pts = j.at("min_pts").get<std::int64_t>();
        p.params.validate();
        p.n_sites = j.value("n_sites", 4);
        p.partition_seed = j.value("partition_seed", std::uint64_t{1});
        p.concurrent = j.value("concurrent", false);
        p.merge = parse_merge_order(j.value("merge", std::string("round-robin")));
        p.cost.bytes_per_object = j.value("bytes_per_object", p.cost.bytes_per_object);
        p.cost.bytes_per_aggregate = j.value("bytes_per_aggregate", p.cost.bytes_per_aggregate);
        p.cost.validate();
        if (j.contains("budget")) p.stop = StopCriterion::max_fraction(j.at("budget").get<double>());
        cfg.fractions = j.value("fractions", std::vector<double>{});
        cfg.site_counts = j.value("sites", std::vector<int>{});
        for (double f : cfg.fractions) StopCriterion::max_fraction(f);
        if (p.n_sites < 1) throw InputError("experiment config: n_sites must be positive");
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("experiment config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

}  // namespace sdbdc
