#include "sdbdc/dataset_io.hpp"
#include "sdbdc/pipeline.hpp"
#include "sdbdc/wire.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

using namespace sdbdc;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

// "0.05" or "5e-2" is a fraction of the site, "40" a representative count.
StopCriterion parse_budget(const std::string& text) {
    if (text.find_first_of(".eE") != std::string::npos) return StopCriterion::max_fraction(detail::parse_double(text, "budget"));
    return StopCriterion::max_count(detail::parse_int(text, "budget"));
}

std::vector<RepresentativeRecord> read_all_reps(const std::vector<std::string>& paths, MergeOrder order) {
    std::map<SiteId, std::vector<RepresentativeRecord>> by_site;
    for (const auto& path : paths) {
        for (auto& r : read_wire_file(path)) {
            auto& stream = by_site[r.site];
            if (r.seq != static_cast<Seq>(stream.size())) {
                throw InputError(path + ": site " + std::to_string(r.site) + " seq " + std::to_string(r.seq) +
                                 " out of order across input files");
            }
            stream.push_back(std::move(r));
        }
    }
    std::vector<std::vector<RepresentativeRecord>> streams;
    for (auto& [site, s] : by_site) streams.push_back(std::move(s));
    return merge_streams(streams, order);
}

Labels read_labels(const std::vector<std::string>& local_paths) {
    std::vector<LocalLabeling> sites;
    for (const auto& path : local_paths) {
        auto in = open_in(path);
        sites.push_back(read_local_labels_csv(in));
    }
    return combine_labelings(sites);
}

struct ExperimentFlags {
    std::string config;
    std::string kind = "A";
    std::optional<std::uint64_t> seed;
    std::optional<double> eps;
    std::optional<std::int64_t> min_pts;
    std::optional<int> sites;
    std::optional<double> budget;
    std::optional<std::string> merge;
    bool concurrent = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "Experiment JSON (see configs/)");
        cmd->add_option("--kind", kind, "Dataset kind A|B|C when no config is given");
        cmd->add_option("--seed", seed, "Seed for the dataset and the partition");
        cmd->add_option("--eps", eps, "Neighbourhood radius");
        cmd->add_option("--minpts", min_pts, "Density threshold");
        cmd->add_option("--sites", sites, "Number of sites");
        cmd->add_option("--budget", budget, "Representative fraction per site");
        cmd->add_option("--merge", merge, "round-robin | site-major");
        cmd->add_flag("--concurrent", concurrent, "Run sites on separate threads");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config.empty()) {
            cfg = load_experiment_config(config);
        } else {
            if (!eps || !min_pts) throw InputError("--eps and --minpts are required without --config");
            cfg.dataset = preset_spec(parse_dataset_kind(kind), 1);
        }
        if (seed) {
            cfg.dataset.seed = *seed;
            cfg.pipeline.partition_seed = *seed;
        }
        if (eps) cfg.pipeline.params.epsilon = *eps;
        if (min_pts) cfg.pipeline.params.min_pts = *min_pts;
        if (sites) cfg.pipeline.n_sites = *sites;
        if (budget) cfg.pipeline.stop = StopCriterion::max_fraction(*budget);
        if (merge) cfg.pipeline.merge = parse_merge_order(*merge);
        if (concurrent) cfg.pipeline.concurrent = true;
        cfg.pipeline.params.validate();
        if (cfg.pipeline.n_sites < 1) throw InputError("--sites must be positive");
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed density-based clustering with local representatives"};
    app.require_subcommand(1);

    // gen
    std::string kind = "A", out;
    std::uint64_t seed = 1;
    std::optional<std::int64_t> n_points;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    gen->add_option("--kind", kind, "A|B|C")->required();
    gen->add_option("--seed", seed);
    gen->add_option("--n-points", n_points, "Override the preset size");
    gen->add_option("--out", out)->required();

    // partition
    std::string in_path, out_prefix;
    int n_sites = 4;
    auto* part = app.add_subcommand("partition", "Split a dataset into site files");
    part->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
    part->add_option("--sites", n_sites)->required();
    part->add_option("--seed", seed);
    part->add_option("--out-prefix", out_prefix, "Writes <prefix><site>.csv")->required();

    // local
    double eps = 0.0;
    std::string budget;
    std::optional<double> theta;
    SiteId site = 0;
    std::string owner_path;
    auto* local = app.add_subcommand("local", "Select and stream one site's representatives");
    local->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
    local->add_option("--eps", eps)->required();
    auto* budget_opt = local->add_option("--budget", budget, "Fraction (contains '.') or count");
    auto* theta_opt = local->add_option("--theta", theta, "Stop once the best DynRepQ is <= theta");
    budget_opt->excludes(theta_opt);
    local->add_option("--site", site);
    local->add_option("--out", out, "Representatives as JSON lines")->required();
    local->add_option("--owner", owner_path, "Coverage map CSV");

    // global
    std::vector<std::string> rep_paths;
    std::int64_t min_pts = 0;
    std::string merge = "round-robin";
    auto* global = app.add_subcommand("global", "Cluster merged representatives");
    global->add_option("--reps", rep_paths)->required()->check(CLI::ExistingFile);
    global->add_option("--eps", eps)->required();
    global->add_option("--minpts", min_pts)->required();
    global->add_option("--merge", merge);
    global->add_option("--out", out)->required();

    // reference
    auto* reference = app.add_subcommand("reference", "Centralized DBSCAN on a full dataset");
    reference->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
    reference->add_option("--eps", eps)->required();
    reference->add_option("--minpts", min_pts)->required();
    reference->add_option("--out", out)->required();

    // relabel
    std::string labels_path;
    auto* relabel = app.add_subcommand("relabel", "Apply global labels to one site's objects");
    relabel->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
    relabel->add_option("--owner", owner_path)->required()->check(CLI::ExistingFile);
    relabel->add_option("--labels", labels_path)->required()->check(CLI::ExistingFile);
    relabel->add_option("--site", site);
    relabel->add_option("--out", out)->required();

    // eval
    std::vector<std::string> dist_paths;
    std::string ref_path;
    auto* eval = app.add_subcommand("eval", "Compare distributed and reference labels");
    eval->add_option("--dist", dist_paths, "Per-site label CSVs")->required()->check(CLI::ExistingFile);
    eval->add_option("--ref", ref_path)->required()->check(CLI::ExistingFile);
    eval->add_option("--out", out, "Also write the report here");

    // pipeline
    ExperimentFlags flags;
    std::string out_dir;
    auto* pipeline = app.add_subcommand("pipeline", "Run the whole pipeline in process");
    flags.attach(pipeline);
    pipeline->add_option("--out-dir", out_dir, "Write intermediate and final outputs here");

    // sweep
    std::vector<double> fractions;
    std::vector<int> site_counts;
    auto* sweep_cmd = app.add_subcommand("sweep", "Quality/cost over budget fractions and site counts");
    flags.attach(sweep_cmd);
    sweep_cmd->add_option("--fractions", fractions);
    sweep_cmd->add_option("--site-counts", site_counts);
    sweep_cmd->add_option("--out", out, "CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) {
            auto spec = preset_spec(parse_dataset_kind(kind), seed);
            if (n_points) spec.n_points = *n_points;
            write_dataset_csv(out, generate(spec));
        } else if (*part) {
            const auto parts = partition(read_dataset_csv(in_path), n_sites, seed);
            for (std::size_t s = 0; s < parts.size(); ++s) write_dataset_csv(out_prefix + std::to_string(s) + ".csv", parts[s]);
        } else if (*local) {
            if (budget.empty() && !theta) throw InputError("local: one of --budget or --theta is required");
            const StopCriterion stop = theta ? StopCriterion::error_bound(*theta) : parse_budget(budget);
            RepresentativeStream stream(RepresentativeSelector(read_dataset_csv(in_path), eps, stop, site));
            auto reps_out = open_out(out);
            while (auto r = stream.next()) reps_out << encode_wire_record(*r) << '\n' << std::flush;
            if (!reps_out) throw InputError("write failed: " + out);
            const auto& selector = stream.finish();
            if (!owner_path.empty()) {
                auto owner_out = open_out(owner_path);
                write_coverage_owner_csv(owner_out, selector.state().coverage_owner(stream.consumed()));
            }
        } else if (*global) {
            const auto reps = read_all_reps(rep_paths, parse_merge_order(merge));
            auto labels_out = open_out(out);
            write_global_labels_csv(labels_out, global_dbscan(reps, GlobalParams{eps, min_pts}));
        } else if (*reference) {
            auto labels_out = open_out(out);
            write_reference_labels_csv(labels_out, reference_dbscan(read_dataset_csv(in_path), GlobalParams{eps, min_pts}));
        } else if (*relabel) {
            auto owner_in = open_in(owner_path);
            auto labels_in = open_in(labels_path);
            const auto labeling =
                relabel_site(read_dataset_csv(in_path), read_coverage_owner_csv(owner_in), read_global_labels_csv(labels_in), site);
            auto labels_out = open_out(out);
            write_local_labels_csv(labels_out, labeling);
        } else if (*eval) {
            auto ref_in = open_in(ref_path);
            const auto report = evaluate(read_labels(dist_paths), read_reference_labels_csv(ref_in).as_map());
            std::cout << to_json(report) << '\n';
            if (!out.empty()) open_out(out) << to_json(report) << '\n';
        } else if (*pipeline) {
            const auto cfg = flags.resolve();
            const Dataset data = generate(cfg.dataset);
            const auto r = run_pipeline(data, cfg.pipeline);
            std::cout << to_json(r.quality) << '\n';
            std::cout << kCostCsvHeader << '\n'
                      << cost_csv_row(static_cast<double>(r.n_representatives()) / static_cast<double>(data.size()), r.cost)
                      << '\n';
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                const std::filesystem::path dir(out_dir);
                write_dataset_csv((dir / "data.csv").string(), data);
                auto reps_out = open_out((dir / "reps.jsonl").string());
                write_wire_stream(reps_out, r.merged);
                auto global_out = open_out((dir / "global.csv").string());
                write_global_labels_csv(global_out, r.global);
                auto ref_out = open_out((dir / "reference.csv").string());
                write_reference_labels_csv(ref_out, r.reference);
                for (const auto& l : r.local) {
                    auto local_out = open_out((dir / ("labels_site" + std::to_string(l.site) + ".csv")).string());
                    write_local_labels_csv(local_out, l);
                }
                open_out((dir / "quality.json").string()) << to_json(r.quality) << '\n';
            }
        } else if (*sweep_cmd) {
            const auto cfg = flags.resolve();
            const auto& fr = fractions.empty() ? cfg.fractions : fractions;
            const auto& sc = site_counts.empty() ? cfg.site_counts : site_counts;
            const auto rows = sweep(generate(cfg.dataset), cfg.pipeline, fr, sc);
            if (out.empty()) {
                write_sweep_csv(std::cout, rows);
            } else {
                auto csv = open_out(out);
                write_sweep_csv(csv, rows);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "sdbdc: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
