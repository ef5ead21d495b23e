// splicegen: generate splicing datasets, summarize them, score detectors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "splicegen/dataset.hpp"
#include "splicegen/eval.hpp"
#include "splicegen/manifest.hpp"
#include "splicegen/stats.hpp"

namespace fs = std::filesystem;
using namespace splicegen;

namespace {

int run_generate(const std::string& manifest, const std::string& config_path, const std::string& out,
                 int workers, const std::string& version, std::optional<std::uint64_t> seed,
                 bool overwrite) {
    pipeline::GenerationConfig config = config_path.empty() ? pipeline::GenerationConfig{}
                                                            : pipeline::load_config(config_path);
    if (!version.empty()) config.version = pipeline::pipeline_version_from_string(version);
    if (seed) config.global_seed = *seed;
    config.validate();

    pipeline::IngestOptions ingest_opts;
    ingest_opts.rational_filter = config.rational_filter;
    const auto ingest = pipeline::ingest_manifest(manifest, ingest_opts);
    for (const auto& w : ingest.warnings) std::cerr << "warning: " << w << "\n";

    pipeline::GenerateOptions opts;
    opts.workers = workers;
    opts.adapters = pipeline::Adapters::from_env();
    opts.overwrite = overwrite;
    const auto summary = pipeline::generate_dataset(ingest.entries, config, out, opts);

    for (const auto& e : summary.errors)
        std::cerr << "record " << e.record_id << " failed (" << e.kind << "): " << e.message << "\n";
    std::cerr << "generated " << summary.ok << " of " << summary.requested << " records ("
              << summary.failed << " failed, " << ingest.non_rational_dropped
              << " non-rational dropped); train " << summary.stats.train << ", test "
              << summary.stats.test << "\n";
    return summary.failed == 0 ? 0 : 2;
}

int run_stats(const std::string& dataset) {
    const auto s = pipeline::dataset_stats(pipeline::load_stats_records(dataset));
    std::cout << pipeline::stats_to_json(s).dump(2) << "\n";
    return 0;
}

int run_eval(const std::string& dataset, const std::string& predictions, double threshold,
             const std::string& name, const std::string& csv) {
    const auto records = eval::load_predictions(predictions, dataset);
    const double acc = eval::classification_accuracy(records, threshold);
    const std::vector<eval::ReportColumn> cols{{name, eval::format_accuracy(acc)}};
    std::cout << eval::render_report_text(cols);
    if (!csv.empty()) {
        std::ofstream f(csv);
        f << eval::render_report_csv(cols);
        if (!f) throw IoError("cannot write " + csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image-splicing forgery dataset generator"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Compose records from a manifest");
    std::string manifest, config_path, out, version;
    int workers = 1;
    std::optional<std::uint64_t> seed;
    bool overwrite = false;
    gen->add_option("--manifest", manifest, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
    gen->add_option("--config", config_path, "Generation config (JSON)")->check(CLI::ExistingFile);
    gen->add_option("--out", out, "Output directory")->required();
    gen->add_option("--workers", workers, "Concurrent records")->check(CLI::PositiveNumber);
    gen->add_option("--version", version, "Pipeline version")->check(CLI::IsMember({"v1", "v2"}));
    gen->add_option("--seed", seed, "Override global_seed");
    gen->add_flag("--overwrite", overwrite, "Replace generated files in a non-empty --out");

    auto* st = app.add_subcommand("stats", "Area-ratio histogram and split counts");
    std::string dataset;
    st->add_option("--dataset", dataset, "Generated dataset directory")->required()->check(CLI::ExistingDirectory);

    auto* ev = app.add_subcommand("eval", "Classification accuracy of detector predictions");
    std::string predictions, csv, name = "Accuracy";
    double threshold = 0.5;
    ev->add_option("--dataset", dataset, "Generated dataset directory")->required()->check(CLI::ExistingDirectory);
    ev->add_option("--predictions", predictions, "Predictions JSONL")->required()->check(CLI::ExistingFile);
    ev->add_option("--threshold", threshold, "Forged iff score > threshold");
    ev->add_option("--name", name, "Report column name");
    ev->add_option("--csv", csv, "Also write the report as CSV");

    auto* rs = app.add_subcommand("resize", "Resize a dataset for detector input");
    std::string resize_out;
    int rw = 512, rh = 512;
    rs->add_option("--dataset", dataset, "Generated dataset directory")->required()->check(CLI::ExistingDirectory);
    rs->add_option("--out", resize_out, "Output directory")->required();
    rs->add_option("--width", rw)->check(CLI::PositiveNumber);
    rs->add_option("--height", rh)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) return run_generate(manifest, config_path, out, workers, version, seed, overwrite);
        if (*st) return run_stats(dataset);
        if (*ev) return run_eval(dataset, predictions, threshold, name, csv);
        if (*rs) {
            const auto s = eval::resize_protocol(dataset, resize_out, {rw, rh});
            std::cerr << "resized " << s.records << " records to " << rw << "x" << rh << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
