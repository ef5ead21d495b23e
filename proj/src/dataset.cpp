#include "splicegen/dataset.hpp"

#include <fstream>
#include <optional>

#include <omp.h>

#include "splicegen/image_io.hpp"

namespace splicegen::pipeline {

namespace fs = std::filesystem;

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ManifestError*>(&e)) return "manifest";
    if (dynamic_cast<const InvalidInputError*>(&e)) return "invalid_input";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const InfeasiblePlacementError*>(&e)) return "infeasible_placement";
    if (dynamic_cast<const NonConvergenceError*>(&e)) return "non_convergence";
    if (dynamic_cast<const AdapterError*>(&e)) return "adapter";
    return "internal";
}

namespace {

void prepare_out_dir(const fs::path& out, bool overwrite) {
    std::error_code ec;
    if (fs::exists(out) && !fs::is_directory(out)) throw IoError(out.string() + " is not a directory");
    if (fs::exists(out) && !fs::is_empty(out)) {
        if (!overwrite) throw IoError("output directory " + out.string() + " is not empty");
        for (const char* name : {"images", "masks", ".scratch"}) fs::remove_all(out / name, ec);
        for (const char* name : {"metadata.jsonl", "stats.json", "config.json", "errors.jsonl"})
            fs::remove(out / name, ec);
    }
    fs::create_directories(out / "images", ec);
    fs::create_directories(out / "masks", ec);
    if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw IoError("cannot write " + path.string());
}

struct Outcome {
    std::optional<nlohmann::ordered_json> metadata;
    StatsRecord stats;
    std::optional<RecordError> error;
};

}  // namespace

GenerateSummary generate_dataset(const std::vector<ManifestEntry>& entries,
                                 const GenerationConfig& config, const fs::path& out_dir,
                                 const GenerateOptions& options) {
    config.validate();
    if (options.workers < 1) throw InvalidInputError("workers must be >= 1");
    prepare_out_dir(out_dir, options.overwrite);

    ComposeContext ctx{options.adapters, out_dir / ".scratch"};
    const long n = static_cast<long>(entries.size());
    std::vector<Outcome> outcomes(entries.size());

    // Kernels called from inside a record run serially at this level.
    const int saved_max_levels = omp_get_max_active_levels();
    omp_set_max_active_levels(1);
#pragma omp parallel for num_threads(options.workers) schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        const ManifestEntry& e = entries[i];
        Outcome& out = outcomes[i];
        try {
            CompositeRecord rec = compose(e, config, ctx);
            const std::string image_rel = "images/" + e.record_id + ".png";
            const std::string mask_rel = "masks/" + e.record_id + ".png";
            io::write_png(out_dir / image_rel, rec.composite);
            io::write_mask(out_dir / mask_rel, rec.ground_truth);
            rec.provenance["image"] = image_rel;
            rec.provenance["mask"] = mask_rel;
            out.stats = {e.record_id, e.split, rec.area_ratio};
            out.metadata = std::move(rec.provenance);
        } catch (const std::exception& ex) {
            out.error = RecordError{e.record_id, error_kind(ex), ex.what()};
        } catch (...) {
            out.error = RecordError{e.record_id, "internal", "unknown exception"};
        }
    }
    omp_set_max_active_levels(saved_max_levels);

    std::error_code ec;
    fs::remove_all(ctx.scratch_dir, ec);

    // Entries come sorted by record_id from ingestion; sort defensively so
    // metadata order never depends on the caller.
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return entries[a].record_id < entries[b].record_id;
    });

    GenerateSummary summary;
    summary.requested = entries.size();
    std::string metadata, errors;
    std::vector<StatsRecord> ok_records;
    for (std::size_t i : order) {
        Outcome& o = outcomes[i];
        if (o.error) {
            summary.errors.push_back(*o.error);
            nlohmann::ordered_json j{{"record_id", o.error->record_id},
                                     {"kind", o.error->kind},
                                     {"message", o.error->message}};
            errors += j.dump() + "\n";
            continue;
        }
        metadata += o.metadata->dump() + "\n";
        ok_records.push_back(o.stats);
    }
    summary.ok = ok_records.size();
    summary.failed = summary.errors.size();
    summary.stats = dataset_stats(ok_records);

    write_text(out_dir / "metadata.jsonl", metadata);
    write_text(out_dir / "stats.json", stats_to_json(summary.stats).dump(2) + "\n");
    write_text(out_dir / "config.json", config_to_json(config).dump(2) + "\n");
    if (!errors.empty()) write_text(out_dir / "errors.jsonl", errors);
    return summary;
}

}  // namespace splicegen::pipeline
