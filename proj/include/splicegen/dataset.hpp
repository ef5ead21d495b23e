#pragma once

// Batch generation. Writes
//   images/<id>.png   masks/<id>.png   metadata.jsonl   stats.json
//   config.json       errors.jsonl (only when some record failed)
// under the output directory. Records are composed concurrently; each owns
// its output paths and random streams, so the tree does not depend on the
// worker count.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "splicegen/compose.hpp"
#include "splicegen/stats.hpp"

namespace splicegen::pipeline {

struct GenerateOptions {
    int workers = 1;
    Adapters adapters;
    // Remove files this tool owns from a non-empty output directory first.
    bool overwrite = false;
};

struct RecordError {
    std::string record_id;
    std::string kind;
    std::string message;
};

struct GenerateSummary {
    std::size_t requested = 0;
    std::size_t ok = 0;
    std::size_t failed = 0;
    DatasetStats stats;
    std::vector<RecordError> errors;
};

// Throws IoError when the output directory cannot be prepared.
GenerateSummary generate_dataset(const std::vector<ManifestEntry>& entries,
                                 const GenerationConfig& config,
                                 const std::filesystem::path& out_dir,
                                 const GenerateOptions& options = {});

std::string error_kind(const std::exception& e);

}  // namespace splicegen::pipeline
