#pragma once

// Client side of the external-model bridge. A deep model is reached by
// spawning a shell command that reads and writes 8-bit PNGs in a per-job
// working directory:
//
//   matting        input.png + trimap.png      -> alpha.png
//   harmonization  composite.png + mask.png    -> harmonized.png
//   rationality    background.png + object.png -> scores.png
//
// Command templates come from SPLICEGEN_MATTING_CMD,
// SPLICEGEN_HARMONIZATION_CMD and SPLICEGEN_RATIONALITY_CMD; every
// occurrence of {workdir} is replaced by the job directory.
// SPLICEGEN_ADAPTER_TIMEOUT sets the timeout in seconds (default 120).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "splicegen/image.hpp"
#include "splicegen/matting.hpp"

namespace splicegen::adapter {

enum class AdapterKind { Matting, Harmonization, Rationality };

std::string to_string(AdapterKind k);
const char* env_var(AdapterKind k);
const char* output_filename(AdapterKind k);

struct AdapterCommand {
    std::string command_template;
    double timeout_seconds = 120.0;
};

struct AdapterJob {
    AdapterKind kind = AdapterKind::Matting;
    std::filesystem::path workdir;
};

std::optional<AdapterCommand> command_from_env(AdapterKind kind);

std::string expand_template(const std::string& tmpl, const std::filesystem::path& workdir);

// Runs the command and returns the path of the expected output file.
// Throws AdapterError on nonzero exit, timeout or a missing output.
std::filesystem::path run_adapter(const AdapterJob& job, const AdapterCommand& command);

AlphaMatte external_matting(const AdapterCommand& command, const std::filesystem::path& workdir,
                            const ImageBuffer& image, const matting::Trimap& trimap);

ImageBuffer external_harmonization(const AdapterCommand& command,
                                   const std::filesystem::path& workdir,
                                   const ImageBuffer& composite, const BinaryMask& mask);

// One score per feasible top-left position of the object, scaled to [0,1].
std::vector<double> external_rationality(const AdapterCommand& command,
                                         const std::filesystem::path& workdir,
                                         const ImageBuffer& background, const ImageBuffer& object);

}  // namespace splicegen::adapter
