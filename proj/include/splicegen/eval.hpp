#pragma once

// Detector scoring against dataset labels and comparison tables.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splicegen/image.hpp"

namespace splicegen::eval {

enum class Label { Authentic, Forged };

std::string to_string(Label l);
Label label_from_string(const std::string& s);

struct EvalRecord {
    std::string record_id;
    Label true_label = Label::Forged;
    double score = 0.0;  // detector's probability of "forged"
};

// Percentage of records where (score > threshold) agrees with the label.
// Throws InvalidInputError on empty input or a non-finite score.
double classification_accuracy(std::span<const EvalRecord> records, double threshold = 0.5);

// Predictions JSONL: {"record_id", "score", optional "label"}. Without an
// explicit label the record must appear in the dataset metadata and counts
// as forged.
std::vector<EvalRecord> load_predictions(const std::filesystem::path& predictions,
                                         const std::filesystem::path& dataset_dir);

// Accuracies are carried as text so they render exactly as given.
struct ReportColumn {
    std::string name;
    std::string accuracy;
};

struct ReportOptions {
    std::string row_label = "Classification Accuracy";
    // Adds a row with columns[first] - columns[second], two decimals.
    std::optional<std::pair<std::size_t, std::size_t>> difference;
};

std::string format_difference(const std::string& minuend, const std::string& subtrahend);
std::string render_report_text(const std::vector<ReportColumn>& columns, const ReportOptions& opts = {});
std::string render_report_csv(const std::vector<ReportColumn>& columns, const ReportOptions& opts = {});

// Formats a computed accuracy for a report column.
std::string format_accuracy(double percent, int decimals = 3);

struct ResizeSummary {
    std::size_t records = 0;
};

// Copies a generated dataset to out_dir with every composite bilinear-
// resized and every mask nearest-resized to `target`, aspect ratio ignored.
// Metadata lines gain a "protocol" object and the area ratio is recomputed.
ResizeSummary resize_protocol(const std::filesystem::path& dataset_dir,
                              const std::filesystem::path& out_dir, Dims target = {512, 512});

}  // namespace splicegen::eval
