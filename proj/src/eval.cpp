#include "splicegen/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "splicegen/error.hpp"
#include "splicegen/image_io.hpp"
#include "splicegen/imaging.hpp"
#include "splicegen/placement.hpp"
#include "splicegen/stats.hpp"

namespace splicegen::eval {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Label l) { return l == Label::Forged ? "forged" : "authentic"; }

Label label_from_string(const std::string& s) {
    if (s == "forged") return Label::Forged;
    if (s == "authentic") return Label::Authentic;
    throw InvalidInputError("unknown label '" + s + "'");
}

double classification_accuracy(std::span<const EvalRecord> records, double threshold) {
    if (records.empty()) throw InvalidInputError("accuracy of an empty record set");
    std::size_t correct = 0;
    for (const auto& r : records) {
        if (!std::isfinite(r.score)) throw InvalidInputError("non-finite score for " + r.record_id);
        const bool predicted_forged = r.score > threshold;
        if (predicted_forged == (r.true_label == Label::Forged)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(records.size()) * 100.0;
}

namespace {

std::vector<json> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw IoError(path.string() + " line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

std::vector<EvalRecord> load_predictions(const fs::path& predictions, const fs::path& dataset_dir) {
    std::unordered_set<std::string> known;
    for (const auto& j : read_jsonl(dataset_dir / "metadata.jsonl"))
        known.insert(j.at("record_id").get<std::string>());

    std::vector<EvalRecord> out;
    std::size_t n = 0;
    for (const auto& j : read_jsonl(predictions)) {
        ++n;
        const std::string where = predictions.string() + " entry " + std::to_string(n);
        if (!j.is_object() || !j.contains("record_id") || !j.contains("score"))
            throw InvalidInputError(where + ": needs record_id and score");
        EvalRecord r;
        r.record_id = j["record_id"].get<std::string>();
        if (!j["score"].is_number()) throw InvalidInputError(where + ": score must be a number");
        r.score = j["score"].get<double>();
        if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0)
            throw InvalidInputError(where + ": score must be finite and in [0,1]");
        if (j.contains("label")) {
            r.true_label = label_from_string(j["label"].get<std::string>());
        } else {
            if (!known.count(r.record_id))
                throw InvalidInputError(where + ": record_id '" + r.record_id +
                                        "' not in dataset metadata and no label given");
            r.true_label = Label::Forged;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_difference(const std::string& minuend, const std::string& subtrahend) {
    std::size_t pa = 0, pb = 0;
    double a = 0.0, b = 0.0;
    try {
        a = std::stod(minuend, &pa);
        b = std::stod(subtrahend, &pb);
    } catch (const std::logic_error&) {
        pa = pb = std::string::npos;
    }
    if (pa != minuend.size() || pb != subtrahend.size())
        throw InvalidInputError("accuracy '" + minuend + "' or '" + subtrahend + "' is not a number");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", a - b);
    return buf;
}

std::string format_accuracy(double percent, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, percent);
    return buf;
}

namespace {

using Table = std::vector<std::vector<std::string>>;

Table build_table(const std::vector<ReportColumn>& columns, const ReportOptions& opts) {
    if (columns.empty()) throw InvalidInputError("report needs at least one column");
    Table t;
    std::vector<std::string> header{""}, row{opts.row_label};
    for (const auto& c : columns) {
        header.push_back(c.name);
        row.push_back(c.accuracy);
    }
    t.push_back(header);
    t.push_back(row);
    if (opts.difference) {
        const auto [i, j] = *opts.difference;
        if (i >= columns.size() || j >= columns.size())
            throw InvalidInputError("difference column out of range");
        std::vector<std::string> diff{"Difference (" + columns[i].name + " - " + columns[j].name + ")"};
        diff.resize(columns.size() + 1);
        diff[1] = format_difference(columns[i].accuracy, columns[j].accuracy);
        t.push_back(diff);
    }
    return t;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string render_report_text(const std::vector<ReportColumn>& columns, const ReportOptions& opts) {
    const Table t = build_table(columns, opts);
    std::vector<std::size_t> width(t[0].size(), 0);
    for (const auto& row : t)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& row) {
        out << "|";
        for (std::size_t c = 0; c < row.size(); ++c)
            out << " " << row[c] << std::string(width[c] - row[c].size(), ' ') << " |";
        out << "\n";
    };
    line(t[0]);
    out << "|";
    for (std::size_t w : width) out << std::string(w + 2, '-') << "|";
    out << "\n";
    for (std::size_t r = 1; r < t.size(); ++r) line(t[r]);
    return out.str();
}

std::string render_report_csv(const std::vector<ReportColumn>& columns, const ReportOptions& opts) {
    const Table t = build_table(columns, opts);
    std::ostringstream out;
    for (const auto& row : t) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << "\n";
    }
    return out.str();
}

ResizeSummary resize_protocol(const fs::path& dataset_dir, const fs::path& out_dir, Dims target) {
    if (target.width <= 0 || target.height <= 0) throw InvalidInputError("target size must be positive");
    const auto lines = read_jsonl(dataset_dir / "metadata.jsonl");
    if (fs::exists(out_dir) && !fs::is_empty(out_dir))
        throw IoError("output directory " + out_dir.string() + " is not empty");
    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "masks");

    std::string metadata;
    std::vector<pipeline::StatsRecord> stats;
    for (const auto& src : lines) {
        if (!src.contains("record_id") || !src.contains("image") || !src.contains("mask") ||
            !src.contains("split"))
            throw IoError("metadata line lacks record_id, image, mask or split");
        ordered_json j = ordered_json::parse(src.dump());
        const auto image_rel = src["image"].get<std::string>();
        const auto mask_rel = src["mask"].get<std::string>();
        const ImageBuffer img = io::read_image(dataset_dir / image_rel, 0);
        const BinaryMask mask = io::read_mask(dataset_dir / mask_rel);
        if (img.dims() != mask.dims())
            throw IoError("image and mask sizes differ for " + src["record_id"].get<std::string>());
        const ImageBuffer out_img = imaging::resize_bilinear(img, target.width, target.height);
        const BinaryMask out_mask = imaging::resize_nearest(mask, target.width, target.height);
        io::write_png(out_dir / image_rel, out_img);
        io::write_mask(out_dir / mask_rel, out_mask);

        const double ratio = placement::area_ratio(out_mask);
        j["protocol"] = {{"resize", {{"width", target.width}, {"height", target.height}}},
                         {"source_width", img.width()},
                         {"source_height", img.height()},
                         {"source_area_ratio", src.value("area_ratio", placement::area_ratio(mask))}};
        j["area_ratio"] = ratio;
        j["width"] = target.width;
        j["height"] = target.height;
        metadata += j.dump() + "\n";
        stats.push_back({src["record_id"].get<std::string>(),
                         pipeline::split_from_string(src["split"].get<std::string>()), ratio});
    }
    std::ofstream(out_dir / "metadata.jsonl", std::ios::binary) << metadata;
    std::ofstream(out_dir / "stats.json", std::ios::binary)
        << pipeline::stats_to_json(pipeline::dataset_stats(stats)).dump(2) << "\n";
    if (fs::exists(dataset_dir / "config.json"))
        fs::copy_file(dataset_dir / "config.json", out_dir / "config.json",
                      fs::copy_options::overwrite_existing);
    return {lines.size()};
}

}  // namespace splicegen::eval
