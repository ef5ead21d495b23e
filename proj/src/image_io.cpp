#include "splicegen/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace splicegen::io {

namespace {

// Fixed encoder settings so identical pixels always give identical bytes.
const std::vector<int> kPngParams{cv::IMWRITE_PNG_COMPRESSION, 6, cv::IMWRITE_PNG_STRATEGY,
                                  cv::IMWRITE_PNG_STRATEGY_DEFAULT};

cv::Mat to_mat(const ImageBuffer& img) {
    cv::Mat m(img.height(), img.width(), img.channels() == 3 ? CV_8UC3 : CV_8UC1);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) {
            if (img.channels() == 3) {
                // OpenCV stores BGR.
                row[3 * x + 0] = to_byte(img.at(x, y, 2));
                row[3 * x + 1] = to_byte(img.at(x, y, 1));
                row[3 * x + 2] = to_byte(img.at(x, y, 0));
            } else {
                row[x] = to_byte(img.at(x, y));
            }
        }
    }
    return m;
}

ImageBuffer from_mat(const cv::Mat& m) {
    const int ch = m.channels() == 1 ? 1 : 3;
    ImageBuffer img(m.cols, m.rows, ch);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            if (ch == 3) {
                img.at(x, y, 0) = from_byte(row[3 * x + 2]);
                img.at(x, y, 1) = from_byte(row[3 * x + 1]);
                img.at(x, y, 2) = from_byte(row[3 * x + 0]);
            } else {
                img.at(x, y) = from_byte(row[x]);
            }
        }
    }
    return img;
}

cv::Mat load(const std::filesystem::path& path, int flags) {
    cv::Mat m = cv::imread(path.string(), flags);
    if (m.empty()) throw IoError("cannot decode image: " + path.string());
    if (m.depth() != CV_8U) {
        cv::Mat tmp;
        m.convertTo(tmp, CV_8U, m.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
        m = tmp;
    }
    return m;
}

void store(const std::filesystem::path& path, const cv::Mat& m) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    if (!cv::imwrite(path.string(), m, kPngParams))
        throw IoError("cannot write image: " + path.string());
}

}  // namespace

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

double from_byte(std::uint8_t b) { return b / 255.0; }

ImageBuffer read_image(const std::filesystem::path& path, int channels) {
    if (channels == 0) channels = load(path, cv::IMREAD_UNCHANGED).channels() == 1 ? 1 : 3;
    return from_mat(load(path, channels == 1 ? cv::IMREAD_GRAYSCALE : cv::IMREAD_COLOR));
}

void write_png(const std::filesystem::path& path, const ImageBuffer& img) {
    store(path, to_mat(img));
}

BinaryMask read_mask(const std::filesystem::path& path) {
    const cv::Mat m = load(path, cv::IMREAD_GRAYSCALE);
    BinaryMask mask(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) mask.set(x, y, row[x] > 127);
    }
    return mask;
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
    cv::Mat m(mask.height(), mask.width(), CV_8UC1);
    for (int y = 0; y < mask.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width(); ++x) row[x] = mask.test(x, y) ? 255 : 0;
    }
    store(path, m);
}

AlphaMatte read_alpha(const std::filesystem::path& path) {
    const cv::Mat m = load(path, cv::IMREAD_GRAYSCALE);
    AlphaMatte a(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) a.at(x, y) = from_byte(row[x]);
    }
    return a;
}

void write_alpha(const std::filesystem::path& path, const AlphaMatte& alpha) {
    cv::Mat m(alpha.height(), alpha.width(), CV_8UC1);
    for (int y = 0; y < alpha.height(); ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < alpha.width(); ++x) row[x] = to_byte(alpha.at(x, y));
    }
    store(path, m);
}

void write_gray8(const std::filesystem::path& path, int width, int height,
                 const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() != static_cast<std::size_t>(width) * height)
        throw InvalidInputError("write_gray8: size mismatch");
    cv::Mat m(height, width, CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    store(path, m);
}

std::vector<std::uint8_t> read_gray8(const std::filesystem::path& path, int& width, int& height) {
    const cv::Mat m = load(path, cv::IMREAD_GRAYSCALE);
    width = m.cols;
    height = m.rows;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        std::copy(row, row + width, out.begin() + static_cast<std::ptrdiff_t>(y) * width);
    }
    return out;
}

ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality) {
    if (quality < 1 || quality > 100) throw InvalidInputError("jpeg quality must be in [1,100]");
    std::vector<std::uint8_t> buf;
    if (!cv::imencode(".jpg", to_mat(img), buf, {cv::IMWRITE_JPEG_QUALITY, quality}))
        throw IoError("jpeg encode failed");
    const cv::Mat decoded =
        cv::imdecode(buf, img.channels() == 3 ? cv::IMREAD_COLOR : cv::IMREAD_GRAYSCALE);
    if (decoded.empty()) throw IoError("jpeg decode failed");
    return from_mat(decoded);
}

}  // namespace splicegen::io
