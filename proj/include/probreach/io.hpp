#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace probreach::io {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// Comma-delimited, LF-terminated CSV file with a header row. Throws IoError
/// when the file cannot be opened or written.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::span<const std::string> header);
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

    /// Cells are written verbatim; use format_double for reals.
    void row(std::span<const std::string> cells);
    void row(std::initializer_list<std::string> cells);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

/// Minimal SVG plot in data coordinates (y up). Only the primitives the
/// experiment figures need.
class SvgPlot {
public:
    SvgPlot(double x_min, double x_max, double y_min, double y_max, double width = 480,
            double height = 480);

    void rect(double x0, double y0, double x1, double y1, const std::string& stroke,
              const std::string& fill = "none", double stroke_width = 1.5);
    void circle(double x, double y, double r, const std::string& stroke,
                const std::string& fill = "none");
    void cross(double x, double y, double r, const std::string& stroke);
    void segment(double x0, double y0, double x1, double y1, const std::string& stroke,
                 double stroke_width = 1.5, const std::string& dash = "");
    void polyline(std::span<const double> xs, std::span<const double> ys, const std::string& stroke,
                  double stroke_width = 1.5, const std::string& dash = "");
    void label(const std::string& x_label, const std::string& y_label, const std::string& title);

    std::string str() const;
    /// Throws IoError on failure.
    void save(const std::filesystem::path& path) const;

private:
    double px(double x) const;
    double py(double y) const;

    double x_min_, x_max_, y_min_, y_max_, width_, height_;
    double margin_ = 48;
    std::ostringstream body_;
};

/// Creates `dir` (and parents) if needed; throws IoError otherwise.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace probreach::io
