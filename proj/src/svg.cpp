#include <fstream>

#include "probreach/error.hpp"
#include "probreach/io.hpp"

namespace probreach::io {

namespace {

// Pixel coordinates do not need full precision; two decimals keep files small.
std::string pix(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << v;
    return s.str();
}

std::string dash_attr(const std::string& dash) {
    return dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"";
}

}  // namespace

SvgPlot::SvgPlot(double x_min, double x_max, double y_min, double y_max, double width, double height)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), width_(width), height_(height) {
    if (!(x_max_ > x_min_)) x_max_ = x_min_ + 1.0;
    if (!(y_max_ > y_min_)) y_max_ = y_min_ + 1.0;
}

double SvgPlot::px(double x) const {
    return margin_ + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * margin_);
}

double SvgPlot::py(double y) const {
    return height_ - margin_ - (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * margin_);
}

void SvgPlot::rect(double x0, double y0, double x1, double y1, const std::string& stroke,
                   const std::string& fill, double stroke_width) {
    const double left = px(std::min(x0, x1)), right = px(std::max(x0, x1));
    const double top = py(std::max(y0, y1)), bottom = py(std::min(y0, y1));
    body_ << "<rect x=\"" << pix(left) << "\" y=\"" << pix(top) << "\" width=\"" << pix(right - left)
          << "\" height=\"" << pix(bottom - top) << "\" stroke=\"" << stroke << "\" fill=\"" << fill
          << "\" stroke-width=\"" << pix(stroke_width) << "\"/>\n";
}

void SvgPlot::circle(double x, double y, double r, const std::string& stroke, const std::string& fill) {
    body_ << "<circle cx=\"" << pix(px(x)) << "\" cy=\"" << pix(py(y)) << "\" r=\"" << pix(r)
          << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\"/>\n";
}

void SvgPlot::cross(double x, double y, double r, const std::string& stroke) {
    const double cx = px(x), cy = py(y);
    body_ << "<path d=\"M" << pix(cx - r) << ' ' << pix(cy - r) << " L" << pix(cx + r) << ' '
          << pix(cy + r) << " M" << pix(cx - r) << ' ' << pix(cy + r) << " L" << pix(cx + r) << ' '
          << pix(cy - r) << "\" stroke=\"" << stroke << "\" fill=\"none\"/>\n";
}

void SvgPlot::segment(double x0, double y0, double x1, double y1, const std::string& stroke,
                      double stroke_width, const std::string& dash) {
    body_ << "<line x1=\"" << pix(px(x0)) << "\" y1=\"" << pix(py(y0)) << "\" x2=\"" << pix(px(x1))
          << "\" y2=\"" << pix(py(y1)) << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << pix(stroke_width) << "\"" << dash_attr(dash) << "/>\n";
}

void SvgPlot::polyline(std::span<const double> xs, std::span<const double> ys,
                       const std::string& stroke, double stroke_width, const std::string& dash) {
    if (xs.size() < 2 || xs.size() != ys.size()) return;
    body_ << "<polyline points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        body_ << (i ? " " : "") << pix(px(xs[i])) << ',' << pix(py(ys[i]));
    }
    body_ << "\" stroke=\"" << stroke << "\" fill=\"none\" stroke-width=\"" << pix(stroke_width)
          << "\"" << dash_attr(dash) << "/>\n";
}

void SvgPlot::label(const std::string& x_label, const std::string& y_label, const std::string& title) {
    rect(x_min_, y_min_, x_max_, y_max_, "#888888", "none", 1.0);
    body_ << "<text x=\"" << pix(width_ / 2) << "\" y=\"" << pix(height_ - 12)
          << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    body_ << "<text x=\"14\" y=\"" << pix(height_ / 2) << "\" text-anchor=\"middle\" font-size=\"14\""
          << " transform=\"rotate(-90 14 " << pix(height_ / 2) << ")\">" << y_label << "</text>\n";
    body_ << "<text x=\"" << pix(width_ / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
          << title << "</text>\n";
    // Axis extents in data units at the corners.
    body_ << "<text x=\"" << pix(margin_) << "\" y=\"" << pix(height_ - margin_ + 16)
          << "\" font-size=\"10\">" << format_double(x_min_) << "</text>\n";
    body_ << "<text x=\"" << pix(width_ - margin_) << "\" y=\"" << pix(height_ - margin_ + 16)
          << "\" font-size=\"10\" text-anchor=\"end\">" << format_double(x_max_) << "</text>\n";
    body_ << "<text x=\"" << pix(margin_ - 4) << "\" y=\"" << pix(height_ - margin_)
          << "\" font-size=\"10\" text-anchor=\"end\">" << format_double(y_min_) << "</text>\n";
    body_ << "<text x=\"" << pix(margin_ - 4) << "\" y=\"" << pix(margin_ + 8)
          << "\" font-size=\"10\" text-anchor=\"end\">" << format_double(y_max_) << "</text>\n";
}

std::string SvgPlot::str() const {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pix(width_) << "\" height=\""
      << pix(height_) << "\" viewBox=\"0 0 " << pix(width_) << ' ' << pix(height_) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
    return s.str();
}

void SvgPlot::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << str();
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace probreach::io
