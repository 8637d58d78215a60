/// @file svg.hpp
/// @brief Minimal static SVG canvas for the report plots: data-space
///        polylines, markers, heat cells, and framed axes.  No scripts.

#ifndef PXFLAME_SVG_HPP
#define PXFLAME_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "pxflame/grid.hpp"

namespace pxflame {

class SvgCanvas {
public:
    SvgCanvas(double x_lo, double x_hi, double y_lo, double y_hi, bool log_x = false,
              int width = 760, int height = 520)
        : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), log_x_(log_x),
          width_(width), height_(height)
    {
        if (log_x_) {
            x_lo_ = std::log10(x_lo);
            x_hi_ = std::log10(x_hi);
        }
        if (x_hi_ - x_lo_ <= 0.0) x_hi_ = x_lo_ + 1.0;
        if (y_hi_ - y_lo_ <= 0.0) y_hi_ = y_lo_ + 1.0;
    }

    double px(double x) const
    {
        if (log_x_) x = std::log10(x);
        return ml_ + (x - x_lo_) / (x_hi_ - x_lo_) * (width_ - ml_ - mr_);
    }
    double py(double y) const
    {
        return height_ - mb_ - (y - y_lo_) / (y_hi_ - y_lo_) * (height_ - mt_ - mb_);
    }

    void polyline(const std::vector<Vec2>& pts, const std::string& color,
                  double stroke = 1.5, bool dashed = false)
    {
        if (pts.size() < 2) return;
        std::string d = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                        fmt(stroke) + "\"";
        if (dashed) d += " stroke-dasharray=\"6,4\"";
        d += " points=\"";
        for (const auto& p : pts) d += fmt(px(p.x)) + "," + fmt(py(p.y)) + " ";
        d += "\"/>\n";
        body_ += d;
    }

    void segment(const Vec2& a, const Vec2& b, const std::string& color, double stroke = 1.5,
                 bool dashed = false)
    {
        polyline({a, b}, color, stroke, dashed);
    }

    void circle(const Vec2& c, double radius_px, const std::string& fill)
    {
        body_ += "<circle cx=\"" + fmt(px(c.x)) + "\" cy=\"" + fmt(py(c.y)) + "\" r=\"" +
                 fmt(radius_px) + "\" fill=\"" + fill + "\"/>\n";
    }

    /// Axis-aligned data-space rectangle (heat-map cell).
    void cell(const Vec2& lo, const Vec2& hi, const std::string& fill)
    {
        const double x0 = px(lo.x), y0 = py(hi.y);
        body_ += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" +
                 fmt(px(hi.x) - x0) + "\" height=\"" + fmt(py(lo.y) - y0) + "\" fill=\"" +
                 fill + "\"/>\n";
    }

    void label(const Vec2& at, const std::string& text, const std::string& color = "#333")
    {
        body_ += "<text x=\"" + fmt(px(at.x)) + "\" y=\"" + fmt(py(at.y)) +
                 "\" font-size=\"12\" fill=\"" + color + "\">" + text + "</text>\n";
    }

    void frame(const std::string& title, const std::string& xlabel,
               const std::string& ylabel)
    {
        char buf[256];
        std::string f;
        f += "<rect x=\"" + fmt(ml_) + "\" y=\"" + fmt(mt_) + "\" width=\"" +
             fmt(width_ - ml_ - mr_) + "\" height=\"" + fmt(height_ - mt_ - mb_) +
             "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int k = 0; k <= 4; ++k) {
            const double xv = x_lo_ + (x_hi_ - x_lo_) * k / 4.0;
            const double yv = y_lo_ + (y_hi_ - y_lo_) * k / 4.0;
            const double xd = log_x_ ? std::pow(10.0, xv) : xv;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" fill=\"#444\" "
                          "text-anchor=\"middle\">%.4g</text>\n",
                          ml_ + (width_ - ml_ - mr_) * k / 4.0, height_ - mb_ + 16.0, xd);
            f += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" fill=\"#444\" "
                          "text-anchor=\"end\">%.4g</text>\n",
                          ml_ - 6.0, height_ - mb_ - (height_ - mt_ - mb_) * k / 4.0 + 4.0,
                          yv);
            f += buf;
        }
        f += "<text x=\"" + fmt(0.5 * width_) + "\" y=\"18\" font-size=\"14\" "
             "text-anchor=\"middle\" fill=\"#111\">" + title + "</text>\n";
        f += "<text x=\"" + fmt(0.5 * width_) + "\" y=\"" + fmt(height_ - 6.0) +
             "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\">" + xlabel +
             "</text>\n";
        f += "<text x=\"14\" y=\"" + fmt(0.5 * height_) +
             "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\" "
             "transform=\"rotate(-90 14 " + fmt(0.5 * height_) + ")\">" + ylabel +
             "</text>\n";
        frame_ = f;
    }

    void write(std::ostream& os) const
    {
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
           << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " "
           << height_ << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << body_;
        os << frame_;
        os << "</svg>\n";
    }

private:
    static std::string fmt(double v)
    {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    double x_lo_, x_hi_, y_lo_, y_hi_;
    bool log_x_;
    int width_, height_;
    double ml_ = 64.0, mr_ = 18.0, mt_ = 30.0, mb_ = 44.0;
    std::string body_, frame_;
};

/// Five-stop dark-blue-to-yellow color map on [0, 1].
inline std::string heat_color(double t)
{
    t = std::max(0.0, std::min(1.0, t));
    static const double stops[5][3] = {{68, 1, 84},
                                       {59, 82, 139},
                                       {33, 145, 140},
                                       {94, 201, 98},
                                       {253, 231, 37}};
    const double s = t * 4.0;
    const int k = std::min(3, static_cast<int>(s));
    const double w = s - k;
    char buf[32];
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)",
                  static_cast<int>(stops[k][0] * (1 - w) + stops[k + 1][0] * w),
                  static_cast<int>(stops[k][1] * (1 - w) + stops[k + 1][1] * w),
                  static_cast<int>(stops[k][2] * (1 - w) + stops[k + 1][2] * w));
    return buf;
}

}  // namespace pxflame

#endif
