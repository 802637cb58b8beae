#include "demotif/logo.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

namespace demotif {

namespace {

constexpr double kColumnWidth = 28.0;
constexpr double kPlotHeight = 120.0;  // 2 bits
constexpr double kMarginLeft = 42.0;
constexpr double kMarginTop = 12.0;
constexpr double kMarginBottom = 26.0;
constexpr double kMarginRight = 10.0;

// Glyphs are drawn at font-size 100 and squeezed into the column box; the
// factors below approximate cap height and advance width of a bold
// sans-serif letter at that size.
constexpr double kGlyphHeight = 72.0;
constexpr double kGlyphWidth = 72.0;

const char* base_color(int b) {
  switch (b) {
    case 0: return "#109648";  // A
    case 1: return "#255c99";  // C
    case 2: return "#f7b32b";  // G
    default: return "#d62839"; // T
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_logo_svg(const Pwm& pwm) {
  const int w = pwm.width();
  const auto ic = information_content(pwm);
  const double width_px = kMarginLeft + w * kColumnWidth + kMarginRight;
  const double height_px = kMarginTop + kPlotHeight + kMarginBottom;
  const double base_y = kMarginTop + kPlotHeight;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt(width_px) << "\" height=\"" << fmt(height_px) << "\" viewBox=\"0 0 "
      << fmt(width_px) << " " << fmt(height_px) << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(width_px) << "\" height=\""
      << fmt(height_px) << "\" fill=\"white\"/>\n";

  // Axes: 0/1/2 bit ticks on the left, column indices along the bottom.
  out << "  <line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(kMarginTop)
      << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\"" << fmt(base_y)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(base_y)
      << "\" x2=\"" << fmt(kMarginLeft + w * kColumnWidth) << "\" y2=\""
      << fmt(base_y) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int bits = 0; bits <= 2; ++bits) {
    const double y = base_y - bits * kPlotHeight / 2.0;
    out << "  <line x1=\"" << fmt(kMarginLeft - 4) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "  <text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << bits << "</text>\n";
  }
  out << "  <text x=\"12\" y=\"" << fmt(kMarginTop + kPlotHeight / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 12 " << fmt(kMarginTop + kPlotHeight / 2.0)
      << ")\">bits</text>\n";

  for (int i = 0; i < w; ++i) {
    const double x0 = kMarginLeft + i * kColumnWidth;
    out << "  <text x=\"" << fmt(x0 + kColumnWidth / 2.0) << "\" y=\""
        << fmt(base_y + 16) << "\" font-family=\"sans-serif\" font-size=\"10\""
        << " text-anchor=\"middle\">" << (i + 1) << "</text>\n";

    // Stack, smallest letter at the bottom.
    std::vector<int> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (pwm.at(i, a) != pwm.at(i, b)) return pwm.at(i, a) < pwm.at(i, b);
      return a < b;
    });
    double y = base_y;
    for (int b : order) {
      const double h = pwm.at(i, b) * ic[static_cast<size_t>(i)] / 2.0 * kPlotHeight;
      if (h < 1e-6) continue;
      const double sy = h / kGlyphHeight;
      const double sx = kColumnWidth / kGlyphWidth;
      out << "  <text class=\"base\" x=\"0\" y=\"0\" font-family=\"sans-serif\""
          << " font-weight=\"bold\" font-size=\"100\" fill=\"" << base_color(b)
          << "\" transform=\"translate(" << fmt(x0) << " " << fmt(y)
          << ") scale(" << fmt(sx) << " " << fmt(sy) << ")\">" << kAlphabet[b]
          << "</text>\n";
      y -= h;
    }
  }
  out << "</svg>\n";
  return out.str();
}

void emit_logo_svg(const Pwm& pwm, const std::filesystem::path& path) {
  write_text_file(path, render_logo_svg(pwm));
}

}  // namespace demotif
