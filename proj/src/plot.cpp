// Minimal hand-rolled SVG rendering: axes box, 5 ticks per axis, one
// polyline per curve. Coordinates are printed with %.2f and data labels with
// %.6g so output is byte-stable across runs.
#include "axmhd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace axmhd {

namespace {

constexpr double W = 720, Hh = 480;
constexpr double ML = 80, MR = 20, MT = 40, MB = 50; // margins

std::string num(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void polyline(std::ostringstream& os, const std::vector<double>& xs,
              const std::vector<double>& ys, double x0, double x1, double y0, double y1,
              const char* color, const char* dash) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
  if (dash[0]) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  const double sx = (W - ML - MR) / std::max(x1 - x0, 1e-300);
  const double sy = (Hh - MT - MB) / std::max(y1 - y0, 1e-300);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double px = ML + (xs[k] - x0) * sx;
    const double py = Hh - MB - (ys[k] - y0) * sy;
    os << num("%.2f", px) << "," << num("%.2f", py) << " ";
  }
  os << "\"/>\n";
}

} // namespace

std::string render_svg(const Series& s, const PlotOptions& opt) {
  if (s.empty()) throw std::invalid_argument("render_svg: empty series");
  const auto& names = DiagnosticsRecord::column_names();
  const auto it = std::find(names.begin(), names.end(), opt.quantity);
  if (it == names.end() || opt.quantity == "t")
    throw std::invalid_argument("render_svg: unknown quantity '" + opt.quantity + "'");
  const std::size_t col = static_cast<std::size_t>(it - names.begin());

  std::vector<double> t, v;
  for (const auto& rec : s) {
    const auto row = rec.row();
    t.push_back(row[0]);
    v.push_back(row[col]);
  }

  std::vector<double> env;
  double fitted_c = 0.0;
  if (opt.phi_k) {
    std::vector<double> trel;
    for (double x : t) trel.push_back(x - t.front());
    const PhiFit fit = phi_fit(trel, v, *opt.phi_k, opt.c_cap);
    fitted_c = fit.c;
    for (double x : trel) env.push_back(phi_tower(*opt.phi_k, fit.c, x));
  }

  double x0 = t.front(), x1 = t.back();
  double y0 = *std::min_element(v.begin(), v.end());
  double y1 = *std::max_element(v.begin(), v.end());
  for (double e : env) {
    if (std::isfinite(e)) y1 = std::max(y1, e);
  }
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  if (x1 == x0) x1 = x0 + 1.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)W << "\" height=\""
     << (int)Hh << "\" viewBox=\"0 0 " << (int)W << " " << (int)Hh << "\">\n";
  os << "<rect width=\"" << (int)W << "\" height=\"" << (int)Hh << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << num("%.2f", ML) << "\" y=\"" << num("%.2f", MT) << "\" width=\""
     << num("%.2f", W - ML - MR) << "\" height=\"" << num("%.2f", Hh - MT - MB)
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  os << "<text x=\"" << num("%.2f", W / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"monospace\" font-size=\"16\">"
     << opt.quantity;
  if (opt.phi_k) os << "  (envelope k=" << *opt.phi_k << ", c=" << num("%.6g", fitted_c) << ")";
  os << "</text>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double px = ML + (W - ML - MR) * k / 4.0;
    os << "<line x1=\"" << num("%.2f", px) << "\" y1=\"" << num("%.2f", Hh - MB) << "\" x2=\""
       << num("%.2f", px) << "\" y2=\"" << num("%.2f", Hh - MB + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num("%.2f", px) << "\" y=\"" << num("%.2f", Hh - MB + 20)
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
       << num("%.6g", fx) << "</text>\n";
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double py = Hh - MB - (Hh - MT - MB) * k / 4.0;
    os << "<line x1=\"" << num("%.2f", ML - 5) << "\" y1=\"" << num("%.2f", py) << "\" x2=\""
       << num("%.2f", ML) << "\" y2=\"" << num("%.2f", py) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num("%.2f", ML - 8) << "\" y=\"" << num("%.2f", py + 4)
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << num("%.6g", fy)
       << "</text>\n";
  }
  os << "<text x=\"" << num("%.2f", W / 2) << "\" y=\"" << num("%.2f", Hh - 12)
     << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">t</text>\n";

  polyline(os, t, v, x0, x1, y0, y1, "#1f4e9c", "");
  if (!env.empty()) {
    // clip non-finite envelope values to the top of the frame
    std::vector<double> ec = env;
    for (double& e : ec)
      if (!std::isfinite(e)) e = y1;
    polyline(os, t, ec, x0, x1, y0, y1, "#b03030", "6,4");
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace axmhd
