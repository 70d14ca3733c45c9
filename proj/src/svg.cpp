#include "capfield/svg.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace capfield {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_spectrum_svg(std::ostream& out, const SpectrumEstimate& s, const std::string& config) {
  constexpr double W = 480, H = 400, L = 60, R = 20, T = 30, B = 50;
  const double d = s.d;
  auto px = [&](double beta) { return L + (W - L - R) * beta / d; };
  auto py = [&](double dim) { return H - B - (H - T - B) * dim / d; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<!-- config " << config << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(d)) << "\" y2=\""
      << num(py(0)) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(0)) << "\" y2=\""
      << num(py(d)) << "\" stroke=\"black\"/>\n";
  const int ticks = 4 * s.d;
  for (int i = 0; i <= ticks; ++i) {
    const double v = d * i / ticks;
    out << "<text x=\"" << num(px(v)) << "\" y=\"" << num(py(0) + 18) << "\" text-anchor=\"middle\">" << num(v)
        << "</text>\n";
    out << "<text x=\"" << num(px(0) - 8) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">" << num(v)
        << "</text>\n";
  }
  out << "<text x=\"" << num((px(0) + px(d)) / 2) << "\" y=\"" << num(H - 12)
      << "\" text-anchor=\"middle\">&#946;</text>\n";
  out << "<text x=\"16\" y=\"" << num((py(0) + py(d)) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num((py(0) + py(d)) / 2) << ")\">dim E(&#946;)</text>\n";
  out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(d)) << "\" x2=\"" << num(px(d)) << "\" y2=\""
      << num(py(0)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  out << "<text x=\"" << num(px(0.55 * d)) << "\" y=\"" << num(py(0.45 * d) - 8) << "\" fill=\"gray\">d - &#946;</text>\n";
  for (const SpectrumPoint& p : s.points) {
    out << "<circle cx=\"" << num(px(p.beta)) << "\" cy=\"" << num(py(p.dim)) << "\" r=\"4\" stroke=\"#1f4e9c\" fill=\""
        << (p.empty ? "none" : "#1f4e9c") << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace capfield
