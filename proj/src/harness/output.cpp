#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "polydecay/harness.hpp"

#ifndef POLYDECAY_VERSION
#define POLYDECAY_VERSION "unknown"
#endif

namespace polydecay::harness {

nlohmann::json CheckRecord::to_json() const {
  return {{"name", name}, {"anchor", anchor}, {"measured", measured}, {"threshold", threshold}, {"verdict", verdict}};
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.verdict == "pass"; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    cs.push_back(c.to_json());
    passed += c.verdict == "pass";
  }
  return {{"config", config},
          {"checks", cs},
          {"environment", environment},
          {"summary", {{"total", checks.size()}, {"passed", passed}, {"all_pass", all_pass()}}}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

int exit_status(const Report& report) { return report.all_pass() ? 0 : 1; }

nlohmann::json environment_stamp() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return {{"version", POLYDECAY_VERSION},
          {"precision", "binary64"},
          {"epsilon", std::numeric_limits<double>::epsilon()},
          {"eigen", eigen.str()},
          {"schema_version", kSchemaVersion}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::PreconditionViolation, "cannot write " + path.string());
  out << text;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string svg_plot(const std::string& title, const std::vector<PlotSeries>& series, bool logx, bool logy,
                     const std::string& xlabel, const std::string& ylabel) {
  constexpr double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!logx || x > 0) && (!logy || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 < x1)) { x0 -= 1; x1 += 1; }
  if (!(y0 < y1)) { y0 -= 1; y1 += 1; }
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (ty(v) - y0) / (y1 - y0) * (h - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\"" << h - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [&](double v, bool log) { return log ? "1e" + fmt(v) : fmt(v); };
  os << "<text x=\"" << ml << "\" y=\"" << h - mb + 16 << "\" font-family=\"sans-serif\" font-size=\"11\">" << label(x0, logx) << "</text>\n";
  os << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 16 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(x1, logx) << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << h - mb << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(y0, logy) << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(y1, logy) << "</text>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << h / 2 << "\" transform=\"rotate(-90 16 " << h / 2 << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(ylabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 14 * k << "\" fill=\"" << col << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace polydecay::harness
