#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "duograph/analytic.hpp"
#include "duograph/errors.hpp"
#include "duograph/harness.hpp"

namespace duograph {

struct PhaseDiagramOptions {
  double l1_min = 0.5;
  double l1_max = 6.0;
  double l2_min = 0.5;
  double l2_max = 6.0;
  std::uint32_t resolution = 50;  // lattice points per axis
  double curve_tol = 1e-8;
};

struct PhaseDiagram {
  struct Cell {
    double lambda1, lambda2, beta;
  };
  std::vector<Cell> cells;          // row-major lattice, lambda1 fastest
  std::vector<CurvePoint> curve;    // threshold overlay within the window
  PhaseDiagramOptions options;
};

inline PhaseDiagram compute_phase_diagram(const PhaseDiagramOptions& opt) {
  for (double v : {opt.l1_min, opt.l1_max, opt.l2_min, opt.l2_max})
    if (!(v > 0.0) || v > 20.0)
      throw parameter_error("phase diagram: ranges must lie in (0, 20]");
  if (opt.l1_min >= opt.l1_max || opt.l2_min >= opt.l2_max)
    throw parameter_error("phase diagram: empty range");
  if (opt.resolution < 2) throw parameter_error("phase diagram: resolution must be >= 2");

  PhaseDiagram out;
  out.options = opt;
  const double dx = (opt.l1_max - opt.l1_min) / (opt.resolution - 1);
  const double dy = (opt.l2_max - opt.l2_min) / (opt.resolution - 1);
  for (std::uint32_t j = 0; j < opt.resolution; ++j) {
    const double l2 = opt.l2_min + j * dy;
    for (std::uint32_t i = 0; i < opt.resolution; ++i) {
      const double l1 = opt.l1_min + i * dx;
      out.cells.push_back({l1, l2, beta(l1, l2).beta});
    }
  }
  // Curve overlay on a finer lambda1 sweep; points outside the window or
  // without a finite threshold are skipped.
  const std::uint32_t curve_samples = opt.resolution * 4;
  const double lo = std::max(opt.l1_min, 1.0 + 1e-6);
  if (lo < opt.l1_max) {
    const double step = (opt.l1_max - lo) / curve_samples;
    for (std::uint32_t i = 0; i <= curve_samples; ++i) {
      const double l1 = lo + i * step;
      const auto l2c = critical_lambda2(l1, opt.curve_tol);
      if (!l2c || *l2c < opt.l2_min || *l2c > opt.l2_max) continue;
      CurvePoint p;
      p.lambda1 = l1;
      p.lambda2_critical = *l2c;
      p.beta_at_critical = beta(l1, *l2c).local_max_location;
      out.curve.push_back(p);
    }
  }
  return out;
}

inline void write_phase_csv(const PhaseDiagram& pd, std::ostream& out) {
  out << "kind,lambda1,lambda2,beta\n";
  for (const auto& c : pd.cells)
    out << "cell," << format_double(c.lambda1) << ',' << format_double(c.lambda2) << ','
        << format_double(c.beta) << '\n';
  for (const auto& p : pd.curve)
    out << "curve," << format_double(p.lambda1) << ',' << format_double(p.lambda2_critical)
        << ',' << format_double(p.beta_at_critical) << '\n';
  out.flush();
}

/// Fixed 800x800 standalone SVG: shaded beta lattice, threshold polyline,
/// labelled axes. No external assets, suitable as a golden file.
inline void write_phase_svg(const PhaseDiagram& pd, std::ostream& out) {
  const double W = 800, H = 800, ml = 70, mr = 20, mt = 20, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;
  const auto& o = pd.options;
  auto px = [&](double l1) { return ml + (l1 - o.l1_min) / (o.l1_max - o.l1_min) * pw; };
  auto py = [&](double l2) { return mt + (o.l2_max - l2) / (o.l2_max - o.l2_min) * ph; };
  auto shade = [](double b) {
    if (b <= 0.0) return std::string("#ffffff");
    const auto lerp = [&](int a, int z) {
      return static_cast<int>(a + (z - a) * b);
    };
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", lerp(0xde, 0x08), lerp(0xeb, 0x30),
                  lerp(0xf7, 0x6b));
    return std::string(buf);
  };
  const double cw = pw / (o.resolution - 1);
  const double ch = ph / (o.resolution - 1);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out << "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
  for (const auto& c : pd.cells) {
    out << "<rect x=\"" << format_double(px(c.lambda1) - cw / 2) << "\" y=\""
        << format_double(py(c.lambda2) - ch / 2) << "\" width=\"" << format_double(cw)
        << "\" height=\"" << format_double(ch) << "\" fill=\"" << shade(c.beta)
        << "\"/>\n";
  }
  if (!pd.curve.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
    for (const auto& p : pd.curve)
      out << format_double(px(p.lambda1)) << ',' << format_double(py(p.lambda2_critical))
          << ' ';
    out << "\"/>\n";
  }
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"#000000\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << mt + ph << "\" stroke=\"#000000\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = o.l1_min + (o.l1_max - o.l1_min) * i / ticks;
    const double fy = o.l2_min + (o.l2_max - o.l2_min) * i / ticks;
    out << "<line x1=\"" << format_double(px(fx)) << "\" y1=\"" << mt + ph << "\" x2=\""
        << format_double(px(fx)) << "\" y2=\"" << mt + ph + 6 << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << format_double(px(fx)) << "\" y=\"" << mt + ph + 22
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
        << format_double(fx) << "</text>\n";
    out << "<line x1=\"" << ml - 6 << "\" y1=\"" << format_double(py(fy)) << "\" x2=\""
        << ml << "\" y2=\"" << format_double(py(fy)) << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << ml - 10 << "\" y=\"" << format_double(py(fy) + 4)
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">"
        << format_double(fy) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 16
      << "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">"
         "lambda1</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">lambda2</text>\n";
  out << "</svg>\n";
  out.flush();
}

/// Computes the diagram and writes the CSV (and optionally the SVG).
inline PhaseDiagram emit_phase_diagram(const PhaseDiagramOptions& opt,
                                       const std::string& out_csv,
                                       const std::optional<std::string>& out_svg) {
  const PhaseDiagram pd = compute_phase_diagram(opt);
  {
    std::ofstream os(out_csv);
    if (!os) throw io_error("phase diagram: cannot open " + out_csv);
    write_phase_csv(pd, os);
    if (!os) throw io_error("phase diagram: write failed for " + out_csv);
  }
  if (out_svg) {
    std::ofstream os(*out_svg);
    if (!os) throw io_error("phase diagram: cannot open " + *out_svg);
    write_phase_svg(pd, os);
    if (!os) throw io_error("phase diagram: write failed for " + *out_svg);
  }
  return pd;
}

}  // namespace duograph
