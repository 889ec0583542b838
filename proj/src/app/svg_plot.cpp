#include "twseg/app/svg_plot.hpp"

#include <cmath>
#include <cstdio>

#include "twseg/eval.hpp"

namespace twseg::app {
namespace {

// Tableau-20 without its two greys; greys are kept for unmatched clusters.
constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#bcbd22",
    "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2",
    "#dbdb8d", "#9edae5"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

constexpr const char* kUnmatched[] = {"#3a3a3a", "#6b6b6b", "#9c9c9c", "#cdcdcd"};
constexpr std::size_t kUnmatchedSize = sizeof(kUnmatched) / sizeof(kUnmatched[0]);

std::string hsl(double hue, int sat, int light) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "hsl(%.1f,%d%%,%d%%)", std::fmod(hue, 360.0), sat, light);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void draw_bar(std::string& svg, std::span<const int> labels, double y,
              const PlotOptions& opt, const auto& color_of) {
  const double n = static_cast<double>(labels.size());
  for (const auto& seg : segments_from_labels(labels)) {
    const double x0 = opt.label_width + opt.bar_width * static_cast<double>(seg.start) / n;
    const double x1 = opt.label_width + opt.bar_width * static_cast<double>(seg.end + 1) / n;
    svg += "  <rect x=\"" + num(x0) + "\" y=\"" + num(y) + "\" width=\"" + num(x1 - x0) +
           "\" height=\"" + num(opt.bar_height) + "\" fill=\"" + color_of(seg.label) + "\"/>\n";
  }
  // Outline so white background runs stay visible.
  svg += "  <rect x=\"" + num(opt.label_width) + "\" y=\"" + num(y) + "\" width=\"" +
         num(opt.bar_width) + "\" height=\"" + num(opt.bar_height) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
}

}  // namespace

std::string label_color(const GroundTruth& gt, int id) {
  const auto bg = gt.background_id();
  if (bg && *bg == id) return "#ffffff";
  std::size_t rank = static_cast<std::size_t>(id);
  if (bg && *bg < id) --rank;
  if (rank < kPaletteSize) return kPalette[rank];
  return hsl(137.508 * static_cast<double>(rank), 65, 55);
}

std::string unmatched_color(std::size_t index) {
  if (index < kUnmatchedSize) return kUnmatched[index];
  return hsl(137.508 * static_cast<double>(index), 35, 25);
}

std::string render_segmentation_svg(const GroundTruth& gt, std::span<const PlotRow> rows,
                                    const PlotOptions& opt) {
  for (const auto& row : rows) {
    if (row.partition.size() != gt.size()) {
      throw Error(Errc::LengthMismatch, "plot row '" + row.name + "' has " +
                                            std::to_string(row.partition.size()) +
                                            " frames, ground truth " + std::to_string(gt.size()));
    }
  }
  const double top = opt.title.empty() ? opt.gap : opt.gap + 24.0;
  const double width = opt.label_width + opt.bar_width + opt.gap;
  const double height = top + static_cast<double>(rows.size() + 1) * (opt.bar_height + opt.gap);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" fill=\"#ffffff\"/>\n";
  if (!opt.title.empty()) {
    svg += "  <text x=\"" + num(opt.gap) + "\" y=\"" + num(opt.gap + 14.0) +
           "\" font-family=\"sans-serif\" font-size=\"14\">" + escape(opt.title) + "</text>\n";
  }

  auto label_row = [&](const std::string& name, double y) {
    svg += "  <text x=\"" + num(opt.gap) + "\" y=\"" + num(y + opt.bar_height * 0.65) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(name) + "</text>\n";
  };

  double y = top;
  label_row("Ground truth", y);
  draw_bar(svg, gt.labels, y, opt, [&](int id) { return label_color(gt, id); });

  for (const auto& row : rows) {
    y += opt.bar_height + opt.gap;
    const Mapping mapping = eval::match(row.partition, gt);
    std::vector<std::string> colors(row.partition.num_clusters());
    std::size_t unmatched = 0;
    for (std::size_t p = 0; p < colors.size(); ++p) {
      const int g = mapping[p];
      colors[p] = g >= 0 ? label_color(gt, g) : unmatched_color(unmatched++);
    }
    label_row(row.name, y);
    draw_bar(svg, row.partition.labels(), y, opt,
             [&](int id) { return colors[static_cast<std::size_t>(id)]; });
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace twseg::app
