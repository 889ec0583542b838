#pragma once

#include <span>
#include <string>
#include <vector>

#include "twseg/types.hpp"

namespace twseg::app {

struct PlotRow {
  std::string name;
  Partition partition;
};

struct PlotOptions {
  double bar_width = 900.0;
  double bar_height = 28.0;
  double gap = 10.0;
  double label_width = 140.0;
  std::string title;
};

/// Fill color of ground-truth label `id` (background is white).
std::string label_color(const GroundTruth& gt, int id);

/// Reserved colors for predicted clusters that have no Hungarian match.
std::string unmatched_color(std::size_t index);

/// Static SVG: the ground-truth bar first, then one bar per method. Each
/// method's clusters take the color of their Hungarian-matched label.
std::string render_segmentation_svg(const GroundTruth& gt, std::span<const PlotRow> rows,
                                    const PlotOptions& options = {});

}  // namespace twseg::app
