// Deterministic SVG line charts of diagnostics series: fixed canvas, fixed
// formatting precision, no timestamps, so identical inputs give identical
// bytes. Optionally overlays the fitted tower-exponential envelope.
#pragma once

#include "axmhd/diagnostics.hpp"

#include <optional>
#include <string>

namespace axmhd {

struct PlotOptions {
  std::string quantity;          // diagnostics column name
  std::optional<int> phi_k;      // overlay Phi_{k,c} envelope (fits c)
  double c_cap = 1e3;
};

// Renders quantity-vs-t. Throws std::invalid_argument on an unknown column
// or an empty series.
std::string render_svg(const Series& s, const PlotOptions& opt);

} // namespace axmhd
