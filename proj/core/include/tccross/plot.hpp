#ifndef TCCROSS_PLOT_HPP
#define TCCROSS_PLOT_HPP

#include <string>
#include <vector>

#include "tccross/csv.hpp"

namespace tc {

// Figure ids renderable from sweep CSV files.
std::vector<std::string> known_figures();

// Renders the named figure from a sweep CSV into SVG and returns the paths
// written (tomography writes one file per manifold, derived from out_path).
// Throws ConfigError for an unknown figure id or a CSV missing a required
// column; the message names the offender.  Rendering is deterministic.
std::vector<std::string> render_figure(const CsvTable& table,
                                       const std::string& figure,
                                       const std::string& out_path);

} // namespace tc

#endif
