#pragma once

#include "egress/experiment.hpp"

#include <string>

namespace egress {

// Pure renderings of a results file; identical input bytes give identical
// output bytes.

// One row per cell, plain CSV.
std::string render_report_csv(const ExperimentReport& report);

// One six-column table per (layout, runtime) in the Result 1 / Result 2 /
// Comparison shape, plus a per-layout summary.
std::string render_report_markdown(const ExperimentReport& report);

// Self-contained SVG: per layout, grouped off/on bars for casualty and
// evacuation percentages. References no external resources.
std::string render_report_svg(const ExperimentReport& report);

} // namespace egress
