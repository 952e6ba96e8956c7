#include "egress/report.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace egress {

namespace {

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fixed1(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::vector<int> distinct_sorted(std::vector<int> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

} // namespace

std::string render_report_csv(const ExperimentReport& report) {
    std::string out =
        "layout,students,runtime_s,seeds,off_casualty_pct,off_evacuation_pct,"
        "on_casualty_pct,on_evacuation_pct,casualty_change_pp,evacuation_change_pp\n";
    for (const CellResult& c : report.cells) {
        out += c.layout;
        out += ',' + std::to_string(c.student_count);
        out += ',' + std::to_string(c.runtime_s);
        out += ',' + std::to_string(c.seeds);
        out += ',' + fixed2(c.off_casualty_pct);
        out += ',' + fixed2(c.off_evacuation_pct);
        out += ',' + fixed2(c.on_casualty_pct);
        out += ',' + fixed2(c.on_evacuation_pct);
        out += ',' + fixed2(c.casualty_change);
        out += ',' + fixed2(c.evacuation_change);
        out += '\n';
    }
    return out;
}

std::string render_report_markdown(const ExperimentReport& report) {
    std::string out = "# Detection system comparison\n";
    out +=
        "\nResult 1 runs without the detection system, Result 2 with it; the\n"
        "comparison columns are Result 2 minus Result 1 in percentage points.\n";

    for (const std::string& layout : report.layout_names) {
        std::vector<int> runtimes;
        for (const CellResult& c : report.cells) {
            if (c.layout == layout) runtimes.push_back(c.runtime_s);
        }
        for (const int runtime : distinct_sorted(std::move(runtimes))) {
            out += "\n## " + layout + " — runtime " + std::to_string(runtime) + " s\n\n";
            out +=
                "| | Casualties (%) | Evacuation (%) | Casualties (%) | Evacuation (%) "
                "| Casualty Change | Evacuation Efficiency Change |\n";
            out += "|---|---|---|---|---|---|---|\n";
            for (const CellResult& c : report.cells) {
                if (c.layout != layout || c.runtime_s != runtime) continue;
                out += "| " + std::to_string(c.student_count) + " Students | " +
                       fixed2(c.off_casualty_pct) + " | " + fixed2(c.off_evacuation_pct) +
                       " | " + fixed2(c.on_casualty_pct) + " | " +
                       fixed2(c.on_evacuation_pct) + " | " + fixed2(c.casualty_change) +
                       " | " + fixed2(c.evacuation_change) + " |\n";
            }
        }
    }

    const DirectionSummary summary = summarize_direction(report);
    if (!summary.per_layout.empty()) {
        out += "\n## Summary\n\n";
        out += "| Layout | Mean casualty change (pp) | Mean evacuation change (pp) |\n";
        out += "|---|---|---|\n";
        for (const LayoutDirection& d : summary.per_layout) {
            out += "| " + d.layout + " | " + fixed2(d.mean_casualty_change) + " | " +
                   fixed2(d.mean_evacuation_change) + " |\n";
        }
    }
    return out;
}

namespace {

struct SvgWriter {
    std::string out;

    void rect(double x, double y, double w, double h, const char* fill) {
        out += "<rect x=\"" + fixed1(x) + "\" y=\"" + fixed1(y) + "\" width=\"" + fixed1(w) +
               "\" height=\"" + fixed1(h) + "\" fill=\"" + fill + "\"/>\n";
    }
    void line(double x1, double y1, double x2, double y2) {
        out += "<line x1=\"" + fixed1(x1) + "\" y1=\"" + fixed1(y1) + "\" x2=\"" + fixed1(x2) +
               "\" y2=\"" + fixed1(y2) + "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    }
    void text(double x, double y, int size, const std::string& s, const char* anchor = "start") {
        out += "<text x=\"" + fixed1(x) + "\" y=\"" + fixed1(y) + "\" font-size=\"" +
               std::to_string(size) +
               "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + s +
               "</text>\n";
    }
};

} // namespace

std::string render_report_svg(const ExperimentReport& report) {
    constexpr const char* kOffFill = "#9aa0a6";
    constexpr const char* kOnFill = "#2a7de1";
    constexpr double kPanelW = 420.0;
    constexpr double kPanelH = 200.0;
    constexpr double kPlotH = 140.0;
    constexpr double kMarginX = 46.0;
    constexpr double kBaseY = 170.0;
    constexpr double kLayoutStride = 230.0;

    const int layouts = int(report.layout_names.size());
    const double width = 2 * kPanelW + 40.0;
    const double height = std::max(1, layouts) * kLayoutStride + 40.0;

    SvgWriter svg;
    svg.out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg.out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed1(width) +
               "\" height=\"" + fixed1(height) + "\" viewBox=\"0 0 " + fixed1(width) + " " +
               fixed1(height) + "\">\n";
    svg.out += "<rect x=\"0\" y=\"0\" width=\"" + fixed1(width) + "\" height=\"" +
               fixed1(height) + "\" fill=\"#ffffff\"/>\n";
    svg.text(20, 22, 14, "Casualties and evacuation efficiency, without vs. with detection");
    svg.rect(width - 250, 10, 10, 10, kOffFill);
    svg.text(width - 236, 19, 10, "without detection");
    svg.rect(width - 120, 10, 10, 10, kOnFill);
    svg.text(width - 106, 19, 10, "with detection");

    for (int li = 0; li < layouts; ++li) {
        const std::string& layout = report.layout_names[li];
        std::vector<const CellResult*> cells;
        for (const CellResult& c : report.cells) {
            if (c.layout == layout) cells.push_back(&c);
        }
        const double top = 40.0 + li * kLayoutStride;
        svg.text(20, top + 14, 12, layout);

        for (int panel = 0; panel < 2; ++panel) {
            const double px = 20.0 + panel * (kPanelW + 20.0);
            const double py = top + 20.0;
            const double base = py + kBaseY - 20.0;
            svg.text(px + kMarginX, py + 10, 10,
                     panel == 0 ? "Casualties (%)" : "Evacuation (%)");
            svg.line(px + kMarginX, base, px + kMarginX + kPanelW - kMarginX - 10, base);
            svg.line(px + kMarginX, base, px + kMarginX, base - kPlotH);
            for (int tick = 0; tick <= 100; tick += 50) {
                const double y = base - kPlotH * tick / 100.0;
                svg.text(px + kMarginX - 6, y + 3, 8, std::to_string(tick), "end");
            }

            const double slot = cells.empty()
                                    ? 0.0
                                    : (kPanelW - kMarginX - 20.0) / double(cells.size());
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const CellResult& c = *cells[i];
                const double gx = px + kMarginX + 4.0 + slot * double(i);
                const double bw = std::max(2.0, slot / 2.0 - 2.0);
                const double off_v = panel == 0 ? c.off_casualty_pct : c.off_evacuation_pct;
                const double on_v = panel == 0 ? c.on_casualty_pct : c.on_evacuation_pct;
                svg.rect(gx, base - kPlotH * off_v / 100.0, bw, kPlotH * off_v / 100.0,
                         kOffFill);
                svg.rect(gx + bw + 1.0, base - kPlotH * on_v / 100.0, bw,
                         kPlotH * on_v / 100.0, kOnFill);
                svg.text(gx + bw, base + 9.0, 6,
                         std::to_string(c.student_count) + "/" +
                             std::to_string(c.runtime_s),
                         "middle");
            }
            (void)kPanelH;
        }
    }
    svg.out += "</svg>\n";
    return svg.out;
}

} // namespace egress
