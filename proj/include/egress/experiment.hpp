#pragma once

#include "egress/engine.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace egress {

// One batch: every (layout, student count, runtime) combination, each run as
// a detector-off/detector-on pair over seeds_per_cell seeds.
struct MatrixSpec {
    std::vector<std::string> layout_paths;
    std::vector<int> student_counts;
    std::vector<int> runtimes_s;
    int seeds_per_cell = 100;
    std::uint64_t base_seed = 1;

    int tick_s = 1;
    int officer_entry_s = 300;
    int student_speed = 1;
    int shooter_speed = 1;
    int officer_speed = 2;
    BehaviorParams params;

    void validate() const;
};

// The 48-cell reference matrix: the three bundled layouts, 50..200 students,
// 6..9 minutes.
MatrixSpec paper_preset(const std::string& maps_dir);

struct SpecParseError : std::runtime_error {
    SpecParseError(int line, const std::string& what);
    int line;
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Line-oriented key=value text; ';' starts a comment. Keys: layouts,
// students, runtimes, seeds, base_seed, tick, officer_entry, student_speed,
// shooter_speed, officer_speed, alpha, beta, gamma, officer_gamma, sigma,
// epsilon. List values are comma-separated.
MatrixSpec parse_matrix_spec(const std::string& text);

// Placement seed for one run. Deliberately independent of the runtime so
// cells that differ only in runtime replay the same trajectories for longer;
// distinct (layout, count, seed) triples never collide.
std::uint64_t derive_placement_seed(std::uint64_t base_seed, int layout_index,
                                    int count_index, int seed_index);
std::uint64_t derive_run_seed(std::uint64_t placement_seed);

struct PairedOutcome {
    std::uint64_t placement_seed = 0;
    RunOutcome off;
    RunOutcome on;
};

struct CellResult {
    std::string layout;
    int student_count = 0;
    int runtime_s = 0;
    int seeds = 0;

    double off_casualty_pct = 0.0;
    double off_evacuation_pct = 0.0;
    double on_casualty_pct = 0.0;
    double on_evacuation_pct = 0.0;
    double off_casualty_sd = 0.0;
    double off_evacuation_sd = 0.0;
    double on_casualty_sd = 0.0;
    double on_evacuation_sd = 0.0;

    // on minus off, in percentage points: improvement is negative casualty
    // change and positive evacuation change.
    double casualty_change = 0.0;
    double evacuation_change = 0.0;

    std::vector<PairedOutcome> per_seed; // empty when loaded from a file
};

// Runs every seed of one cell as a detector-off/on pair sharing the
// placement seed, then aggregates means and standard deviations.
CellResult run_cell(const FloorLayout& layout, const std::string& layout_name,
                    int student_count, int runtime_s,
                    const std::vector<std::uint64_t>& placement_seeds,
                    const MatrixSpec& knobs);

struct ExperimentReport {
    MatrixSpec spec;
    std::vector<std::string> layout_names;
    std::vector<CellResult> cells; // canonical (layout, count, runtime) order
    std::uint64_t fingerprint = 0;
};

// Runs the whole matrix. Cells execute on up to `threads` workers (0 = one
// per hardware thread) and are merged in canonical order, so the report is
// identical regardless of scheduling.
ExperimentReport run_matrix(const MatrixSpec& spec, int threads = 0);

struct LayoutDirection {
    std::string layout;
    double mean_casualty_change = 0.0;
    double mean_evacuation_change = 0.0;
    double frac_casualty_down = 0.0; // cells with casualty_change < 0
    double frac_evacuation_up = 0.0; // cells with evacuation_change > 0
    int cells = 0;
};

struct DirectionSummary {
    std::vector<LayoutDirection> per_layout;
    double mean_casualty_change = 0.0;
    double mean_evacuation_change = 0.0;
};

DirectionSummary summarize_direction(const ExperimentReport& report);

// Versioned cell-level persistence. The first line carries the schema tag;
// parse_results rejects anything else.
inline constexpr const char* kResultsSchema = "egress.results.v1";
std::string write_results(const ExperimentReport& report);
ExperimentReport parse_results(const std::string& text);

std::uint64_t config_fingerprint(const MatrixSpec& spec);

// Reads a whole file; throws std::runtime_error with the path on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// "maps/structure1.map" -> "structure1".
std::string layout_name_from_path(const std::string& path);

} // namespace egress
