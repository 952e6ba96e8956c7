#include "egress/cli.hpp"

#include "egress/audit.hpp"
#include "egress/engine.hpp"
#include "egress/experiment.hpp"
#include "egress/layout.hpp"
#include "egress/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>

namespace egress {

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 2;
constexpr int kIoError = 3;

int thread_cap(std::ostream& err, bool* bad) {
    *bad = false;
    const char* env = std::getenv("EGRESS_SIM_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) {
        err << "EGRESS_SIM_THREADS must be a non-negative integer (0 = auto)\n";
        *bad = true;
        return 0;
    }
    return int(v);
}

std::string outcome_line(const RunOutcome& o) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "casualties=%d evacuated=%d hiding=%d still_inside=%d "
                  "casualty_pct=%.2f evacuation_pct=%.2f suppressed=%d "
                  "suppression_time_s=%d",
                  o.casualties, o.evacuated, o.hiding, o.still_inside, o.casualty_pct,
                  o.evacuation_pct, o.suppressed ? 1 : 0,
                  o.suppression_time_s ? *o.suppression_time_s : -1);
    return buf;
}

struct RunFlags {
    std::string map_path;
    int students = 100;
    int runtime = 360;
    std::uint64_t seed = 1;
    bool placement_given = false;
    std::uint64_t placement_seed = 0;
    std::string detector = "off";
    bool events = false;
    SimConfig cfg;
};

void add_param_flags(CLI::App* cmd, SimConfig& cfg) {
    cmd->add_option("--alpha", cfg.params.alpha, "hiding range (cells)");
    cmd->add_option("--beta", cfg.params.beta, "hearing range (cells)");
    cmd->add_option("--gamma", cfg.params.gamma, "shooter visible range (cells)");
    cmd->add_option("--officer-gamma", cfg.params.officer_gamma,
                    "officer visible range (cells)");
    cmd->add_option("--sigma", cfg.params.sigma, "officer hearing range (cells)");
    cmd->add_option("--epsilon", cfg.params.epsilon, "objective guard constant");
    cmd->add_option("--tick", cfg.tick_s, "tick length (s)");
    cmd->add_option("--officer-entry", cfg.officer_entry_s, "officer entry time (s)");
    cmd->add_option("--student-speed", cfg.student_speed, "cells per tick");
    cmd->add_option("--shooter-speed", cfg.shooter_speed, "cells per tick");
    cmd->add_option("--officer-speed", cfg.officer_speed, "cells per tick");
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"egress-sim: evacuation simulator and experiment harness"};
    app.require_subcommand(1);

    // validate-map
    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate-map", "Parse and validate a map file");
    validate->add_option("path", validate_path, "map file")->required();

    // run
    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "Run one simulation");
    run->add_option("--map", rf.map_path, "map file")->required();
    run->add_option("--students", rf.students, "number of students");
    run->add_option("--runtime", rf.runtime, "simulated seconds");
    run->add_option("--seed", rf.seed, "run seed");
    auto* pseed = run->add_option("--placement-seed", rf.placement_seed,
                                  "placement seed (default: derived from --seed)");
    run->add_option("--detector", rf.detector, "on|off")->check(CLI::IsMember({"on", "off"}));
    run->add_flag("--events", rf.events, "print the full event log");
    add_param_flags(run, rf.cfg);

    // batch
    std::string batch_spec_path;
    std::string batch_out_dir;
    CLI::App* batch = app.add_subcommand("batch", "Run an experiment matrix");
    batch->add_option("--spec", batch_spec_path, "matrix spec file")->required();
    batch->add_option("--out", batch_out_dir, "output directory")->required();

    // report
    std::string report_results_path;
    std::string report_format = "csv";
    std::string report_out_path;
    CLI::App* report = app.add_subcommand("report", "Render batch results");
    report->add_option("--results", report_results_path, "results csv from batch")->required();
    report->add_option("--format", report_format, "csv|md|svg")
        ->check(CLI::IsMember({"csv", "md", "svg"}));
    report->add_option("--out", report_out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUserError;
    }

    try {
        if (*validate) {
            std::string text;
            try {
                text = read_text_file(validate_path);
            } catch (const IoError& e) {
                err << e.what() << "\n";
                return kIoError;
            }
            try {
                const FloorLayout layout =
                    parse_layout(text, layout_name_from_path(validate_path));
                const LayoutStats stats = layout_stats(layout);
                out << "rooms=" << stats.room_count << " exits=" << stats.exit_count << "\n";
                return kOk;
            } catch (const MapSyntaxError& e) {
                err << validate_path << ": " << e.what() << "\n";
                return kUserError;
            } catch (const MapValidationError& e) {
                err << validate_path << ": " << e.what() << "\n";
                return kUserError;
            }
        }

        if (*run) {
            std::string text;
            try {
                text = read_text_file(rf.map_path);
            } catch (const IoError& e) {
                err << e.what() << "\n";
                return kIoError;
            }
            FloorLayout layout;
            try {
                layout = parse_layout(text, layout_name_from_path(rf.map_path));
            } catch (const std::runtime_error& e) {
                err << rf.map_path << ": " << e.what() << "\n";
                return kUserError;
            }
            SimConfig cfg = rf.cfg;
            cfg.layout_name = layout.name();
            cfg.student_count = rf.students;
            cfg.runtime_s = rf.runtime;
            cfg.seed = rf.seed;
            cfg.placement_seed = pseed->count() ? rf.placement_seed : splitmix64(rf.seed);
            cfg.detector_enabled = rf.detector == "on";
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                err << e.what() << "\n";
                return kUserError;
            }
            const RunResult result = run_simulation(layout, cfg);
            out << outcome_line(result.outcome) << "\n";
            if (rf.events) {
                out << serialize_events(result.events);
            }
            return kOk;
        }

        if (*batch) {
            bool bad_env = false;
            const int threads = thread_cap(err, &bad_env);
            if (bad_env) return kUserError;

            std::string text;
            try {
                text = read_text_file(batch_spec_path);
            } catch (const IoError& e) {
                err << e.what() << "\n";
                return kIoError;
            }
            MatrixSpec spec;
            try {
                spec = parse_matrix_spec(text);
            } catch (const SpecParseError& e) {
                err << batch_spec_path << ": " << e.what() << "\n";
                return kUserError;
            } catch (const std::invalid_argument& e) {
                err << batch_spec_path << ": " << e.what() << "\n";
                return kUserError;
            }
            // Map paths in the spec resolve relative to the spec file.
            const std::filesystem::path spec_dir =
                std::filesystem::path(batch_spec_path).parent_path();
            for (std::string& p : spec.layout_paths) {
                if (!std::filesystem::path(p).is_absolute()) {
                    p = (spec_dir / p).string();
                }
            }
            ExperimentReport rep;
            try {
                rep = run_matrix(spec, threads);
            } catch (const IoError& e) {
                err << e.what() << "\n";
                return kIoError;
            } catch (const std::runtime_error& e) {
                err << e.what() << "\n";
                return kUserError;
            }
            std::error_code ec;
            std::filesystem::create_directories(batch_out_dir, ec);
            if (ec) {
                err << "cannot create output directory: " << batch_out_dir << "\n";
                return kIoError;
            }
            const std::string results_path =
                (std::filesystem::path(batch_out_dir) / "results.csv").string();
            try {
                write_text_file(results_path, write_results(rep));
            } catch (const IoError& e) {
                err << e.what() << "\n";
                return kIoError;
            }
            char fp[32];
            std::snprintf(fp, sizeof fp, "%016llx",
                          static_cast<unsigned long long>(rep.fingerprint));
            out << "cells=" << rep.cells.size() << " seeds_per_cell=" << spec.seeds_per_cell
                << " results=" << results_path << " fingerprint=" << fp << "\n";
            return kOk;
        }

        if (*report) {
            std::string text;
            try {
                text = read_text_file(report_results_path);
            } catch (const IoError& e) {
                err << e.what() << "\n";
                return kIoError;
            }
            ExperimentReport rep;
            try {
                rep = parse_results(text);
            } catch (const SchemaError& e) {
                err << report_results_path << ": " << e.what() << "\n";
                return kUserError;
            } catch (const std::runtime_error& e) {
                err << report_results_path << ": " << e.what() << "\n";
                return kUserError;
            }
            std::string rendered;
            if (report_format == "csv") {
                rendered = render_report_csv(rep);
            } else if (report_format == "md") {
                rendered = render_report_markdown(rep);
            } else {
                rendered = render_report_svg(rep);
            }
            if (report_out_path.empty()) {
                out << rendered;
            } else {
                try {
                    write_text_file(report_out_path, rendered);
                } catch (const IoError& e) {
                    err << e.what() << "\n";
                    return kIoError;
                }
                out << "written=" << report_out_path << "\n";
            }
            return kOk;
        }
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kIoError;
    }
    return kUserError;
}

} // namespace egress
