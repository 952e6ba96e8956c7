#include "egress/experiment.hpp"

#include "egress/layout.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace egress {

void MatrixSpec::validate() const {
    if (layout_paths.empty()) throw std::invalid_argument("matrix needs at least one layout");
    if (student_counts.empty()) throw std::invalid_argument("matrix needs student counts");
    if (seeds_per_cell < 1) throw std::invalid_argument("seeds_per_cell must be >= 1");
    for (int c : student_counts) {
        if (c <= 0) throw std::invalid_argument("student counts must be positive");
    }
    for (int r : runtimes_s) {
        if (r < 0) throw std::invalid_argument("runtimes must be non-negative");
    }
    params.validate();
}

MatrixSpec paper_preset(const std::string& maps_dir) {
    MatrixSpec spec;
    spec.layout_paths = {maps_dir + "/structure1.map", maps_dir + "/gyte_floor1.map",
                         maps_dir + "/sulb_floor3.map"};
    spec.student_counts = {50, 100, 150, 200};
    spec.runtimes_s = {360, 420, 480, 540};
    spec.seeds_per_cell = 100;
    spec.base_seed = 0x45475245535331ULL;
    return spec;
}

SpecParseError::SpecParseError(int line_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const int value = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return value;
    } catch (const std::exception&) {
        throw SpecParseError(line, "expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const std::uint64_t value = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return value;
    } catch (const std::exception&) {
        throw SpecParseError(line, "expected an unsigned integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return value;
    } catch (const std::exception&) {
        throw SpecParseError(line, "expected a number, got '" + v + "'");
    }
}

} // namespace

MatrixSpec parse_matrix_spec(const std::string& text) {
    MatrixSpec spec;
    spec.seeds_per_cell = 100;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool saw_layouts = false, saw_students = false, saw_runtimes = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == ';') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw SpecParseError(line_no, "expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw SpecParseError(line_no, "empty key");

        if (key == "layouts") {
            spec.layout_paths = split_list(value);
            saw_layouts = true;
        } else if (key == "students") {
            spec.student_counts.clear();
            for (const auto& v : split_list(value)) {
                spec.student_counts.push_back(parse_int(v, line_no));
            }
            saw_students = true;
        } else if (key == "runtimes") {
            spec.runtimes_s.clear();
            for (const auto& v : split_list(value)) {
                spec.runtimes_s.push_back(parse_int(v, line_no));
            }
            saw_runtimes = true;
        } else if (key == "seeds") {
            spec.seeds_per_cell = parse_int(value, line_no);
        } else if (key == "base_seed") {
            spec.base_seed = parse_u64(value, line_no);
        } else if (key == "tick") {
            spec.tick_s = parse_int(value, line_no);
        } else if (key == "officer_entry") {
            spec.officer_entry_s = parse_int(value, line_no);
        } else if (key == "student_speed") {
            spec.student_speed = parse_int(value, line_no);
        } else if (key == "shooter_speed") {
            spec.shooter_speed = parse_int(value, line_no);
        } else if (key == "officer_speed") {
            spec.officer_speed = parse_int(value, line_no);
        } else if (key == "alpha") {
            spec.params.alpha = parse_int(value, line_no);
        } else if (key == "beta") {
            spec.params.beta = parse_int(value, line_no);
        } else if (key == "gamma") {
            spec.params.gamma = parse_int(value, line_no);
        } else if (key == "officer_gamma") {
            spec.params.officer_gamma = parse_int(value, line_no);
        } else if (key == "sigma") {
            spec.params.sigma = parse_int(value, line_no);
        } else if (key == "epsilon") {
            spec.params.epsilon = parse_double(value, line_no);
        } else {
            throw SpecParseError(line_no, "unknown key '" + key + "'");
        }
    }
    if (!saw_layouts) throw SpecParseError(line_no, "missing 'layouts'");
    if (!saw_students) throw SpecParseError(line_no, "missing 'students'");
    if (!saw_runtimes) throw SpecParseError(line_no, "missing 'runtimes'");
    spec.validate();
    return spec;
}

std::uint64_t derive_placement_seed(std::uint64_t base_seed, int layout_index,
                                    int count_index, int seed_index) {
    const std::uint64_t key = (std::uint64_t(std::uint16_t(layout_index)) << 48) |
                              (std::uint64_t(std::uint16_t(count_index)) << 32) |
                              std::uint64_t(std::uint32_t(seed_index));
    return splitmix64(base_seed + splitmix64(key));
}

std::uint64_t derive_run_seed(std::uint64_t placement_seed) {
    return splitmix64(placement_seed ^ 0x5851F42D4C957F2DULL);
}

namespace {

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / double(xs.size());
}

double sd_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += (x - mean) * (x - mean);
    return std::sqrt(sum / double(xs.size()));
}

} // namespace

CellResult run_cell(const FloorLayout& layout, const std::string& layout_name,
                    int student_count, int runtime_s,
                    const std::vector<std::uint64_t>& placement_seeds,
                    const MatrixSpec& knobs) {
    CellResult cell;
    cell.layout = layout_name;
    cell.student_count = student_count;
    cell.runtime_s = runtime_s;
    cell.seeds = int(placement_seeds.size());
    cell.per_seed.reserve(placement_seeds.size());

    SimConfig cfg;
    cfg.layout_name = layout_name;
    cfg.student_count = student_count;
    cfg.runtime_s = runtime_s;
    cfg.tick_s = knobs.tick_s;
    cfg.officer_entry_s = knobs.officer_entry_s;
    cfg.student_speed = knobs.student_speed;
    cfg.shooter_speed = knobs.shooter_speed;
    cfg.officer_speed = knobs.officer_speed;
    cfg.params = knobs.params;

    std::vector<double> off_cas, off_evac, on_cas, on_evac;
    off_cas.reserve(placement_seeds.size());
    off_evac.reserve(placement_seeds.size());
    on_cas.reserve(placement_seeds.size());
    on_evac.reserve(placement_seeds.size());

    for (const std::uint64_t ps : placement_seeds) {
        cfg.placement_seed = ps;
        cfg.seed = derive_run_seed(ps);

        cfg.detector_enabled = false;
        Simulation off(layout, cfg);
        const RunOutcome off_out = off.run();

        cfg.detector_enabled = true;
        Simulation on(layout, cfg);
        const RunOutcome on_out = on.run();

        off_cas.push_back(off_out.casualty_pct);
        off_evac.push_back(off_out.evacuation_pct);
        on_cas.push_back(on_out.casualty_pct);
        on_evac.push_back(on_out.evacuation_pct);
        cell.per_seed.push_back({ps, off_out, on_out});
    }

    cell.off_casualty_pct = mean_of(off_cas);
    cell.off_evacuation_pct = mean_of(off_evac);
    cell.on_casualty_pct = mean_of(on_cas);
    cell.on_evacuation_pct = mean_of(on_evac);
    cell.off_casualty_sd = sd_of(off_cas, cell.off_casualty_pct);
    cell.off_evacuation_sd = sd_of(off_evac, cell.off_evacuation_pct);
    cell.on_casualty_sd = sd_of(on_cas, cell.on_casualty_pct);
    cell.on_evacuation_sd = sd_of(on_evac, cell.on_evacuation_pct);
    cell.casualty_change = cell.on_casualty_pct - cell.off_casualty_pct;
    cell.evacuation_change = cell.on_evacuation_pct - cell.off_evacuation_pct;
    return cell;
}

ExperimentReport run_matrix(const MatrixSpec& spec, int threads) {
    spec.validate();

    ExperimentReport report;
    report.spec = spec;
    report.fingerprint = config_fingerprint(spec);

    std::vector<FloorLayout> layouts;
    layouts.reserve(spec.layout_paths.size());
    for (const std::string& path : spec.layout_paths) {
        const std::string name = layout_name_from_path(path);
        layouts.push_back(parse_layout(read_text_file(path), name));
        report.layout_names.push_back(name);
    }

    struct CellJob {
        int layout_index;
        int count_index;
        int runtime_index;
    };
    std::vector<CellJob> jobs;
    for (int li = 0; li < int(layouts.size()); ++li) {
        for (int ci = 0; ci < int(spec.student_counts.size()); ++ci) {
            for (int ri = 0; ri < int(spec.runtimes_s.size()); ++ri) {
                jobs.push_back({li, ci, ri});
            }
        }
    }
    report.cells.resize(jobs.size());

    if (threads <= 0) {
        threads = int(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, int(jobs.empty() ? 1 : jobs.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size() || failed.load()) return;
            const CellJob job = jobs[j];
            try {
                std::vector<std::uint64_t> seeds(std::size_t(spec.seeds_per_cell));
                for (int s = 0; s < spec.seeds_per_cell; ++s) {
                    seeds[s] = derive_placement_seed(spec.base_seed, job.layout_index,
                                                     job.count_index, s);
                }
                report.cells[j] = run_cell(layouts[job.layout_index],
                                           report.layout_names[job.layout_index],
                                           spec.student_counts[job.count_index],
                                           spec.runtimes_s[job.runtime_index], seeds, spec);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure.empty()) failure = e.what();
                return;
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) {
        throw std::runtime_error("matrix run failed: " + failure);
    }
    return report;
}

DirectionSummary summarize_direction(const ExperimentReport& report) {
    DirectionSummary summary;
    double total_cas = 0.0, total_evac = 0.0;
    for (const std::string& name : report.layout_names) {
        LayoutDirection dir;
        dir.layout = name;
        int down = 0, up = 0;
        for (const CellResult& cell : report.cells) {
            if (cell.layout != name) continue;
            ++dir.cells;
            dir.mean_casualty_change += cell.casualty_change;
            dir.mean_evacuation_change += cell.evacuation_change;
            if (cell.casualty_change < 0.0) ++down;
            if (cell.evacuation_change > 0.0) ++up;
        }
        if (dir.cells > 0) {
            dir.mean_casualty_change /= dir.cells;
            dir.mean_evacuation_change /= dir.cells;
            dir.frac_casualty_down = double(down) / dir.cells;
            dir.frac_evacuation_up = double(up) / dir.cells;
        }
        summary.per_layout.push_back(dir);
    }
    for (const CellResult& cell : report.cells) {
        total_cas += cell.casualty_change;
        total_evac += cell.evacuation_change;
    }
    if (!report.cells.empty()) {
        summary.mean_casualty_change = total_cas / double(report.cells.size());
        summary.mean_evacuation_change = total_evac / double(report.cells.size());
    }
    return summary;
}

namespace {

void append_csv_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out += buf;
}

} // namespace

std::string write_results(const ExperimentReport& report) {
    std::string out = "schema=";
    out += kResultsSchema;
    out += '\n';
    out +=
        "layout,students,runtime_s,seeds,off_casualty_pct,off_evacuation_pct,"
        "on_casualty_pct,on_evacuation_pct,casualty_change_pp,evacuation_change_pp,"
        "off_casualty_sd,off_evacuation_sd,on_casualty_sd,on_evacuation_sd\n";
    for (const CellResult& c : report.cells) {
        out += c.layout;
        out += ',';
        out += std::to_string(c.student_count);
        out += ',';
        out += std::to_string(c.runtime_s);
        out += ',';
        out += std::to_string(c.seeds);
        const double values[] = {c.off_casualty_pct, c.off_evacuation_pct,
                                 c.on_casualty_pct,  c.on_evacuation_pct,
                                 c.casualty_change,  c.evacuation_change,
                                 c.off_casualty_sd,  c.off_evacuation_sd,
                                 c.on_casualty_sd,   c.on_evacuation_sd};
        for (const double v : values) {
            out += ',';
            append_csv_double(out, v);
        }
        out += '\n';
    }
    return out;
}

ExperimentReport parse_results(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("empty results file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != std::string("schema=") + kResultsSchema) {
        throw SchemaError("results schema mismatch: expected schema=" +
                          std::string(kResultsSchema));
    }
    if (!std::getline(in, line)) {
        throw SchemaError("results file missing header row");
    }

    ExperimentReport report;
    int line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_list(line);
        if (fields.size() != 14) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected 14 fields, got " +
                                     std::to_string(fields.size()));
        }
        CellResult c;
        c.layout = fields[0];
        c.student_count = parse_int(fields[1], line_no);
        c.runtime_s = parse_int(fields[2], line_no);
        c.seeds = parse_int(fields[3], line_no);
        c.off_casualty_pct = parse_double(fields[4], line_no);
        c.off_evacuation_pct = parse_double(fields[5], line_no);
        c.on_casualty_pct = parse_double(fields[6], line_no);
        c.on_evacuation_pct = parse_double(fields[7], line_no);
        c.casualty_change = parse_double(fields[8], line_no);
        c.evacuation_change = parse_double(fields[9], line_no);
        c.off_casualty_sd = parse_double(fields[10], line_no);
        c.off_evacuation_sd = parse_double(fields[11], line_no);
        c.on_casualty_sd = parse_double(fields[12], line_no);
        c.on_evacuation_sd = parse_double(fields[13], line_no);
        report.cells.push_back(std::move(c));
    }
    for (const CellResult& c : report.cells) {
        bool known = false;
        for (const std::string& n : report.layout_names) {
            if (n == c.layout) {
                known = true;
                break;
            }
        }
        if (!known) report.layout_names.push_back(c.layout);
    }
    return report;
}

std::uint64_t config_fingerprint(const MatrixSpec& spec) {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
    auto mix_str = [&](const std::string& s) {
        std::uint64_t f = 1469598103934665603ULL;
        for (const char c : s) {
            f = (f ^ std::uint8_t(c)) * 1099511628211ULL;
        }
        mix(f);
    };
    for (const auto& p : spec.layout_paths) mix_str(layout_name_from_path(p));
    for (const int c : spec.student_counts) mix(std::uint64_t(c));
    for (const int r : spec.runtimes_s) mix(std::uint64_t(r));
    mix(std::uint64_t(spec.seeds_per_cell));
    mix(spec.base_seed);
    mix(std::uint64_t(spec.tick_s));
    mix(std::uint64_t(spec.officer_entry_s));
    mix(std::uint64_t(spec.student_speed));
    mix(std::uint64_t(spec.shooter_speed));
    mix(std::uint64_t(spec.officer_speed));
    mix(std::uint64_t(spec.params.alpha));
    mix(std::uint64_t(spec.params.beta));
    mix(std::uint64_t(spec.params.gamma));
    mix(std::uint64_t(spec.params.officer_gamma));
    mix(std::uint64_t(spec.params.sigma));
    mix(std::bit_cast<std::uint64_t>(spec.params.epsilon));
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading file: " + path);
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open file for writing: " + path);
    }
    out << content;
    if (!out) {
        throw IoError("failed writing file: " + path);
    }
}

std::string layout_name_from_path(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = (slash == std::string::npos) ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) {
        name = name.substr(0, dot);
    }
    return name;
}

} // namespace egress
