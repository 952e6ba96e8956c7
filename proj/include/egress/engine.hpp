#pragma once

#include "egress/behavior.hpp"
#include "egress/layout.hpp"
#include "egress/pathfind.hpp"
#include "egress/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace egress {

// Everything a run depends on. Two runs with equal configs produce identical
// event logs byte for byte.
struct SimConfig {
    std::string layout_name;
    int student_count = 100;
    int runtime_s = 360;
    int tick_s = 1;
    bool detector_enabled = false;
    int officer_entry_s = 300;
    int student_speed = 1;
    int shooter_speed = 1;
    int officer_speed = 2;
    BehaviorParams params;
    std::uint64_t seed = 1;
    std::uint64_t placement_seed = 1;

    // Throws std::invalid_argument on nonsense values.
    void validate() const;
};

enum class StudentMode { Unaware, Running, Hiding, Evacuated, Casualty };
enum class ShooterMode { Active, Suppressed };
enum class OfficerMode { Outside, Patrolling };

struct StudentAgent {
    int id = 0;
    Cell cell{};
    StudentMode mode = StudentMode::Unaware;
    int target_exit = -1;

    friend bool operator==(const StudentAgent&, const StudentAgent&) = default;
};

struct ShooterAgent {
    Cell cell{};
    ShooterMode mode = ShooterMode::Active;
    int patrol_cursor = 0; // index into hallway cells for the no-targets sweep

    friend bool operator==(const ShooterAgent&, const ShooterAgent&) = default;
};

struct OfficerAgent {
    Cell cell{};
    OfficerMode mode = OfficerMode::Outside;

    friend bool operator==(const OfficerAgent&, const OfficerAgent&) = default;
};

enum class EventKind {
    ShotFired,
    FirstKill,
    Kill,
    HideStart,
    RunStart,
    Evacuated,
    OfficerEntered,
    Suppressed,
};

const char* to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(const std::string& name);

// One timestamped state change, appended in phase order within a tick.
struct TickEvent {
    int time_s = 0;
    EventKind kind = EventKind::ShotFired;
    int subject = 0;
    Cell where{};

    friend bool operator==(const TickEvent&, const TickEvent&) = default;
};

// Line-oriented log form: "time_s,kind,subject_id,x,y".
std::string serialize_events(std::span<const TickEvent> events);
std::vector<TickEvent> parse_events(const std::string& text);

struct LayoutTooSmall : std::runtime_error {
    explicit LayoutTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct WorldState {
    std::vector<StudentAgent> students;
    ShooterAgent shooter;
    OfficerAgent officer;
    int clock_s = 0;
    ShotContext ctx;
    std::vector<TickEvent> events;
    std::vector<int> officer_visited; // last visit tick per cell, -1 = never
    DetRng rng{0};

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

// Students are ids 0..N-1; the two singleton agents get the next ids.
inline int shooter_id(const SimConfig& cfg) { return cfg.student_count; }
inline int officer_id(const SimConfig& cfg) { return cfg.student_count + 1; }

// Initial world: students uniformly on room floor cells (shared cells fine),
// shooter on a uniformly drawn hallway cell, officer outside. Identical
// placement seeds give bit-identical placements; this is the pairing
// mechanism for detector-on/off comparisons.
WorldState place_agents(const FloorLayout& layout, const SimConfig& cfg);

struct RunOutcome {
    int student_count = 0;
    int casualties = 0;
    int evacuated = 0;
    int hiding = 0;
    int still_inside = 0;
    bool suppressed = false;
    std::optional<int> suppression_time_s;
    double casualty_pct = 0.0;
    double evacuation_pct = 0.0;
};

RunOutcome tally(const WorldState& state, const SimConfig& cfg);

// Tick-based loop over one mutable world. Phase order inside a tick is
// shooter, then students in id order, then officer; all stochastic draws come
// from the single seeded stream in that order.
class Simulation {
public:
    Simulation(const FloorLayout& layout, SimConfig cfg);

    bool done() const { return state_.clock_s >= cfg_.runtime_s; }
    void step();
    RunOutcome run();

    const WorldState& state() const { return state_; }
    const SimConfig& config() const { return cfg_; }

private:
    // How a moving student picks its exit this tick: route around the
    // shooter's range (detector), re-pick the nearest exit (fresh Run
    // decision), or keep the exit already chosen (NoEffect continuation and
    // the post-suppression drain).
    enum class RouteMode { Avoiding, Nearest, Continue };

    void shooter_phase();
    void student_phase();
    void officer_phase();
    void advance_student(StudentAgent& s, RouteMode mode);
    void evacuate_by_officer(const std::vector<int>& ids);
    void on_suppression();
    const DistanceField* plain_route(Cell from, int* exit_id);

    const FloorLayout& layout_;
    SimConfig cfg_;
    WorldState state_;

    std::vector<DistanceField> exit_fields_; // one per exit, computed once
    FieldScratch shooter_fields_;
    FieldScratch move_fields_;
    FieldScratch masked_fields_;
    const DistanceField* masked_ = nullptr; // valid for the current tick only
    std::vector<TargetableStudent> targetable_;
    std::vector<InsideStudent> inside_;
};

struct RunResult {
    RunOutcome outcome;
    std::vector<TickEvent> events;
};

RunResult run_simulation(const FloorLayout& layout, const SimConfig& cfg);

} // namespace egress
