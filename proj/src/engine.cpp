#include "egress/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace egress {

void SimConfig::validate() const {
    if (student_count <= 0) throw std::invalid_argument("student_count must be positive");
    if (runtime_s < 0) throw std::invalid_argument("runtime_s must be non-negative");
    if (tick_s <= 0) throw std::invalid_argument("tick_s must be positive");
    if (officer_entry_s < 0) throw std::invalid_argument("officer_entry_s must be non-negative");
    if (student_speed < 0 || shooter_speed < 0 || officer_speed < 0) {
        throw std::invalid_argument("speeds must be non-negative");
    }
    params.validate();
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::ShotFired: return "ShotFired";
        case EventKind::FirstKill: return "FirstKill";
        case EventKind::Kill: return "Kill";
        case EventKind::HideStart: return "HideStart";
        case EventKind::RunStart: return "RunStart";
        case EventKind::Evacuated: return "Evacuated";
        case EventKind::OfficerEntered: return "OfficerEntered";
        case EventKind::Suppressed: return "Suppressed";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(const std::string& name) {
    static constexpr EventKind kAll[] = {
        EventKind::ShotFired,  EventKind::FirstKill, EventKind::Kill,
        EventKind::HideStart,  EventKind::RunStart,  EventKind::Evacuated,
        EventKind::OfficerEntered, EventKind::Suppressed,
    };
    for (EventKind k : kAll) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

std::string serialize_events(std::span<const TickEvent> events) {
    std::string out;
    char line[96];
    for (const TickEvent& e : events) {
        std::snprintf(line, sizeof line, "%d,%s,%d,%d,%d\n", e.time_s, to_string(e.kind),
                      e.subject, e.where.x, e.where.y);
        out += line;
    }
    return out;
}

std::vector<TickEvent> parse_events(const std::string& text) {
    std::vector<TickEvent> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        TickEvent e;
        std::string kind;
        char c1, c2, c3;
        if (!(ls >> e.time_s >> c1) || c1 != ',' || !std::getline(ls, kind, ',') ||
            !(ls >> e.subject >> c2 >> e.where.x >> c3 >> e.where.y) || c2 != ',' ||
            c3 != ',') {
            throw std::runtime_error("bad event line " + std::to_string(line_no));
        }
        const auto k = parse_event_kind(kind);
        if (!k) throw std::runtime_error("unknown event kind on line " + std::to_string(line_no));
        e.kind = *k;
        out.push_back(e);
    }
    return out;
}

WorldState place_agents(const FloorLayout& layout, const SimConfig& cfg) {
    cfg.validate();
    const std::vector<Cell>& rooms = layout.room_cells();
    if (rooms.empty()) {
        throw LayoutTooSmall("layout has no room floor cells to place students on");
    }
    // Shooter starts in the hallways; a map without hallway cells falls back
    // to room floor.
    const std::vector<Cell>& lanes =
        layout.hallway_cells().empty() ? rooms : layout.hallway_cells();

    WorldState state;
    state.rng = DetRng(cfg.seed);
    DetRng placement(cfg.placement_seed);

    state.students.resize(std::size_t(cfg.student_count));
    for (int i = 0; i < cfg.student_count; ++i) {
        state.students[i].id = i;
        state.students[i].cell = rooms[placement.below(rooms.size())];
    }
    state.shooter.cell = lanes[placement.below(lanes.size())];
    state.ctx.shooter = state.shooter.cell;
    state.ctx.detector_enabled = cfg.detector_enabled;
    state.officer.cell = layout.exits().front();
    state.officer.mode = OfficerMode::Outside;
    state.officer_visited.assign(layout.cells().size(), -1);
    return state;
}

RunOutcome tally(const WorldState& state, const SimConfig& cfg) {
    RunOutcome out;
    out.student_count = cfg.student_count;
    for (const StudentAgent& s : state.students) {
        switch (s.mode) {
            case StudentMode::Casualty: ++out.casualties; break;
            case StudentMode::Evacuated: ++out.evacuated; break;
            case StudentMode::Hiding: ++out.hiding; break;
            case StudentMode::Unaware:
            case StudentMode::Running: ++out.still_inside; break;
        }
    }
    out.suppressed = state.shooter.mode == ShooterMode::Suppressed;
    for (const TickEvent& e : state.events) {
        if (e.kind == EventKind::Suppressed) {
            out.suppression_time_s = e.time_s;
            break;
        }
    }
    out.casualty_pct = 100.0 * out.casualties / cfg.student_count;
    out.evacuation_pct = 100.0 * out.evacuated / cfg.student_count;
    return out;
}

Simulation::Simulation(const FloorLayout& layout, SimConfig cfg)
    : layout_(layout), cfg_(std::move(cfg)), state_(place_agents(layout, cfg_)) {
    exit_fields_.reserve(layout_.exits().size());
    for (const Cell e : layout_.exits()) {
        exit_fields_.push_back(DistanceField::to_target(layout_, e));
    }
    shooter_fields_.attach(layout_);
    move_fields_.attach(layout_);
    masked_fields_.attach(layout_);
    targetable_.reserve(std::size_t(cfg_.student_count));
    inside_.reserve(std::size_t(cfg_.student_count));
}

// Nearest exit by path cost, ties to the lowest exit id. Returns null when no
// exit is reachable from `from`.
const DistanceField* Simulation::plain_route(Cell from, int* exit_id) {
    int best = std::numeric_limits<int>::max();
    const DistanceField* field = nullptr;
    for (std::size_t e = 0; e < exit_fields_.size(); ++e) {
        const int d = exit_fields_[e].distance(from);
        if (d >= 0 && d < best) {
            best = d;
            field = &exit_fields_[e];
            *exit_id = int(e);
        }
    }
    return field;
}

void Simulation::shooter_phase() {
    if (state_.shooter.mode != ShooterMode::Active) return;

    targetable_.clear();
    for (const StudentAgent& s : state_.students) {
        if (s.mode == StudentMode::Unaware || s.mode == StudentMode::Running) {
            targetable_.push_back({s.id, s.cell});
        }
    }

    const ShooterAction act = shooter_decide(state_.shooter.cell, targetable_, layout_,
                                             cfg_.params, state_.rng, &shooter_fields_);
    if (act.kind == ShooterAction::Kind::Kill) {
        state_.events.push_back({state_.clock_s, EventKind::ShotFired,
                                 shooter_id(cfg_), state_.shooter.cell});
        state_.ctx.first_shot_fired = true;
        state_.ctx.last_shot = state_.shooter.cell;
        if (act.success) {
            StudentAgent& victim = state_.students[act.victim];
            victim.mode = StudentMode::Casualty;
            state_.events.push_back({state_.clock_s, EventKind::Kill, victim.id, victim.cell});
            if (!state_.ctx.first_kill) {
                state_.ctx.first_kill = victim.cell;
                state_.events.push_back({state_.clock_s, EventKind::FirstKill, victim.id,
                                         victim.cell});
            }
        }
        return;
    }

    if (act.move_target) {
        const DistanceField& field = move_fields_.to_target(*act.move_target);
        if (field.reachable(state_.shooter.cell)) {
            state_.shooter.cell = descend(layout_, field, state_.shooter.cell,
                                          cfg_.shooter_speed);
        }
    } else {
        // No targetable student anywhere: sweep the hallway cells in scan
        // order, skipping unreachable stops.
        const std::vector<Cell>& lanes = layout_.hallway_cells();
        if (!lanes.empty()) {
            int cursor = state_.shooter.patrol_cursor % int(lanes.size());
            for (std::size_t tries = 0; tries < lanes.size(); ++tries) {
                const Cell stop = lanes[cursor];
                if (stop == state_.shooter.cell) {
                    cursor = (cursor + 1) % int(lanes.size());
                    continue;
                }
                const DistanceField& field = move_fields_.to_target(stop);
                if (!field.reachable(state_.shooter.cell)) {
                    cursor = (cursor + 1) % int(lanes.size());
                    continue;
                }
                state_.shooter.patrol_cursor = cursor;
                state_.shooter.cell = descend(layout_, field, state_.shooter.cell,
                                              cfg_.shooter_speed);
                break;
            }
        }
    }
    state_.ctx.shooter = state_.shooter.cell;
}

void Simulation::advance_student(StudentAgent& s, RouteMode mode) {
    const DistanceField* field = nullptr;
    int exit_id = s.target_exit;

    if (mode == RouteMode::Avoiding && masked_ && masked_->reachable(s.cell)) {
        field = masked_;
        exit_id = masked_->claim(s.cell);
    } else if (mode == RouteMode::Continue && s.target_exit >= 0 &&
               exit_fields_[s.target_exit].reachable(s.cell)) {
        field = &exit_fields_[s.target_exit];
    } else {
        field = plain_route(s.cell, &exit_id);
    }
    if (!field || !field->reachable(s.cell)) return;

    if (s.mode != StudentMode::Running) {
        s.mode = StudentMode::Running;
        state_.events.push_back({state_.clock_s, EventKind::RunStart, s.id, s.cell});
    }
    s.target_exit = exit_id;
    s.cell = descend(layout_, *field, s.cell, cfg_.student_speed);
    if (layout_.at(s.cell).type == CellType::Exit) {
        s.mode = StudentMode::Evacuated;
        state_.events.push_back({state_.clock_s, EventKind::Evacuated, s.id, s.cell});
    }
}

void Simulation::student_phase() {
    if (!state_.ctx.first_shot_fired) return;

    const bool shooter_active = state_.shooter.mode == ShooterMode::Active;
    // The avoidance mask follows the shooter's position as of this tick.
    masked_ = nullptr;
    if (shooter_active && cfg_.detector_enabled) {
        masked_ = &masked_fields_.to_exits_avoiding(state_.shooter.cell, cfg_.params.gamma);
    }

    for (StudentAgent& s : state_.students) {
        if (s.mode == StudentMode::Casualty || s.mode == StudentMode::Evacuated ||
            s.mode == StudentMode::Hiding) {
            continue;
        }
        if (!shooter_active) {
            // Post-suppression drain: runners keep heading for their exits,
            // unaware students never learned of the threat and stay put.
            if (s.mode == StudentMode::Running) {
                advance_student(s, RouteMode::Continue);
            }
            continue;
        }
        const StudentAction action =
            cfg_.detector_enabled ? student_decide_detector(s.cell, state_.ctx, cfg_.params)
                                  : student_decide_no_detector(s.cell, state_.ctx, cfg_.params);
        switch (action) {
            case StudentAction::Hide:
                s.mode = StudentMode::Hiding;
                state_.events.push_back({state_.clock_s, EventKind::HideStart, s.id, s.cell});
                break;
            case StudentAction::Run:
                advance_student(s, cfg_.detector_enabled ? RouteMode::Avoiding
                                                         : RouteMode::Nearest);
                break;
            case StudentAction::NoEffect:
                if (s.mode == StudentMode::Running) {
                    advance_student(s, RouteMode::Continue);
                }
                break;
        }
    }
}

void Simulation::evacuate_by_officer(const std::vector<int>& ids) {
    for (const int id : ids) {
        StudentAgent& s = state_.students[id];
        s.mode = StudentMode::Evacuated;
        state_.events.push_back({state_.clock_s, EventKind::Evacuated, s.id, s.cell});
    }
}

void Simulation::on_suppression() {
    // Hiders come out and head for the nearest exit once the threat is gone.
    for (StudentAgent& s : state_.students) {
        if (s.mode != StudentMode::Hiding) continue;
        s.mode = StudentMode::Running;
        state_.events.push_back({state_.clock_s, EventKind::RunStart, s.id, s.cell});
        int exit_id = -1;
        if (plain_route(s.cell, &exit_id)) {
            s.target_exit = exit_id;
        }
    }
}

void Simulation::officer_phase() {
    PatrolContext patrol;
    patrol.detector_enabled = cfg_.detector_enabled;
    patrol.last_shot = state_.ctx.last_shot;
    patrol.visited = &state_.officer_visited;
    patrol.fields = &move_fields_;

    for (int sub = 0; sub < std::max(1, cfg_.officer_speed); ++sub) {
        inside_.clear();
        for (const StudentAgent& s : state_.students) {
            if (s.mode == StudentMode::Unaware || s.mode == StudentMode::Running ||
                s.mode == StudentMode::Hiding) {
                inside_.push_back({s.id, s.cell});
            }
        }
        std::optional<Cell> shooter;
        if (state_.shooter.mode == ShooterMode::Active) {
            shooter = state_.shooter.cell;
        }
        const OfficerView view{state_.officer.cell,
                               state_.officer.mode == OfficerMode::Patrolling};
        const OfficerAction act =
            officer_decide(view, shooter, inside_, layout_, state_.clock_s, cfg_.params,
                           cfg_.officer_entry_s, patrol);

        switch (act.kind) {
            case OfficerAction::Kind::Wait:
                return;
            case OfficerAction::Kind::Enter:
                state_.officer.mode = OfficerMode::Patrolling;
                state_.officer.cell = layout_.exits().front();
                state_.officer_visited[layout_.index(state_.officer.cell)] = state_.clock_s;
                state_.events.push_back({state_.clock_s, EventKind::OfficerEntered,
                                         officer_id(cfg_), state_.officer.cell});
                return;
            case OfficerAction::Kind::Suppress:
                state_.shooter.mode = ShooterMode::Suppressed;
                state_.events.push_back({state_.clock_s, EventKind::Suppressed,
                                         shooter_id(cfg_), state_.shooter.cell});
                evacuate_by_officer(act.evacuate);
                on_suppression();
                return;
            case OfficerAction::Kind::Evacuate:
                evacuate_by_officer(act.evacuate);
                return;
            case OfficerAction::Kind::Patrol:
                if (cfg_.officer_speed == 0) return;
                if (act.next == state_.officer.cell) return; // boxed in
                state_.officer.cell = act.next;
                state_.officer_visited[layout_.index(act.next)] = state_.clock_s;
                break;
        }
    }
}

void Simulation::step() {
    if (done()) return;
    shooter_phase();
    student_phase();
    officer_phase();
    masked_ = nullptr;
    state_.clock_s += cfg_.tick_s;
}

RunOutcome Simulation::run() {
    while (!done()) {
        step();
    }
    return tally(state_, cfg_);
}

RunResult run_simulation(const FloorLayout& layout, const SimConfig& cfg) {
    Simulation sim(layout, cfg);
    RunResult result;
    result.outcome = sim.run();
    result.events = sim.state().events;
    return result;
}

} // namespace egress
