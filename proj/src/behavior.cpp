#include "egress/behavior.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace egress {

void BehaviorParams::validate() const {
    if (!(alpha > 0 && alpha < beta)) {
        throw std::invalid_argument("behavior params require 0 < alpha < beta");
    }
    if (gamma <= 0 || officer_gamma <= 0 || sigma <= 0) {
        throw std::invalid_argument("behavior ranges must be positive");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
}

int heaviside(double x) {
    return x >= 0.0 ? 1 : 0;
}

double kill_probability(double d, double gamma) {
    return std::max(0.0, 1.0 - d / gamma);
}

StudentAction student_decide_no_detector(Cell student, const ShotContext& ctx,
                                         const BehaviorParams& p) {
    if (!ctx.first_shot_fired) {
        return StudentAction::NoEffect;
    }
    const int dist_fk = manhattan(student, ctx.hide_reference());
    const int dist_sh = manhattan(student, ctx.shooter);
    if (heaviside(p.alpha - dist_fk)) {
        return StudentAction::Hide;
    }
    if (heaviside(dist_sh - p.alpha) && heaviside(p.beta - dist_sh)) {
        return StudentAction::Run;
    }
    return StudentAction::NoEffect;
}

StudentAction student_decide_detector(Cell student, const ShotContext& ctx,
                                      const BehaviorParams& p) {
    if (!ctx.first_shot_fired) {
        return StudentAction::NoEffect;
    }
    const int dist = manhattan(student, ctx.hide_reference());
    if (heaviside(p.alpha - dist)) {
        return StudentAction::Hide;
    }
    // dist > alpha here, so the run gate is always open.
    return StudentAction::Run;
}

ShooterAction shooter_decide(Cell shooter, std::span<const TargetableStudent> students,
                             const FloorLayout& layout, const BehaviorParams& p,
                             DetRng& rng, FieldScratch* fields) {
    FieldScratch local;
    if (!fields) {
        local.attach(layout);
        fields = &local;
    }
    const DistanceField& field = fields->to_target(shooter);

    int best_id = -1;
    int best_cost = std::numeric_limits<int>::max();
    Cell best_cell{};
    for (const TargetableStudent& s : students) {
        if (manhattan(shooter, s.cell) > p.gamma) continue;
        if (!line_of_sight(layout, shooter, s.cell)) continue;
        const int cost = field.distance(s.cell);
        if (cost < 0) continue;
        if (cost < best_cost || (cost == best_cost && s.id < best_id)) {
            best_cost = cost;
            best_id = s.id;
            best_cell = s.cell;
        }
    }
    if (best_id >= 0) {
        ShooterAction act;
        act.kind = ShooterAction::Kind::Kill;
        act.victim = best_id;
        act.probability = kill_probability(manhattan(shooter, best_cell), p.gamma);
        act.success = rng.unit() < act.probability;
        return act;
    }

    best_id = -1;
    best_cost = std::numeric_limits<int>::max();
    for (const TargetableStudent& s : students) {
        const int cost = field.distance(s.cell);
        if (cost < 0) continue;
        if (cost < best_cost || (cost == best_cost && s.id < best_id)) {
            best_cost = cost;
            best_id = s.id;
            best_cell = s.cell;
        }
    }
    ShooterAction act;
    act.kind = ShooterAction::Kind::Move;
    if (best_id >= 0) {
        act.move_target = best_cell;
    }
    return act;
}

namespace {

bool patrol_friendly(const CellKind& c) {
    return c.hallway() || c.type == CellType::Door || c.type == CellType::Exit;
}

Cell patrol_step(const OfficerView& officer, const FloorLayout& layout,
                 const PatrolContext& ctx) {
    // Detector bias: head for the most recent shot fix.
    if (ctx.detector_enabled && ctx.last_shot && !(*ctx.last_shot == officer.cell)) {
        FieldScratch local;
        FieldScratch* fields = ctx.fields;
        if (!fields) {
            local.attach(layout);
            fields = &local;
        }
        const DistanceField& field = fields->to_target(*ctx.last_shot);
        if (field.distance(officer.cell) > 0) {
            return descend_step(layout, field, officer.cell);
        }
    }

    // Sweep: rank walkable neighbors by (hallway first, never visited first,
    // least recently visited); the up/right/down/left order breaks ties.
    Cell best = officer.cell;
    long best_key = std::numeric_limits<long>::max();
    for (const Cell d : kNeighborOrder) {
        const Cell n{officer.cell.x + d.x, officer.cell.y + d.y};
        if (!layout.in_bounds(n) || !layout.at(n).walkable()) continue;
        const int last = ctx.visited ? (*ctx.visited)[layout.index(n)] : -1;
        long key = (last < 0) ? 0 : 1L + last;
        if (!patrol_friendly(layout.at(n))) {
            key += 1L << 40; // room cells only when no hallway option exists
        }
        if (key < best_key) {
            best_key = key;
            best = n;
        }
    }
    return best;
}

} // namespace

OfficerAction officer_decide(const OfficerView& officer, std::optional<Cell> active_shooter,
                             std::span<const InsideStudent> students,
                             const FloorLayout& layout, int elapsed_s,
                             const BehaviorParams& p, int entry_time_s,
                             const PatrolContext& patrol) {
    OfficerAction act;
    if (!officer.entered) {
        act.kind = (elapsed_s < entry_time_s) ? OfficerAction::Kind::Wait
                                              : OfficerAction::Kind::Enter;
        return act;
    }

    for (const InsideStudent& s : students) {
        if (manhattan(officer.cell, s.cell) <= p.sigma) {
            act.evacuate.push_back(s.id);
        }
    }

    if (active_shooter && manhattan(officer.cell, *active_shooter) <= p.officer_gamma &&
        line_of_sight(layout, officer.cell, *active_shooter)) {
        act.kind = OfficerAction::Kind::Suppress;
        return act;
    }
    if (!act.evacuate.empty()) {
        act.kind = OfficerAction::Kind::Evacuate;
        return act;
    }
    act.kind = OfficerAction::Kind::Patrol;
    act.next = patrol_step(officer, layout, patrol);
    return act;
}

double shooter_objective(std::span<const KillRecord> kills, double t, double d, double gamma) {
    double value = 0.0;
    for (const KillRecord& k : kills) {
        if (k.success) {
            value += kill_probability(k.distance, gamma);
        }
    }
    const double effort = t + d;
    return value - effort / (effort + 1.0);
}

double officer_objective(bool suppressed, int evacuated_count, double t_exposure,
                         double d_officer_shooter, const BehaviorParams& p) {
    return (suppressed ? 1.0 : 0.0) + evacuated_count -
           t_exposure / (d_officer_shooter + p.epsilon);
}

} // namespace egress
