#pragma once

#include "egress/geometry.hpp"
#include "egress/layout.hpp"
#include "egress/pathfind.hpp"
#include "egress/rng.hpp"

#include <optional>
#include <span>
#include <vector>

namespace egress {

// Distance thresholds (in cells) shared by every decision function.
//   alpha          hiding range: a student this close to the threat hides
//   beta           hearing range: a shot is audible this far away
//   gamma          shooter's targeting range
//   officer_gamma  officer's visual range for suppression
//   sigma          officer's hearing range for evacuation
//   epsilon        small constant guarding division by zero in objectives
struct BehaviorParams {
    int alpha = 5;
    int beta = 20;
    int gamma = 10;
    int officer_gamma = 12;
    int sigma = 8;
    double epsilon = 1e-6;

    // Throws std::invalid_argument unless 0 < alpha < beta and all ranges
    // are positive.
    void validate() const;
};

// Unit step: 1 when x >= 0, else 0. Both threshold gates fire at the exact
// boundary; precedence between them is fixed by the decision functions.
int heaviside(double x);

// max(0, 1 - d/gamma): certain at point blank, zero at the range limit.
double kill_probability(double d, double gamma);

// What every student knows about the incident so far. The hide gate measures
// distance to the first kill; until a kill lands it falls back to the
// shooter's position (a missed first shot alerts without fixing a kill site).
struct ShotContext {
    bool first_shot_fired = false;
    bool detector_enabled = false;
    std::optional<Cell> first_kill;     // cfk, set by the first successful kill
    Cell shooter{};                     // cs, shooter's current cell
    std::optional<Cell> last_shot;      // most recent firing position

    Cell hide_reference() const { return first_kill ? *first_kill : shooter; }
};

enum class StudentAction { NoEffect, Hide, Run };

// Without a detection system a student hides when the first-kill site is
// within alpha, runs when the shooter is audible (between alpha and beta),
// and otherwise stays unaware. Hide takes precedence when both gates fire.
StudentAction student_decide_no_detector(Cell student, const ShotContext& ctx,
                                         const BehaviorParams& p);

// With a detection system every student is alerted by the first shot: hide
// within alpha of the kill site, run otherwise. Never NoEffect once alerted.
StudentAction student_decide_detector(Cell student, const ShotContext& ctx,
                                      const BehaviorParams& p);

struct TargetableStudent {
    int id = 0;
    Cell cell{};
};

struct ShooterAction {
    enum class Kind { Kill, Move };
    Kind kind = Kind::Move;
    // Kill fields.
    int victim = -1;
    double probability = 0.0;
    bool success = false;
    // Move field; nullopt means no student is reachable and the shooter
    // sweeps the hallways instead (the engine owns the sweep cursor).
    std::optional<Cell> move_target;
};

// Shoots the nearest visible student inside gamma (path-cost nearest, ties to
// the lowest id), else moves toward the nearest targetable student anywhere.
// `students` must already exclude hiding, evacuated and casualty students.
// The kill success draw is taken from `rng` here so the engine stays purely
// mechanical.
ShooterAction shooter_decide(Cell shooter, std::span<const TargetableStudent> students,
                             const FloorLayout& layout, const BehaviorParams& p,
                             DetRng& rng, FieldScratch* fields = nullptr);

struct InsideStudent {
    int id = 0;
    Cell cell{};
};

struct OfficerAction {
    enum class Kind { Wait, Enter, Patrol, Suppress, Evacuate };
    Kind kind = Kind::Wait;
    Cell next{};               // Patrol
    std::vector<int> evacuate; // Evacuate; also carried on a Suppress tick
                               // (evacuation within sigma happens alongside)
};

struct OfficerView {
    Cell cell{};
    bool entered = false;
};

// Patrol inputs the pure decision needs from the engine: the visit history
// (grid of last-visit ticks, -1 = never), and the detector's last shot fix.
struct PatrolContext {
    bool detector_enabled = false;
    std::optional<Cell> last_shot;
    const std::vector<int>* visited = nullptr;
    FieldScratch* fields = nullptr; // optional, reused when provided
};

// Waits until entry time, enters, then each tick: suppress the shooter when
// visible within officer_gamma (evacuating anyone within sigma on the same
// tick), evacuate students within sigma, otherwise patrol one cell along the
// hallways, preferring never-visited cells and falling back to the least
// recently visited, with a bias toward the last detected shot when the
// detector is on.
OfficerAction officer_decide(const OfficerView& officer, std::optional<Cell> active_shooter,
                             std::span<const InsideStudent> students,
                             const FloorLayout& layout, int elapsed_s,
                             const BehaviorParams& p, int entry_time_s,
                             const PatrolContext& patrol);

struct KillRecord {
    bool success = false;
    double distance = 0.0;
};

// Audit-only value of the shooter's objective: sum of successful kills
// weighted by kill_probability at their distance, minus a (t + d) penalty
// normalized to [0, 1). The live policy is the greedy rule in shooter_decide.
double shooter_objective(std::span<const KillRecord> kills, double t, double d, double gamma);

// Audit-only value of the officer's objective: suppression plus evacuations
// minus exposure time over distance (epsilon-guarded).
double officer_objective(bool suppressed, int evacuated_count, double t_exposure,
                         double d_officer_shooter, const BehaviorParams& p);

} // namespace egress
