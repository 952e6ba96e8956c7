#include "egress/audit.hpp"

#include <sstream>

namespace egress {

namespace {

struct Auditor {
    const FloorLayout& layout;
    const SimConfig& cfg;
    AuditResult result;

    void fail(int time_s, const std::string& what) {
        std::ostringstream os;
        os << "t=" << time_s << ": " << what;
        result.violations.push_back(os.str());
        result.ok = false;
    }
};

} // namespace

AuditResult audit_event_log(const FloorLayout& layout, const SimConfig& cfg,
                            std::span<const TickEvent> events, const RunOutcome* outcome) {
    Auditor a{layout, cfg, {}};

    std::vector<StudentMode> mode(std::size_t(cfg.student_count), StudentMode::Unaware);
    bool officer_entered = false;
    bool suppressed = false;
    int first_kills = 0;
    int kills_seen = 0;
    int prev_time = 0;
    const TickEvent* prev_event = nullptr;

    auto student_ok = [&](const TickEvent& e) {
        if (e.subject < 0 || e.subject >= cfg.student_count) {
            a.fail(e.time_s, std::string(to_string(e.kind)) + " subject is not a student id");
            return false;
        }
        return true;
    };

    for (const TickEvent& e : events) {
        if (e.time_s < prev_time) {
            a.fail(e.time_s, "timestamps go backwards");
        }
        prev_time = std::max(prev_time, e.time_s);
        if (e.time_s < 0 || (cfg.runtime_s > 0 && e.time_s >= cfg.runtime_s)) {
            a.fail(e.time_s, "event outside the run window");
        }
        if (e.time_s % cfg.tick_s != 0) {
            a.fail(e.time_s, "event off the tick grid");
        }
        if (!layout.in_bounds(e.where) || layout.at(e.where).wall()) {
            a.fail(e.time_s, std::string(to_string(e.kind)) + " located on a wall or out of bounds");
        }
        if (suppressed && e.kind != EventKind::Evacuated && e.kind != EventKind::RunStart) {
            a.fail(e.time_s, std::string(to_string(e.kind)) + " after suppression");
        }

        switch (e.kind) {
            case EventKind::ShotFired:
                if (e.subject != shooter_id(cfg)) {
                    a.fail(e.time_s, "ShotFired subject is not the shooter");
                }
                break;
            case EventKind::Kill: {
                if (!student_ok(e)) break;
                ++kills_seen;
                if (mode[e.subject] != StudentMode::Unaware &&
                    mode[e.subject] != StudentMode::Running) {
                    a.fail(e.time_s, "Kill against a hiding, evacuated or dead student");
                }
                // Each kill is resolved by the shot fired immediately before
                // it, which carries the firing position.
                if (!prev_event || prev_event->kind != EventKind::ShotFired ||
                    prev_event->time_s != e.time_s) {
                    a.fail(e.time_s, "Kill without a shot fired this tick");
                } else {
                    if (manhattan(prev_event->where, e.where) > cfg.params.gamma) {
                        a.fail(e.time_s, "Kill beyond gamma");
                    }
                    if (!line_of_sight(layout, prev_event->where, e.where)) {
                        a.fail(e.time_s, "Kill through a wall");
                    }
                }
                mode[e.subject] = StudentMode::Casualty;
                break;
            }
            case EventKind::FirstKill:
                if (!student_ok(e)) break;
                ++first_kills;
                if (first_kills > 1) {
                    a.fail(e.time_s, "FirstKill emitted more than once");
                }
                if (kills_seen != 1 || !prev_event || prev_event->kind != EventKind::Kill ||
                    prev_event->subject != e.subject || prev_event->time_s != e.time_s) {
                    a.fail(e.time_s, "FirstKill does not tag the first kill");
                }
                break;
            case EventKind::HideStart:
                if (!student_ok(e)) break;
                if (mode[e.subject] != StudentMode::Unaware &&
                    mode[e.subject] != StudentMode::Running) {
                    a.fail(e.time_s, "HideStart from an illegal mode");
                }
                mode[e.subject] = StudentMode::Hiding;
                break;
            case EventKind::RunStart:
                if (!student_ok(e)) break;
                if (mode[e.subject] == StudentMode::Hiding) {
                    if (!suppressed) {
                        a.fail(e.time_s, "hider started running before suppression");
                    }
                } else if (mode[e.subject] != StudentMode::Unaware) {
                    a.fail(e.time_s, "RunStart from an illegal mode");
                }
                mode[e.subject] = StudentMode::Running;
                break;
            case EventKind::Evacuated: {
                if (!student_ok(e)) break;
                if (mode[e.subject] == StudentMode::Evacuated ||
                    mode[e.subject] == StudentMode::Casualty) {
                    a.fail(e.time_s, "Evacuated from a terminal mode");
                }
                const bool at_exit = layout.at(e.where).type == CellType::Exit;
                if (at_exit && mode[e.subject] != StudentMode::Running) {
                    a.fail(e.time_s, "exit evacuation without running");
                }
                if (!at_exit && !officer_entered) {
                    a.fail(e.time_s, "officer evacuation before officer entry");
                }
                mode[e.subject] = StudentMode::Evacuated;
                break;
            }
            case EventKind::OfficerEntered:
                if (e.subject != officer_id(cfg)) {
                    a.fail(e.time_s, "OfficerEntered subject is not the officer");
                }
                if (officer_entered) {
                    a.fail(e.time_s, "officer entered twice");
                }
                if (e.time_s < cfg.officer_entry_s) {
                    a.fail(e.time_s, "officer entered before entry time");
                }
                officer_entered = true;
                break;
            case EventKind::Suppressed:
                if (e.subject != shooter_id(cfg)) {
                    a.fail(e.time_s, "Suppressed subject is not the shooter");
                }
                if (suppressed) {
                    a.fail(e.time_s, "shooter suppressed twice");
                }
                if (!officer_entered || e.time_s < cfg.officer_entry_s) {
                    a.fail(e.time_s, "suppression before officer entry");
                }
                suppressed = true;
                break;
        }
        prev_event = &e;
    }

    // Conservation: every student is in exactly one mode at all times by
    // construction of the replay, so the check reduces to the final census.
    if (outcome) {
        RunOutcome replayed;
        replayed.student_count = cfg.student_count;
        for (const StudentMode m : mode) {
            switch (m) {
                case StudentMode::Casualty: ++replayed.casualties; break;
                case StudentMode::Evacuated: ++replayed.evacuated; break;
                case StudentMode::Hiding: ++replayed.hiding; break;
                default: ++replayed.still_inside; break;
            }
        }
        if (replayed.casualties != outcome->casualties ||
            replayed.evacuated != outcome->evacuated || replayed.hiding != outcome->hiding ||
            replayed.still_inside != outcome->still_inside) {
            a.fail(prev_time, "outcome tallies do not match the event log");
        }
        if (outcome->casualties + outcome->evacuated + outcome->hiding +
                outcome->still_inside != cfg.student_count) {
            a.fail(prev_time, "outcome does not conserve the student count");
        }
        if (outcome->suppressed != suppressed) {
            a.fail(prev_time, "suppression flag does not match the event log");
        }
    }

    return a.result;
}

} // namespace egress
