#pragma once

#include "egress/engine.hpp"

#include <span>
#include <string>
#include <vector>

namespace egress {

struct AuditResult {
    bool ok = true;
    std::vector<std::string> violations;
};

// Independent replay of an event log against the model's rules: legal mode
// transitions only, agent conservation, no kill beyond gamma or through a
// wall, no officer activity before entry time, FirstKill at most once, and
// nothing but evacuations and run starts after suppression. When `outcome`
// is given, its tallies must match the replayed final state.
AuditResult audit_event_log(const FloorLayout& layout, const SimConfig& cfg,
                            std::span<const TickEvent> events,
                            const RunOutcome* outcome = nullptr);

} // namespace egress
