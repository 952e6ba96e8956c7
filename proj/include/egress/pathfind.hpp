#pragma once

#include "egress/layout.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace egress {

// Ordered list of 4-adjacent walkable cells; cost is the step count.
struct Path {
    std::vector<Cell> cells;
    int cost() const { return int(cells.size()) - 1; }
};

// Breadth-first distances over walkable cells toward a fixed target set.
// distance(c) is the minimum step count from c to the nearest target, or -1
// when unreachable. For multi-target fields, claim(c) identifies which target
// is nearest (ties go to the target seeded first, i.e. the lowest exit id).
class DistanceField {
public:
    static DistanceField to_target(const FloorLayout& layout, Cell target);
    static DistanceField to_exits(const FloorLayout& layout);
    // Like to_exits, but cells with manhattan(cell, danger) <= radius are
    // treated as blocked. Used to route around a known threat.
    static DistanceField to_exits_avoiding(const FloorLayout& layout, Cell danger, int radius);

    int distance(Cell c) const { return dist_[std::size_t(c.y) * width_ + c.x]; }
    int claim(Cell c) const { return claim_[std::size_t(c.y) * width_ + c.x]; }
    bool reachable(Cell c) const { return distance(c) >= 0; }

private:
    friend class FieldScratch;
    int width_ = 0;
    std::vector<std::int32_t> dist_;
    std::vector<std::int16_t> claim_;
};

// One canonical descent step: the first 4-neighbor, in up/right/down/left
// order, whose field distance is exactly one less than the current cell's.
Cell descend_step(const FloorLayout& layout, const DistanceField& field, Cell from);
// Up to `steps` descent steps (stops at a target cell).
Cell descend(const FloorLayout& layout, const DistanceField& field, Cell from, int steps);

// Minimum-step 4-connected path with the canonical tie-break above. Returns
// nullopt when the endpoints are disconnected.
std::optional<Path> shortest_path(const FloorLayout& layout, Cell from, Cell to);

struct ExitQuery {
    int exit_id = -1;
    Path path;
};

// Exit with minimum path cost from `from`; ties resolved to the lowest exit
// id. Returns nullopt when no exit is reachable.
std::optional<ExitQuery> nearest_exit(const FloorLayout& layout, Cell from);

// Advances min(speed, remaining cost) cells along the canonical shortest path
// from `from` to `target`. Returns nullopt when disconnected.
std::optional<Cell> step_toward(const FloorLayout& layout, Cell from, Cell target, int speed);

// Reusable BFS scratch for hot loops: computes the same fields as the
// DistanceField factories without reallocating.
class FieldScratch {
public:
    void attach(const FloorLayout& layout);
    const DistanceField& to_target(Cell target);
    const DistanceField& to_exits_avoiding(Cell danger, int radius);

private:
    void reset();
    void run(const FloorLayout& layout);
    const FloorLayout* layout_ = nullptr;
    DistanceField field_;
    std::vector<Cell> queue_;
};

} // namespace egress
