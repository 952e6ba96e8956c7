#include "egress/pathfind.hpp"

#include <algorithm>

namespace egress {

namespace {

void bfs(const FloorLayout& layout, std::vector<std::int32_t>& dist,
         std::vector<std::int16_t>& claim, std::vector<Cell>& queue) {
    // Plain FIFO sweep; seeds are already in `queue` with dist 0 and their
    // claims set. Seed order decides equal-distance claims.
    const int width = layout.width();
    std::size_t head = 0;
    while (head < queue.size()) {
        const Cell c = queue[head++];
        const std::int32_t next = dist[std::size_t(c.y) * width + c.x] + 1;
        const std::int16_t owner = claim[std::size_t(c.y) * width + c.x];
        for (const Cell d : kNeighborOrder) {
            const Cell n{c.x + d.x, c.y + d.y};
            if (!layout.in_bounds(n)) continue;
            const std::size_t ni = std::size_t(n.y) * width + n.x;
            if (dist[ni] != -1) continue;
            if (!layout.cells()[ni].walkable()) continue;
            dist[ni] = next;
            claim[ni] = owner;
            queue.push_back(n);
        }
    }
}

} // namespace

DistanceField DistanceField::to_target(const FloorLayout& layout, Cell target) {
    DistanceField f;
    f.width_ = layout.width();
    f.dist_.assign(layout.cells().size(), -1);
    f.claim_.assign(layout.cells().size(), -1);
    std::vector<Cell> queue;
    f.dist_[layout.index(target)] = 0;
    f.claim_[layout.index(target)] = 0;
    queue.push_back(target);
    bfs(layout, f.dist_, f.claim_, queue);
    return f;
}

DistanceField DistanceField::to_exits(const FloorLayout& layout) {
    DistanceField f;
    f.width_ = layout.width();
    f.dist_.assign(layout.cells().size(), -1);
    f.claim_.assign(layout.cells().size(), -1);
    std::vector<Cell> queue;
    for (std::size_t e = 0; e < layout.exits().size(); ++e) {
        const Cell c = layout.exits()[e];
        f.dist_[layout.index(c)] = 0;
        f.claim_[layout.index(c)] = std::int16_t(e);
        queue.push_back(c);
    }
    bfs(layout, f.dist_, f.claim_, queue);
    return f;
}

DistanceField DistanceField::to_exits_avoiding(const FloorLayout& layout, Cell danger,
                                               int radius) {
    DistanceField f;
    f.width_ = layout.width();
    f.dist_.assign(layout.cells().size(), -1);
    f.claim_.assign(layout.cells().size(), -1);
    // Blocked cells are pre-marked with -2 so the sweep skips them, then
    // reported as unreachable.
    for (int y = 0; y < layout.height(); ++y) {
        for (int x = 0; x < layout.width(); ++x) {
            if (manhattan({x, y}, danger) <= radius) {
                f.dist_[std::size_t(y) * layout.width() + x] = -2;
            }
        }
    }
    std::vector<Cell> queue;
    for (std::size_t e = 0; e < layout.exits().size(); ++e) {
        const Cell c = layout.exits()[e];
        if (f.dist_[layout.index(c)] == -2) continue;
        f.dist_[layout.index(c)] = 0;
        f.claim_[layout.index(c)] = std::int16_t(e);
        queue.push_back(c);
    }
    bfs(layout, f.dist_, f.claim_, queue);
    for (auto& d : f.dist_) {
        if (d == -2) d = -1;
    }
    return f;
}

Cell descend_step(const FloorLayout& layout, const DistanceField& field, Cell from) {
    const int here = field.distance(from);
    for (const Cell d : kNeighborOrder) {
        const Cell n{from.x + d.x, from.y + d.y};
        if (layout.in_bounds(n) && field.distance(n) == here - 1) {
            return n;
        }
    }
    return from;
}

Cell descend(const FloorLayout& layout, const DistanceField& field, Cell from, int steps) {
    Cell c = from;
    while (steps-- > 0 && field.distance(c) > 0) {
        c = descend_step(layout, field, c);
    }
    return c;
}

std::optional<Path> shortest_path(const FloorLayout& layout, Cell from, Cell to) {
    const DistanceField field = DistanceField::to_target(layout, to);
    if (!field.reachable(from)) {
        return std::nullopt;
    }
    Path path;
    path.cells.reserve(std::size_t(field.distance(from)) + 1);
    Cell c = from;
    path.cells.push_back(c);
    while (field.distance(c) > 0) {
        c = descend_step(layout, field, c);
        path.cells.push_back(c);
    }
    return path;
}

std::optional<ExitQuery> nearest_exit(const FloorLayout& layout, Cell from) {
    const DistanceField field = DistanceField::to_exits(layout);
    if (!field.reachable(from)) {
        return std::nullopt;
    }
    ExitQuery q;
    q.exit_id = field.claim(from);
    q.path.cells.reserve(std::size_t(field.distance(from)) + 1);
    Cell c = from;
    q.path.cells.push_back(c);
    while (field.distance(c) > 0) {
        c = descend_step(layout, field, c);
        q.path.cells.push_back(c);
    }
    return q;
}

std::optional<Cell> step_toward(const FloorLayout& layout, Cell from, Cell target, int speed) {
    const DistanceField field = DistanceField::to_target(layout, target);
    if (!field.reachable(from)) {
        return std::nullopt;
    }
    return descend(layout, field, from, speed);
}

void FieldScratch::attach(const FloorLayout& layout) {
    layout_ = &layout;
    field_.width_ = layout.width();
    field_.dist_.assign(layout.cells().size(), -1);
    field_.claim_.assign(layout.cells().size(), -1);
    queue_.reserve(layout.cells().size());
}

void FieldScratch::reset() {
    std::fill(field_.dist_.begin(), field_.dist_.end(), -1);
    std::fill(field_.claim_.begin(), field_.claim_.end(), -1);
    queue_.clear();
}

const DistanceField& FieldScratch::to_target(Cell target) {
    reset();
    field_.dist_[layout_->index(target)] = 0;
    field_.claim_[layout_->index(target)] = 0;
    queue_.push_back(target);
    bfs(*layout_, field_.dist_, field_.claim_, queue_);
    return field_;
}

const DistanceField& FieldScratch::to_exits_avoiding(Cell danger, int radius) {
    reset();
    const int width = layout_->width();
    for (int y = 0; y < layout_->height(); ++y) {
        const int dy = std::abs(y - danger.y);
        if (dy > radius) continue;
        const int span = radius - dy;
        const int x0 = std::max(0, danger.x - span);
        const int x1 = std::min(width - 1, danger.x + span);
        for (int x = x0; x <= x1; ++x) {
            field_.dist_[std::size_t(y) * width + x] = -2;
        }
    }
    for (std::size_t e = 0; e < layout_->exits().size(); ++e) {
        const Cell c = layout_->exits()[e];
        if (field_.dist_[layout_->index(c)] == -2) continue;
        field_.dist_[layout_->index(c)] = 0;
        field_.claim_[layout_->index(c)] = std::int16_t(e);
        queue_.push_back(c);
    }
    bfs(*layout_, field_.dist_, field_.claim_, queue_);
    for (auto& d : field_.dist_) {
        if (d == -2) d = -1;
    }
    return field_;
}

} // namespace egress
