#include "egress/layout.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace egress {

namespace {

std::string syntax_message(int line, int column, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << what;
    return os.str();
}

bool room_glyph(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z' && c != 'E');
}

} // namespace

MapSyntaxError::MapSyntaxError(int line_, int column_, const std::string& what)
    : std::runtime_error(syntax_message(line_, column_, what)), line(line_), column(column_) {}

FloorLayout FloorLayout::from_cells(int width, int height, std::vector<CellKind> cells,
                                    std::string name) {
    FloorLayout out;
    out.width_ = width;
    out.height_ = height;
    out.name_ = std::move(name);
    out.cells_ = std::move(cells);

    int max_room = -1;
    int next_exit = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            CellKind& c = out.cells_[std::size_t(y) * width + x];
            if (c.type == CellType::Exit) {
                c.exit_id = std::int16_t(next_exit++);
                out.exits_.push_back({x, y});
            } else if (c.type == CellType::Floor) {
                if (c.room_id != kNoRoom) {
                    max_room = std::max(max_room, int(c.room_id));
                    out.room_cells_.push_back({x, y});
                } else {
                    out.hallway_cells_.push_back({x, y});
                }
            }
        }
    }
    out.rooms_.resize(std::size_t(max_room + 1));
    for (int id = 0; id <= max_room; ++id) {
        out.rooms_[id].id = id;
        out.rooms_[id].glyph = char('a' + id % 26);
    }
    for (Cell c : out.room_cells_) {
        out.rooms_[out.at(c).room_id].cells.push_back(c);
    }
    return out;
}

FloorLayout parse_layout(const std::string& source, std::string name) {
    std::istringstream in(source);
    std::string line;
    int line_no = 0;

    int width = -1;
    int height = -1;
    std::vector<std::pair<int, std::string>> rows; // (file line, text)

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty() && line[0] == ';') {
            continue;
        }
        if (width < 0) {
            std::size_t xpos = line.find('x');
            if (line.empty() || xpos == std::string::npos || xpos == 0 ||
                xpos + 1 == line.size()) {
                throw MapSyntaxError(line_no, 1, "expected dimension line 'WxH'");
            }
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (i == xpos) continue;
                if (!std::isdigit(static_cast<unsigned char>(line[i]))) {
                    throw MapSyntaxError(line_no, int(i) + 1,
                                         "expected dimension line 'WxH'");
                }
            }
            width = std::stoi(line.substr(0, xpos));
            height = std::stoi(line.substr(xpos + 1));
            if (width <= 0 || height <= 0) {
                throw MapSyntaxError(line_no, 1, "dimensions must be positive");
            }
            continue;
        }
        rows.emplace_back(line_no, line);
    }

    if (width < 0) {
        throw MapSyntaxError(std::max(line_no, 1), 1, "missing dimension line 'WxH'");
    }
    if (int(rows.size()) != height) {
        std::ostringstream os;
        os << "expected " << height << " map rows, found " << rows.size();
        throw MapSyntaxError(line_no, 1, os.str());
    }

    std::vector<CellKind> cells(std::size_t(width) * height);
    std::vector<char> glyphs(std::size_t(width) * height, '#');
    for (int y = 0; y < height; ++y) {
        const auto& [file_line, text] = rows[y];
        if (int(text.size()) != width) {
            std::ostringstream os;
            os << "row has " << text.size() << " cells, expected " << width;
            throw MapSyntaxError(file_line, int(std::min(text.size() + 1, std::size_t(width) + 1)),
                                 os.str());
        }
        for (int x = 0; x < width; ++x) {
            const char g = text[x];
            CellKind& c = cells[std::size_t(y) * width + x];
            glyphs[std::size_t(y) * width + x] = g;
            if (g == '#') {
                c = {CellType::Wall, kNoRoom, -1};
            } else if (g == '.') {
                c = {CellType::Floor, kNoRoom, -1};
            } else if (g == '+') {
                c = {CellType::Door, kNoRoom, -1};
            } else if (g == 'E') {
                c = {CellType::Exit, kNoRoom, -1};
            } else if (room_glyph(g)) {
                c = {CellType::Floor, 0, -1}; // room id assigned below
            } else {
                std::ostringstream os;
                os << "unknown glyph '" << g << "'";
                throw MapSyntaxError(file_line, x + 1, os.str());
            }
        }
    }

    // Room ids: flood fill over 4-connected regions of the same letter, in
    // scan order. Distinct contiguous regions are distinct rooms even when
    // they reuse a letter.
    std::vector<std::int16_t> room_of(cells.size(), kNoRoom);
    std::vector<char> room_letters;
    std::int16_t next_room = 0;
    std::deque<Cell> queue;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t idx = std::size_t(y) * width + x;
            if (!room_glyph(glyphs[idx]) || room_of[idx] != kNoRoom) {
                continue;
            }
            const char letter = glyphs[idx];
            const std::int16_t id = next_room++;
            room_letters.push_back(letter);
            room_of[idx] = id;
            queue.push_back({x, y});
            while (!queue.empty()) {
                const Cell c = queue.front();
                queue.pop_front();
                for (const Cell d : kNeighborOrder) {
                    const Cell n{c.x + d.x, c.y + d.y};
                    if (n.x < 0 || n.x >= width || n.y < 0 || n.y >= height) continue;
                    const std::size_t ni = std::size_t(n.y) * width + n.x;
                    if (glyphs[ni] == letter && room_of[ni] == kNoRoom) {
                        room_of[ni] = id;
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (room_of[i] != kNoRoom) {
            cells[i].room_id = room_of[i];
        }
    }

    FloorLayout layout = FloorLayout::from_cells(width, height, std::move(cells),
                                                 std::move(name));
    for (std::size_t r = 0; r < room_letters.size(); ++r) {
        layout.rooms_[r].glyph = room_letters[r];
    }

    // Structural validation.
    if (layout.exits().empty()) {
        throw MapValidationError("map has no exits");
    }
    if (layout.rooms().empty()) {
        throw MapValidationError("map has no rooms");
    }
    for (const Cell e : layout.exits()) {
        if (e.x != 0 && e.x != width - 1 && e.y != 0 && e.y != height - 1) {
            std::ostringstream os;
            os << "exit " << layout.at(e).exit_id << " at (" << e.x << "," << e.y
               << ") is not on the grid boundary";
            throw MapValidationError(os.str());
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (layout.at(x, y).type != CellType::Door) continue;
            int open = 0;
            for (const Cell d : kNeighborOrder) {
                const Cell n{x + d.x, y + d.y};
                if (layout.in_bounds(n) && layout.at(n).walkable()) ++open;
            }
            if (open < 2) {
                std::ostringstream os;
                os << "door at (" << x << "," << y << ") connects fewer than two open cells";
                throw MapValidationError(os.str());
            }
        }
    }

    // Reachability: BFS from all exits over walkable cells must reach every
    // room. Rooms are internally connected, so one reached cell suffices.
    std::vector<std::uint8_t> reached(layout.cells().size(), 0);
    for (const Cell e : layout.exits()) {
        reached[layout.index(e)] = 1;
        queue.push_back(e);
    }
    while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        for (const Cell d : kNeighborOrder) {
            const Cell n{c.x + d.x, c.y + d.y};
            if (!layout.in_bounds(n)) continue;
            const std::size_t ni = layout.index(n);
            if (!reached[ni] && layout.cells()[ni].walkable()) {
                reached[ni] = 1;
                queue.push_back(n);
            }
        }
    }
    for (const Room& room : layout.rooms()) {
        if (!reached[layout.index(room.cells.front())]) {
            std::ostringstream os;
            os << "room " << room.id << " (glyph '" << room.glyph
               << "') has no path to an exit";
            throw MapValidationError(os.str());
        }
    }

    return layout;
}

std::string serialize_layout(const FloorLayout& layout) {
    std::ostringstream os;
    os << layout.width() << 'x' << layout.height() << '\n';
    for (int y = 0; y < layout.height(); ++y) {
        for (int x = 0; x < layout.width(); ++x) {
            const CellKind& c = layout.at(x, y);
            switch (c.type) {
                case CellType::Wall: os << '#'; break;
                case CellType::Door: os << '+'; break;
                case CellType::Exit: os << 'E'; break;
                case CellType::Floor:
                    os << (c.room_id == kNoRoom ? '.' : layout.rooms()[c.room_id].glyph);
                    break;
            }
        }
        os << '\n';
    }
    return os.str();
}

LayoutStats layout_stats(const FloorLayout& layout) {
    LayoutStats stats;
    std::vector<std::uint8_t> seen;
    for (const CellKind& c : layout.cells()) {
        if (c.type == CellType::Exit) {
            ++stats.exit_count;
        } else if (c.type == CellType::Floor) {
            ++stats.floor_cell_count;
            if (c.room_id != kNoRoom) {
                if (std::size_t(c.room_id) >= seen.size()) {
                    seen.resize(c.room_id + 1, 0);
                }
                if (!seen[c.room_id]) {
                    seen[c.room_id] = 1;
                    ++stats.room_count;
                }
            }
        }
    }
    return stats;
}

std::vector<Cell> supercover_ray(Cell a, Cell b) {
    std::vector<Cell> out;
    int x = a.x;
    int y = a.y;
    int dx = b.x - a.x;
    int dy = b.y - a.y;
    out.push_back(a);
    const int xstep = (dx > 0) - (dx < 0);
    const int ystep = (dy > 0) - (dy < 0);
    dx = std::abs(dx);
    dy = std::abs(dy);
    const int ddx = 2 * dx;
    const int ddy = 2 * dy;

    // Integer supercover walk. When the segment crosses a grid line the cell
    // entered sideways is appended too; crossing exactly through a lattice
    // corner grazes both side cells, so both are appended.
    if (ddx >= ddy) {
        int error = dx;
        int errorprev = dx;
        for (int i = 0; i < dx; ++i) {
            x += xstep;
            error += ddy;
            if (error > ddx) {
                y += ystep;
                error -= ddx;
                if (error + errorprev < ddx) {
                    out.push_back({x, y - ystep});
                } else if (error + errorprev > ddx) {
                    out.push_back({x - xstep, y});
                } else {
                    out.push_back({x, y - ystep});
                    out.push_back({x - xstep, y});
                }
            }
            out.push_back({x, y});
            errorprev = error;
        }
    } else {
        int error = dy;
        int errorprev = dy;
        for (int i = 0; i < dy; ++i) {
            y += ystep;
            error += ddx;
            if (error > ddy) {
                x += xstep;
                error -= ddy;
                if (error + errorprev < ddy) {
                    out.push_back({x - xstep, y});
                } else if (error + errorprev > ddy) {
                    out.push_back({x, y - ystep});
                } else {
                    out.push_back({x - xstep, y});
                    out.push_back({x, y - ystep});
                }
            }
            out.push_back({x, y});
            errorprev = error;
        }
    }
    return out;
}

bool line_of_sight(const FloorLayout& layout, Cell a, Cell b) {
    for (const Cell c : supercover_ray(a, b)) {
        if (layout.at(c).wall()) {
            return false;
        }
    }
    return true;
}

} // namespace egress
