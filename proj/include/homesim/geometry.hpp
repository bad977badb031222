#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace homesim {

struct Cell {
    int x = 0;
    int y = 0;
    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
    constexpr Cell operator+(const Cell& o) const { return {x + o.x, y + o.y}; }
    constexpr Cell operator-(const Cell& o) const { return {x - o.x, y - o.y}; }
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// y grows northward; renderers flip rows so north ends up on top.
enum class Direction : uint8_t { North, East, South, West };

constexpr Cell delta(Direction d) {
    switch (d) {
        case Direction::North: return {0, 1};
        case Direction::East: return {1, 0};
        case Direction::South: return {0, -1};
        case Direction::West: return {-1, 0};
    }
    return {0, 0};
}

constexpr Direction rotate_left(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 3) % 4);
}
constexpr Direction rotate_right(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 1) % 4);
}
constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

const char* to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

/// Direction of the unit step from a to an adjacent cell b.
std::optional<Direction> direction_between(Cell a, Cell b);

inline constexpr Direction kDirectionOrder[4] = {Direction::North, Direction::East,
                                                 Direction::South, Direction::West};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::sqrt(x * x + y * y); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
};

inline Vec2 rotate_deg(Vec2 v, double deg) {
    double rad = deg * M_PI / 180.0;
    double c = std::cos(rad), s = std::sin(rad);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 cell_center(Cell c) { return {c.x + 0.5, c.y + 0.5}; }
inline Cell cell_of(Vec2 p) {
    return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

/// Canonical undirected edge between two 4-adjacent cells. `low` holds the
/// lexicographically smaller cell; a vertical edge separates `low` from its
/// east neighbour, a horizontal one from its north neighbour.
struct GridEdge {
    Cell low;
    bool vertical = false;

    friend constexpr auto operator<=>(const GridEdge&, const GridEdge&) = default;

    static GridEdge between(Cell a, Cell b) {
        if (a.y == b.y && b.x == a.x + 1) return {a, true};
        if (a.y == b.y && a.x == b.x + 1) return {b, true};
        if (a.x == b.x && b.y == a.y + 1) return {a, false};
        if (a.x == b.x && a.y == b.y + 1) return {b, false};
        throw std::invalid_argument("GridEdge::between: cells are not 4-adjacent");
    }

    static GridEdge ahead(Cell c, Direction h) { return between(c, c + delta(h)); }

    std::pair<Cell, Cell> cells() const {
        return {low, vertical ? Cell{low.x + 1, low.y} : Cell{low.x, low.y + 1}};
    }
};

std::string to_string(const GridEdge& e);

}  // namespace homesim
