#include "homesim/render.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace homesim {

RenderInput reconstruct(const EpisodeLog& log) {
    EpisodeArtifacts art;
    replay(log, &art);
    RenderInput in;
    in.map = std::move(art.final_map);
    in.trajectory = std::move(art.trajectory);
    in.agent = log.steps.empty() ? log.start_pose : log.steps.back().pose_after;
    return in;
}

namespace {

char class_glyph(const SemanticMap& map, Cell c) {
    for (const auto& [cls, grid] : map.class_counts) {  // std::map: first class wins, stable
        if (grid.empty()) continue;
        if (grid[map.index(c)] > 0 && !cls.empty())
            return static_cast<char>(std::tolower(static_cast<unsigned char>(cls[0])));
    }
    return 0;
}

}  // namespace

std::string render_ascii(const RenderInput& in) {
    const SemanticMap& m = in.map;
    int W = m.width, H = m.height;
    int cols = 2 * W + 1, rows = 2 * H + 1;
    std::vector<std::string> grid(static_cast<size_t>(rows), std::string(static_cast<size_t>(cols), ' '));

    std::set<Cell> on_path(in.trajectory.begin(), in.trajectory.end());

    // row r in the raster: r = 2*(H-1-y)+1 for cell row y (north on top)
    auto cell_row = [&](int y) { return 2 * (H - 1 - y) + 1; };
    auto cell_col = [&](int x) { return 2 * x + 1; };

    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            Cell c{x, y};
            char ch = '?';
            switch (m.at(c)) {
                case CellKnowledge::Unknown: ch = '?'; break;
                case CellKnowledge::Free: ch = '.'; break;
                case CellKnowledge::Blocked: ch = '#'; break;
            }
            if (char g = class_glyph(m, c)) ch = g;
            if (on_path.count(c)) ch = '*';
            if (in.agent.cell == c) ch = 'A';
            grid[static_cast<size_t>(cell_row(y))][static_cast<size_t>(cell_col(x))] = ch;
        }
    }

    auto draw_edge = [&](const GridEdge& e) {
        auto [a, b] = e.cells();
        if (e.vertical) {
            // edge east of a: column between a and b
            int r = cell_row(a.y), cc = cell_col(a.x) + 1;
            if (r >= 0 && r < rows && cc >= 0 && cc < cols)
                grid[static_cast<size_t>(r)][static_cast<size_t>(cc)] = '|';
        } else {
            // edge north of a: row between a (below) and b (above)
            int r = cell_row(a.y) - 1, cc = cell_col(a.x);
            if (r >= 0 && r < rows && cc >= 0 && cc < cols)
                grid[static_cast<size_t>(r)][static_cast<size_t>(cc)] = '-';
        }
    };
    for (const auto& e : m.wall_edges) draw_edge(e);
    for (const auto& e : m.blocked_edges) draw_edge(e);

    std::ostringstream os;
    for (const auto& row : grid) os << row << "\n";
    return os.str();
}

std::string render_pgm(const RenderInput& in) {
    const SemanticMap& m = in.map;
    constexpr int S = 8;
    int W = m.width * S + 1, H = m.height * S + 1;
    std::vector<uint8_t> px(static_cast<size_t>(W) * H, 120);

    auto put = [&](int ix, int iy, uint8_t v) {
        if (ix >= 0 && iy >= 0 && ix < W && iy < H) px[static_cast<size_t>(iy) * W + ix] = v;
    };
    // pixel block origin of cell (x,y); image row 0 is the northmost cell row
    auto block = [&](Cell c) {
        return std::pair<int, int>{c.x * S + 1, (m.height - 1 - c.y) * S + 1};
    };

    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            Cell c{x, y};
            uint8_t v = 120;
            if (m.at(c) == CellKnowledge::Free) v = 235;
            if (m.at(c) == CellKnowledge::Blocked) v = 48;
            auto [bx, by] = block(c);
            for (int dy = 0; dy < S - 1; ++dy)
                for (int dx = 0; dx < S - 1; ++dx) put(bx + dx, by + dy, v);
        }
    }

    for (const Cell& c : in.trajectory) {
        if (!m.in_bounds(c)) continue;
        auto [bx, by] = block(c);
        for (int dy = 2; dy < 5; ++dy)
            for (int dx = 2; dx < 5; ++dx) put(bx + dx, by + dy, 150);
    }
    if (m.in_bounds(in.agent.cell)) {
        auto [bx, by] = block(in.agent.cell);
        for (int dy = 1; dy < 6; ++dy)
            for (int dx = 1; dx < 6; ++dx) put(bx + dx, by + dy, 0);
    }

    auto draw_edge = [&](const GridEdge& e) {
        auto [a, b] = e.cells();
        if (e.vertical) {
            int ix = (a.x + 1) * S;
            int by = (m.height - 1 - a.y) * S;
            for (int dy = 0; dy <= S; ++dy) put(ix, by + dy, 0);
        } else {
            int iy = (m.height - 1 - a.y) * S;  // boundary above cell a
            int bx = a.x * S;
            for (int dx = 0; dx <= S; ++dx) put(bx + dx, iy, 0);
        }
    };
    for (const auto& e : m.wall_edges) draw_edge(e);
    for (const auto& e : m.blocked_edges) draw_edge(e);

    std::ostringstream os;
    os << "P2\n" << W << " " << H << "\n255\n";
    for (int iy = 0; iy < H; ++iy) {
        for (int ix = 0; ix < W; ++ix) {
            if (ix) os << ' ';
            os << static_cast<int>(px[static_cast<size_t>(iy) * W + ix]);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace homesim
