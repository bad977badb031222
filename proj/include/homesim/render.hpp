#pragma once

#include <string>
#include <vector>

#include "homesim/episode.hpp"

namespace homesim {

struct RenderInput {
    SemanticMap map;
    std::vector<Cell> trajectory;
    AgentPose agent;
};

/// Replays a log to rebuild the agent's final semantic map and trajectory.
RenderInput reconstruct(const EpisodeLog& log);

/// Character-grid variant: (2W+1) x (2H+1) text raster with north up.
/// Cells show '?' unknown, '.' explored free, '#' blocked, '*' trajectory,
/// 'A' agent, or the lowercase initial of a sighted class; known wall and
/// bump edges draw as '|' and '-'.
std::string render_ascii(const RenderInput& in);

/// Plain portable graymap (P2), 8 pixels per cell, north up, byte-stable.
std::string render_pgm(const RenderInput& in);

}  // namespace homesim
