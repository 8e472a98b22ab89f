#pragma once

#include <string>
#include <vector>

#include "tilesync/levels.hpp"
#include "tilesync/mesh_config.hpp"

namespace tilesync {

// Axis-aligned tile block, closed on the left/top: x in [x0, x0+w).
struct TileRect {
  int x0 = 0, y0 = 0, w = 0, h = 0;

  bool contains(TileId t) const {
    return t.x >= x0 && t.x < x0 + w && t.y >= y0 && t.y < y0 + h;
  }
  friend bool operator==(const TileRect&, const TileRect&) = default;
};

constexpr int kNoParent = -1;

// One synchronization-tree node. Children are tiles at level 1, nodes above.
// Positions are block centroids in half-tile-pitch units so they stay exact.
struct TreeNode {
  int id = 0;
  int level = 0;
  int parent = kNoParent;
  int child[2] = {0, 0};      // node ids, or tile linear indices at level 1
  TileRect rect;
  int pos_hx = 0, pos_hy = 0;  // centroid, half-pitch units
  int child_span = 1;          // link length to each child, tile pitches
  int child_regs[2] = {0, 0};  // pipeline registers on each child link
};

struct SyncTree {
  int k = 0;
  int depth = 0;                   // = 2*log2(k)
  std::vector<TreeNode> nodes;     // level-major: all level-1 nodes first
  std::vector<int> leaf_of_tile;   // tile linear index -> level-1 node id

  const TreeNode& node(int id) const { return nodes[static_cast<size_t>(id)]; }
  int root_id() const { return static_cast<int>(nodes.size()) - 1; }

  // Ids of the level-1 .. level-`level` nodes on the path from any tile of
  // `tile`'s subtree up to its level-`level` ancestor.
  std::vector<int> ancestor_path(TileId tile, int level) const;

  // Sum of one-way pipeline registers on a root-of-level-`level` -> tile
  // path. Meaningful for symmetric placements (both child links equal).
  int path_pipeline_regs(int level) const;
};

struct SyncDomain {
  int root_node = 0;
  std::vector<TileId> members;  // row-major order
};

// Builds the pairing tree for cfg.k: level 1 joins horizontal neighbor
// tiles, each level above alternates vertical/horizontal merges, ending at a
// single root of level 2*log2(k). Deterministic; k**2 - 1 nodes.
SyncTree build_tree(const MeshConfig& cfg);

// Closed-form link span (tile pitches) of a level-`level` node's child links.
// Top two levels span k/4 pitches, halving every two levels down, floor 1.
int geometric_span(int level, int k);

// The unique ancestor of `tile` at `level` together with its member tiles.
SyncDomain domain_of(const SyncTree& tree, TileId tile, int level);

// Fills per-link pipeline register counts. Geometric mode inserts span-1
// registers per link so no segment exceeds one tile pitch; explicit mode
// copies cfg.explicit_regs and requires every link to be present.
SyncTree place_pipeline_regs(SyncTree tree, const MeshConfig& cfg);

// One node per line: id, level, parent, children, position, link span,
// pipeline regs. Stable format, used by golden-file tests.
std::string dump_tree(const SyncTree& tree);

}  // namespace tilesync
