#include "tilesync/tree.hpp"

#include <cassert>
#include <cstdlib>
#include <sstream>

#include "tilesync/errors.hpp"

namespace tilesync {

namespace {

// Blocks being merged while climbing one level, id < 0 encodes a tile
// (id = -(tile_index + 1)) so level-1 children need no special node type.
struct Block {
  int id = 0;
  TileRect rect;
  int hx = 0, hy = 0;
};

}  // namespace

SyncTree build_tree(const MeshConfig& cfg) {
  validate(cfg);
  const int k = cfg.k;

  SyncTree tree;
  tree.k = k;
  tree.depth = level_count(k);
  tree.nodes.reserve(static_cast<size_t>(k) * k - 1);
  tree.leaf_of_tile.assign(static_cast<size_t>(k) * k, kNoParent);

  // Level-0 "blocks" are the tiles themselves, centered on the tile grid.
  int grid_w = k, grid_h = k;
  std::vector<Block> blocks(static_cast<size_t>(k) * k);
  for (int y = 0; y < k; ++y) {
    for (int x = 0; x < k; ++x) {
      blocks[static_cast<size_t>(y) * k + x] =
          Block{-(y * k + x + 1), TileRect{x, y, 1, 1}, 2 * x, 2 * y};
    }
  }

  for (int level = 1; level <= tree.depth; ++level) {
    const bool horizontal = (level % 2 == 1);
    const int next_w = horizontal ? grid_w / 2 : grid_w;
    const int next_h = horizontal ? grid_h : grid_h / 2;
    std::vector<Block> merged(static_cast<size_t>(next_w) * next_h);

    for (int by = 0; by < next_h; ++by) {
      for (int bx = 0; bx < next_w; ++bx) {
        const Block& a = horizontal ? blocks[static_cast<size_t>(by) * grid_w + 2 * bx]
                                    : blocks[static_cast<size_t>(2 * by) * grid_w + bx];
        const Block& b = horizontal
                             ? blocks[static_cast<size_t>(by) * grid_w + 2 * bx + 1]
                             : blocks[static_cast<size_t>(2 * by + 1) * grid_w + bx];

        TreeNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.level = level;
        node.rect = TileRect{a.rect.x0, a.rect.y0,
                             horizontal ? a.rect.w * 2 : a.rect.w,
                             horizontal ? a.rect.h : a.rect.h * 2};
        node.pos_hx = (a.hx + b.hx) / 2;
        node.pos_hy = (a.hy + b.hy) / 2;
        node.child_span = geometric_span(level, k);

        for (int slot = 0; slot < 2; ++slot) {
          const Block& c = slot == 0 ? a : b;
          if (c.id < 0) {
            const int tile_idx = -c.id - 1;
            node.child[slot] = tile_idx;
            tree.leaf_of_tile[static_cast<size_t>(tile_idx)] = node.id;
          } else {
            node.child[slot] = c.id;
            tree.nodes[static_cast<size_t>(c.id)].parent = node.id;
          }
        }
        tree.nodes.push_back(node);
        merged[static_cast<size_t>(by) * next_w + bx] =
            Block{node.id, node.rect, node.pos_hx, node.pos_hy};
      }
    }
    blocks = std::move(merged);
    grid_w = next_w;
    grid_h = next_h;
  }

  assert(grid_w == 1 && grid_h == 1);
  assert(static_cast<int>(tree.nodes.size()) == k * k - 1);
  return tree;
}

int geometric_span(int level, int k) {
  const int depth = level_count(k);
  assert(level >= 1 && level <= depth);
  const int shift = (depth - level) / 2 + 2;
  const int span = k >> shift;
  return span < 1 ? 1 : span;
}

std::vector<int> SyncTree::ancestor_path(TileId tile, int level) const {
  if (level < 1 || level > depth) {
    throw ConfigError("level " + std::to_string(level) + " out of range [1, " +
                      std::to_string(depth) + "]");
  }
  if (tile.x < 0 || tile.x >= k || tile.y < 0 || tile.y >= k) {
    throw ConfigError("tile out of mesh");
  }
  std::vector<int> path;
  int id = leaf_of_tile[static_cast<size_t>(linear_index(tile, k))];
  path.push_back(id);
  while (node(id).level < level) {
    id = node(id).parent;
    path.push_back(id);
  }
  return path;
}

int SyncTree::path_pipeline_regs(int level) const {
  // Symmetric placement: follow any branch; use tile (0,0)'s path.
  int total = 0;
  for (int id : ancestor_path(TileId{0, 0}, level)) {
    total += node(id).child_regs[0];
  }
  return total;
}

SyncDomain domain_of(const SyncTree& tree, TileId tile, int level) {
  const int root = tree.ancestor_path(tile, level).back();
  const TileRect& r = tree.node(root).rect;
  SyncDomain dom;
  dom.root_node = root;
  dom.members.reserve(static_cast<size_t>(r.w) * r.h);
  for (int y = r.y0; y < r.y0 + r.h; ++y) {
    for (int x = r.x0; x < r.x0 + r.w; ++x) {
      dom.members.push_back(TileId{x, y});
    }
  }
  return dom;
}

SyncTree place_pipeline_regs(SyncTree tree, const MeshConfig& cfg) {
  switch (cfg.pipeline_mode) {
    case PipelineMode::kNone:
      for (auto& n : tree.nodes) n.child_regs[0] = n.child_regs[1] = 0;
      break;
    case PipelineMode::kGeometric:
      for (auto& n : tree.nodes) {
        n.child_regs[0] = n.child_regs[1] = n.child_span - 1;
      }
      break;
    case PipelineMode::kExplicitPerLink:
      for (auto& n : tree.nodes) {
        for (int slot = 0; slot < 2; ++slot) {
          const std::string key = std::to_string(n.id) + "." + std::to_string(slot);
          auto it = cfg.explicit_regs.find(key);
          if (it == cfg.explicit_regs.end()) {
            throw ConfigError("explicit pipeline mode: missing register count "
                              "for link " + key);
          }
          if (it->second < 0) {
            throw ConfigError("negative pipeline register count for link " + key);
          }
          n.child_regs[slot] = it->second;
        }
      }
      break;
  }
  return tree;
}

std::string dump_tree(const SyncTree& tree) {
  std::ostringstream out;
  out << "k=" << tree.k << " depth=" << tree.depth
      << " nodes=" << tree.nodes.size() << "\n";
  for (const auto& n : tree.nodes) {
    out << "node " << n.id << " level=" << n.level << " parent=";
    if (n.parent == kNoParent) {
      out << "none";
    } else {
      out << n.parent;
    }
    const char* child_kind = n.level == 1 ? "tiles" : "nodes";
    out << " " << child_kind << "=[" << n.child[0] << "," << n.child[1] << "]"
        << " pos=(" << n.pos_hx / 2.0 << "," << n.pos_hy / 2.0 << ")"
        << " span=" << n.child_span << " regs=[" << n.child_regs[0] << ","
        << n.child_regs[1] << "]\n";
  }
  return out.str();
}

}  // namespace tilesync
