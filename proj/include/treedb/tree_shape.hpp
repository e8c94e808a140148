#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace treedb {

/// Balanced binary split of k slots: the left half takes ceil(k/2) slots, the
/// right half floor(k/2), down to single-slot leaves.
///
/// Internal nodes are numbered in post-order (left subtree, right subtree,
/// node), which is also the order in which inserts touch the table. The root
/// is node k-2.
class TreeShape {
public:
    struct Child {
        bool leaf;
        std::uint32_t index;  // slot index for a leaf, node id otherwise
    };

    struct Node {
        std::uint32_t offset;
        std::uint32_t length;
        std::uint32_t depth;  // root is 0
        Child left;
        Child right;
    };

    explicit TreeShape(std::size_t k);

    std::size_t k() const noexcept { return k_; }
    std::size_t internal_nodes() const noexcept { return nodes_.size(); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::uint32_t root() const noexcept { return static_cast<std::uint32_t>(nodes_.size() - 1); }
    /// Number of internal-node levels (tree height).
    std::size_t levels() const noexcept { return levels_; }

private:
    Child build(std::uint32_t offset, std::uint32_t length, std::uint32_t depth);

    std::size_t k_;
    std::size_t levels_ = 0;
    std::vector<Node> nodes_;
};

inline std::size_t lhalf_size(std::size_t k) { return (k + 1) / 2; }
inline std::size_t rhalf_size(std::size_t k) { return k / 2; }

}  // namespace treedb
