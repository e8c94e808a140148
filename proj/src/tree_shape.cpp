#include "treedb/tree_shape.hpp"

#include <algorithm>

#include "treedb/errors.hpp"

namespace treedb {

TreeShape::TreeShape(std::size_t k) : k_(k) {
    if (k == 0) throw ConfigError("tree needs k >= 1");
    nodes_.reserve(k - 1);
    if (k > 1) build(0, static_cast<std::uint32_t>(k), 0);
}

TreeShape::Child TreeShape::build(std::uint32_t offset, std::uint32_t length, std::uint32_t depth) {
    if (length == 1) return {true, offset};
    const std::uint32_t left_len = static_cast<std::uint32_t>(lhalf_size(length));
    const Child l = build(offset, left_len, depth + 1);
    const Child r = build(offset + left_len, length - left_len, depth + 1);
    nodes_.push_back({offset, length, depth, l, r});
    levels_ = std::max<std::size_t>(levels_, depth + 1);
    return {false, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

}  // namespace treedb
