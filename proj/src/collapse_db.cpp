#include "treedb/collapse_db.hpp"

#include <numeric>
#include <utility>

#include "treedb/errors.hpp"

namespace treedb {

namespace {
std::size_t layout_width(const ProcessLayout& layout) {
    std::size_t k = 0;
    for (const auto& b : layout) k += b.length;
    return k;
}
}  // namespace

CollapseDb::CollapseDb(ProcessLayout layout, std::uint64_t seed)
    : layout_(std::move(layout)), k_(layout_width(layout_)), root_(layout_.empty() ? 1 : layout_.size(), seed) {
    validate_layout(layout_, k_);
    blocks_.reserve(layout_.size());
    for (std::size_t i = 0; i < layout_.size(); ++i) blocks_.emplace_back(layout_[i].length, seed + 1 + i);
}

FindResult CollapseDb::find_or_put(StateView v) {
    if (v.size() != k_) throw ConfigError("vector length does not match the collapse layout");
    std::vector<Slot>& refs = scratch_;
    refs.resize(layout_.size());
    for (std::size_t i = 0; i < layout_.size(); ++i) {
        refs[i] = blocks_[i].find_or_put(v.subspan(layout_[i].offset, layout_[i].length)).ref;
    }
    return root_.find_or_put(refs);
}

void CollapseDb::get(Ref ref, std::span<Slot> out) const {
    if (out.size() != k_) throw ConfigError("output span has the wrong length");
    const auto refs = root_.get(ref);
    for (std::size_t i = 0; i < layout_.size(); ++i) {
        const auto part = blocks_[i].get(refs[i]);
        std::copy(part.begin(), part.end(), out.begin() + std::ptrdiff_t(layout_[i].offset));
    }
}

CompressionStats CollapseDb::stats() const {
    CompressionStats s;
    s.store = to_string(kind());
    s.k = k_;
    s.n = root_.size();
    s.root_entries = s.n;
    s.part_kind = "block";
    // every entry carries one side-index reference
    s.bytes_actual = root_.size() * (layout_.size() + 1) * sizeof(Slot);
    s.bytes_allocated = root_.bytes();
    s.words_compressed = root_.size() * layout_.size();
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        s.entries_per_part.push_back(blocks_[i].size());
        s.entries_total += blocks_[i].size();
        s.words_compressed += blocks_[i].size() * layout_[i].length;
        s.bytes_actual += blocks_[i].size() * (layout_[i].length + 1) * sizeof(Slot);
        s.bytes_allocated += blocks_[i].bytes();
    }
    s.overhead_words = s.entries_total + s.root_entries;
    s.entries_total += s.root_entries;
    return s;
}

}  // namespace treedb
