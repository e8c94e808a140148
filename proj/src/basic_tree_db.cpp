#include "treedb/basic_tree_db.hpp"

#include <array>
#include <string>

#include "treedb/errors.hpp"

namespace treedb {

BasicTreeDb::BasicTreeDb(std::size_t k, std::uint64_t seed) : shape_(k) {
    const std::size_t n = k == 1 ? 1 : shape_.internal_nodes();
    tables_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) tables_.emplace_back(k == 1 ? 1 : 2, seed + i);
}

FindResult BasicTreeDb::find_or_put(StateView v) {
    if (v.size() != shape_.k()) throw ConfigError("vector length does not match the database");
    if (shape_.k() == 1) {
        const FindResult r = tables_[0].find_or_put(v);
        return {v[0], r.seen};
    }
    const auto& nodes = shape_.nodes();
    std::vector<Ref>& refs = scratch_;
    refs.resize(nodes.size());
    FindResult last;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = nodes[i];
        const std::array<Slot, 2> tuple{node.left.leaf ? v[node.left.index] : refs[node.left.index],
                                        node.right.leaf ? v[node.right.index] : refs[node.right.index]};
        last = tables_[i].find_or_put(tuple);
        refs[i] = last.ref;
    }
    return last;
}

void BasicTreeDb::get(Ref ref, std::span<Slot> out) const {
    if (out.size() != shape_.k()) throw ConfigError("output span has the wrong length");
    if (shape_.k() == 1) {
        out[0] = ref;
        return;
    }
    const auto& nodes = shape_.nodes();
    std::vector<Ref>& refs = scratch_;
    refs.resize(nodes.size());
    refs.back() = ref;
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const auto tuple = tables_[i].get(refs[i]);
        const auto& node = nodes[i];
        if (node.left.leaf) out[node.left.index] = tuple[0];
        else refs[node.left.index] = tuple[0];
        if (node.right.leaf) out[node.right.index] = tuple[1];
        else refs[node.right.index] = tuple[1];
    }
}

std::uint64_t BasicTreeDb::size() const { return tables_.back().size(); }

CompressionStats BasicTreeDb::stats() const {
    CompressionStats s;
    s.store = to_string(kind());
    s.k = shape_.k();
    s.n = size();
    s.root_entries = s.n;
    s.part_kind = "level";
    if (shape_.k() == 1) {
        s.entries_total = s.n;
        s.entries_per_part = {s.n};
        s.words_compressed = s.n;
        s.overhead_words = s.n;
        s.bytes_actual = s.n * 2 * sizeof(Slot);
        s.bytes_allocated = tables_[0].bytes();
        s.entry_stride_bytes = 2.0 * sizeof(Slot);
        return s;
    }
    s.entries_per_part.assign(shape_.levels(), 0);
    const auto& nodes = shape_.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        s.entries_per_part[nodes[i].depth] += tables_[i].size();
        s.entries_total += tables_[i].size();
        s.bytes_allocated += tables_[i].bytes();
    }
    s.words_compressed = 2 * s.entries_total;
    // one stable-index reference per entry
    s.overhead_words = s.entries_total;
    s.entry_stride_bytes = 3.0 * sizeof(Slot);
    s.bytes_actual = s.entries_total * 3 * sizeof(Slot);
    return s;
}

}  // namespace treedb
