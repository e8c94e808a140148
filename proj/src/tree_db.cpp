#include "treedb/tree_db.hpp"

#include <array>
#include <cmath>
#include <string>

#include "treedb/errors.hpp"

namespace treedb {

namespace {

// Scratch space for node references; most vectors fit on the stack.
class RefScratch {
public:
    explicit RefScratch(std::size_t n) {
        if (n > stack_.size()) heap_.resize(n);
        data_ = n > stack_.size() ? heap_.data() : stack_.data();
    }
    Ref& operator[](std::size_t i) noexcept { return data_[i]; }
    const Ref* data() const noexcept { return data_; }

private:
    std::array<Ref, 128> stack_;
    std::vector<Ref> heap_;
    Ref* data_;
};

}  // namespace

TreeDb::TreeDb(std::size_t k, const TableConfig& config, TreeMode mode)
    : shape_(k), table_(config), mode_(mode), reserved_(reserved_value(config.ref_bits)) {}

void TreeDb::check_vector(StateView v) const {
    if (v.size() != shape_.k()) {
        throw ConfigError("vector of length " + std::to_string(v.size()) + " in a database for k=" +
                          std::to_string(shape_.k()));
    }
}

TreeResult TreeDb::finish(FindResult root, unsigned accesses) {
    const bool flipped = table_.tag_root(root.ref);
    return {root.ref, table_verdict_ ? root.seen : !flipped, accesses};
}

TreeResult TreeDb::insert(StateView v, ReferenceTree* refs) {
    check_vector(v);
    if (shape_.k() == 1) {
        const FindResult rec = table_.find_or_put(v[0], 0);
        const TreeResult r = finish(rec, 1);
        return {v[0], r.seen, 1};
    }
    const auto& nodes = shape_.nodes();
    RefScratch buf(nodes.size());
    FindResult last;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = nodes[i];
        const Slot l = node.left.leaf ? v[node.left.index] : buf[node.left.index];
        const Slot r = node.right.leaf ? v[node.right.index] : buf[node.right.index];
        last = table_.find_or_put(l, r);
        buf[i] = last.ref;
    }
    if (refs != nullptr) refs->refs.assign(buf.data(), buf.data() + nodes.size());
    return finish(last, static_cast<unsigned>(nodes.size()));
}

TreeResult TreeDb::insert_incremental(StateView v, StateView pred, ReferenceTree& refs) {
    check_vector(v);
    check_vector(pred);
    const auto& nodes = shape_.nodes();
    if (refs.refs.size() != nodes.size()) {
        throw ConfigError("reference tree has " + std::to_string(refs.refs.size()) +
                          " nodes, expected " + std::to_string(nodes.size()));
    }
    for (Slot s : v) {
        if (s == reserved_) {
            throw ConfigError("slot value " + std::to_string(s) +
                              " is reserved for the bootstrap predecessor");
        }
    }
    if (shape_.k() == 1) {
        if (v[0] == pred[0]) return {v[0], true, 0};
        return insert(v);
    }
    RefScratch changed(nodes.size());
    unsigned accesses = 0;
    FindResult root{refs.refs.back(), true};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = nodes[i];
        const bool lchg = node.left.leaf ? v[node.left.index] != pred[node.left.index]
                                         : changed[node.left.index] != 0;
        const bool rchg = node.right.leaf ? v[node.right.index] != pred[node.right.index]
                                          : changed[node.right.index] != 0;
        changed[i] = (lchg || rchg) ? 1 : 0;
        if (!(lchg || rchg)) continue;
        const Slot l = node.left.leaf ? v[node.left.index] : refs.refs[node.left.index];
        const Slot r = node.right.leaf ? v[node.right.index] : refs.refs[node.right.index];
        const FindResult res = table_.find_or_put(l, r);
        ++accesses;
        refs.refs[i] = res.ref;
        root = res;
    }
    if (changed[nodes.size() - 1] == 0) root = {refs.refs.back(), true};
    return finish(root, accesses);
}

FindResult TreeDb::find_or_put(StateView v) {
    const TreeResult r = insert(v);
    return {r.ref, r.seen};
}

void TreeDb::get(Ref ref, std::span<Slot> out) const { get(ref, out, nullptr); }

void TreeDb::get(Ref ref, std::span<Slot> out, ReferenceTree* refs) const {
    if (out.size() != shape_.k()) throw ConfigError("output span has the wrong length");
    if (shape_.k() == 1) {
        out[0] = ref;
        if (refs != nullptr) refs->refs.clear();
        return;
    }
    if (!table_.is_root(ref)) {
        throw InvalidReference("reference " + std::to_string(ref) + " is not a stored root");
    }
    const auto& nodes = shape_.nodes();
    RefScratch buf(nodes.size());
    buf[nodes.size() - 1] = ref;
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const auto [l, r] = table_.get(buf[i]);
        const auto& node = nodes[i];
        if (node.left.leaf) out[node.left.index] = l;
        else buf[node.left.index] = l;
        if (node.right.leaf) out[node.right.index] = r;
        else buf[node.right.index] = r;
    }
    if (refs != nullptr) refs->refs.assign(buf.data(), buf.data() + nodes.size());
}

std::pair<StateVector, ReferenceTree> TreeDb::bootstrap() const {
    return {StateVector(shape_.k(), reserved_),
            ReferenceTree{std::vector<Ref>(shape_.internal_nodes(), reserved_)}};
}

std::uint64_t TreeDb::size() const { return table_.stats().roots; }

CompressionStats TreeDb::stats() const {
    const TableStats t = table_.stats();
    CompressionStats s;
    s.store = to_string(kind());
    s.k = shape_.k();
    s.n = t.roots;
    s.entries_total = t.entries;
    s.root_entries = t.roots;
    s.part_kind = "merged";
    // a k=1 record carries one meaningful word
    s.words_compressed = shape_.k() == 1 ? t.entries : 2 * t.entries;
    s.entry_stride_bytes = t.entry_stride_bytes;
    s.bytes_actual = static_cast<std::uint64_t>(std::ceil(t.entries * t.entry_stride_bytes));
    s.bytes_allocated = t.bytes_allocated;
    return s;
}

}  // namespace treedb
