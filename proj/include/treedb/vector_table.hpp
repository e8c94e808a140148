#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "treedb/node_table.hpp"
#include "treedb/store.hpp"

namespace treedb {

/// Uncompressed lockless hash set of whole vectors (the baseline store).
///
/// Each bucket holds a memoized hash with a write-done bit; the vector lives
/// in a parallel data array at the bucket's index. An inserter claims a free
/// bucket with a CAS on the hash word, writes the data, then sets the done
/// bit; readers with a matching hash wait for the bit before comparing.
/// Linear probing within 8-bucket lines, rehashing between lines.
class VectorTable final : public StateStore {
public:
    VectorTable(std::size_t k, const TableConfig& config);
    ~VectorTable() override;

    VectorTable(const VectorTable&) = delete;
    VectorTable& operator=(const VectorTable&) = delete;

    StoreKind kind() const noexcept override { return StoreKind::hashtable; }
    std::size_t k() const noexcept override { return k_; }
    bool thread_safe() const noexcept override { return true; }
    bool supports_get() const noexcept override { return true; }

    FindResult find_or_put(StateView v) override;
    using StateStore::get;
    void get(Ref ref, std::span<Slot> out) const override;
    std::uint64_t size() const override;
    CompressionStats stats() const override;

private:
    std::size_t k_;
    TableConfig config_;
    std::uint64_t capacity_;
    std::uint64_t load_limit_;
    std::unique_ptr<std::atomic<std::uint64_t>[]> hashes_;
    Slot* data_ = nullptr;
    std::atomic<std::uint64_t> count_{0};
};

}  // namespace treedb
