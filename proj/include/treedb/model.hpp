#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "treedb/state_vector.hpp"

namespace treedb {

/// A contiguous run of slots owned by one process (or by the globals).
struct Block {
    std::string name;
    std::size_t offset = 0;
    std::size_t length = 0;
};

/// Partition of 0..k-1 into contiguous blocks, in slot order.
using ProcessLayout = std::vector<Block>;

/// Splits k slots into p contiguous blocks whose lengths differ by at most one.
ProcessLayout balanced_layout(std::size_t k, std::size_t p);

/// Throws ConfigError unless the blocks cover 0..k-1 contiguously and disjointly.
void validate_layout(const ProcessLayout& layout, std::size_t k);

/// A transition system over fixed-length state vectors.
///
/// next_state is const and must not touch mutable state, so one model can be
/// shared by every exploration worker.
class Model {
public:
    virtual ~Model() = default;

    std::size_t k() const noexcept { return k_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<StateVector>& initial_states() const noexcept { return initial_; }
    const ProcessLayout& process_layout() const noexcept { return layout_; }

    /// Appends the successors of `state` to `out` as consecutive k-slot
    /// records and returns how many were appended.
    virtual std::size_t next_state(StateView state, std::vector<Slot>& out) const = 0;

protected:
    Model(std::string name, std::size_t k, std::vector<StateVector> initial, ProcessLayout layout);

private:
    std::string name_;
    std::size_t k_;
    std::vector<StateVector> initial_;
    ProcessLayout layout_;
};

using ModelPtr = std::shared_ptr<const Model>;

/// Insert-only workload: every vector of the set is an initial state and no
/// state has successors.
class EnumerationModel final : public Model {
public:
    EnumerationModel(std::string name, std::size_t k, std::vector<StateVector> states,
                     ProcessLayout layout);

    std::size_t next_state(StateView, std::vector<Slot>&) const override { return 0; }
};

enum class SyntheticKind { identical_slots, cross_product, uniform_slots };

/// Parameters of one of the three analytic scenarios.
///
///  identical_slots: {<s,...,s> | s in 1..n}, vectors of length k.
///  cross_product:   P x P where P = {<i,...,i> | i in 1..m} has length k/2.
///  uniform_slots:   every vector with slots in 1..r, n = r^k.
///
/// `blocks` sets the process layout handed to collapse stores (0 picks two
/// equal halves when k is even, one block otherwise).
struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::identical_slots;
    std::uint64_t n = 0;
    std::size_t k = 0;
    std::uint64_t m = 0;
    std::uint64_t r = 0;
    std::size_t blocks = 0;
};

/// Upper bound on the number of vectors a synthetic generator may produce.
inline constexpr std::uint64_t kSyntheticBudget = std::uint64_t{1} << 26;

/// Cardinality of the generated set, computed from the parameters alone.
std::uint64_t synthetic_cardinality(const SyntheticSpec& spec);

ModelPtr generate_synthetic(const SyntheticSpec& spec);

/// P x P for an explicit P (all members of equal length).
ModelPtr generate_cross_product(const std::vector<StateVector>& half, std::size_t blocks = 0);

/// Parses "identical:n=1000,k=8", "cross:m=64,k=16", "uniform:r=4,k=8".
/// The optional key p=<blocks> sets the collapse layout.
SyntheticSpec parse_synthetic(std::string_view text);

std::string to_string(SyntheticKind kind);

}  // namespace treedb
