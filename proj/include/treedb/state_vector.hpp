#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace treedb {

/// One state slot. Slots and node references share this word type.
using Slot = std::uint32_t;
/// Index of an entry in a node table (or of a vector in a plain table).
using Ref = std::uint32_t;

using StateVector = std::vector<Slot>;
using StateView = std::span<const Slot>;

/// Largest supported reference / slot width in bits.
inline constexpr unsigned kMaxRefBits = 32;

/// All-ones value of a b-bit word. Never a valid slot value in incremental
/// mode (it is the bootstrap predecessor value) and, paired with itself, the
/// empty marker of the node table.
constexpr Slot reserved_value(unsigned ref_bits) noexcept {
    return ref_bits >= 32 ? ~Slot{0} : static_cast<Slot>((std::uint64_t{1} << ref_bits) - 1);
}

}  // namespace treedb
