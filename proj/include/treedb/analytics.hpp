#pragma once

#include <cstdint>
#include <vector>

#include "treedb/stats.hpp"

namespace treedb::analytic {

/// Tree worst case: every vector needs k-1 private entries, 2 - 2/k.
Rational tree_worst(std::int64_t k);

/// Tree on P x P with |P| = m of length k/2: 2/k + 2/m - 4/(mk).
Rational tree_cross_product(std::int64_t k, std::int64_t m);

/// Tree best case, 2/k.
Rational tree_best(std::int64_t k);

/// Process table best case, p/k.
Rational collapse_best(std::int64_t p, std::int64_t k);

/// Process table worst case, 1 + p/k.
Rational collapse_worst(std::int64_t p, std::int64_t k);

/// Process table with p blocks of m slots each, every block drawing its
/// sub-vector from the same s values independently (n = s^p) and one table
/// per block: (p*n + p*m*s) / (n*k).
Rational collapse_symmetric(std::int64_t p, std::int64_t m, std::int64_t s);

/// Same scenario with a single process table shared by all p symmetric
/// blocks: (p*n + m*s) / (n*k).
Rational collapse_symmetric_shared(std::int64_t p, std::int64_t m, std::int64_t s);

/// Node entries per tree level (root first) when every node stores the cross
/// product of its children: level l holds 2^l nodes of n^(1/2^l) entries.
/// k must be a power of two.
std::vector<double> optimal_level_entries(double n, std::int64_t k);

/// Exact version of optimal_level_entries for the uniform set with slots in
/// 1..r (n = r^k).
std::vector<std::uint64_t> uniform_level_entries(std::uint64_t r, std::int64_t k);

/// Word-unit ratio of the uniform set stored with one table per node.
Rational uniform_ratio(std::uint64_t r, std::int64_t k);

/// Entry count of the identical-slots set with one table per node: n(k-1).
std::uint64_t identical_entries(std::uint64_t n, std::int64_t k);

/// Entry count of P x P with one table per node: n + 2(j-1)m, n = m^2.
std::uint64_t cross_product_entries(std::uint64_t m, std::int64_t k);

}  // namespace treedb::analytic
