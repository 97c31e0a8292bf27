// Copyright 2026 The ksep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KSEP_PARTITIONS_H
#define KSEP_PARTITIONS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ksep {

/// Largest site count supported by bitmask-based site sets.
inline constexpr int kMaxSites = 63;

/// A subset of site indices, stored as a bitmask (bit m <=> site m).
class SwapSet {
   public:
    SwapSet() = default;
    explicit SwapSet(std::uint64_t mask) : mask_(mask) {
    }
    static SwapSet of(const std::vector<int> &sites);
    static SwapSet all(int n);

    bool contains(int site) const { return (mask_ >> site) & 1U; }
    bool empty() const { return mask_ == 0; }
    std::uint64_t mask() const { return mask_; }
    std::vector<int> sites() const;

    /// Complement within {0..n-1}.
    SwapSet complement(int n) const;
    SwapSet operator|(SwapSet other) const { return SwapSet(mask_ | other.mask_); }

    /// Comma-separated site list, e.g. "0,2".
    std::string to_string() const;

    auto operator<=>(const SwapSet &) const = default;

   private:
    std::uint64_t mask_ = 0;
};

/// A partition of {0..n-1} into exactly k nonempty unlabeled blocks, encoded
/// as a restricted growth string: rgs[0] = 0, rgs[m] <= 1 + max(rgs[0..m-1]),
/// and the largest label is k-1. Blocks are numbered by first occurrence.
struct KPartition {
    int n = 0;
    int k = 0;
    std::vector<int> rgs;

    /// Validates the growth condition and block count; throws ParameterError.
    static KPartition from_rgs(std::vector<int> rgs);

    std::vector<std::vector<int>> blocks() const;
    std::vector<SwapSet> block_sets() const;

    /// Block notation: blocks separated by '|', sites by ',' ("0,1|2").
    std::string to_string() const;

    /// Inverse of to_string. Sites must cover 0..n-1 exactly once.
    static KPartition parse(const std::string &text);

    bool operator==(const KPartition &) const = default;
};

/// Stirling number of the second kind. Throws ParameterError on overflow.
std::uint64_t stirling2(int n, int k);

/// Streams k-partitions of n sites in lexicographic order of their
/// restricted growth strings.
///
///     KPartitionGenerator gen(4, 2);
///     while (auto p = gen.next()) { ... }
class KPartitionGenerator {
   public:
    /// Throws ParameterError unless 1 <= k <= n <= kMaxSites.
    KPartitionGenerator(int n, int k);

    std::optional<KPartition> next();

   private:
    bool advance();

    int n_;
    int k_;
    std::vector<int> rgs_;
    std::vector<int> prefix_max_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<KPartition> enumerate_kpartitions(int n, int k);

/// One factor group of a partition term: the sites whose two copies are
/// exchanged for the ordered block pairs (i, j) and (j, i).
struct SwapTerm {
    int i;
    int j;
    SwapSet sites;     ///< block_i union block_j (block_i when i == j)
    int multiplicity;  ///< number of ordered pairs with this swap set
};

/// Diagonal pairs (i, i) first, then i < j in lexicographic order; the two
/// orderings of an off-diagonal pair share one entry with multiplicity 2.
/// Multiplicities sum to k^2.
std::vector<SwapTerm> swap_sets(const KPartition &alpha);

}  // namespace ksep

#endif
