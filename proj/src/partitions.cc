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

#include "ksep/partitions.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ksep/errors.h"

namespace ksep {

SwapSet SwapSet::of(const std::vector<int> &sites) {
    std::uint64_t mask = 0;
    for (int s : sites) {
        if (s < 0 || s >= kMaxSites) {
            throw ParameterError("SwapSet: site index " + std::to_string(s) + " out of range");
        }
        mask |= std::uint64_t{1} << s;
    }
    return SwapSet(mask);
}

SwapSet SwapSet::all(int n) {
    return SwapSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
}

std::vector<int> SwapSet::sites() const {
    std::vector<int> out;
    for (int m = 0; m < 64; m++) {
        if (contains(m)) {
            out.push_back(m);
        }
    }
    return out;
}

SwapSet SwapSet::complement(int n) const {
    return SwapSet(~mask_ & all(n).mask_);
}

std::string SwapSet::to_string() const {
    std::stringstream ss;
    bool first = true;
    for (int s : sites()) {
        ss << (first ? "" : ",") << s;
        first = false;
    }
    return ss.str();
}

KPartition KPartition::from_rgs(std::vector<int> rgs) {
    if (rgs.empty() || rgs.size() > static_cast<std::size_t>(kMaxSites)) {
        throw ParameterError("KPartition: restricted growth string length out of range");
    }
    int max_label = -1;
    for (std::size_t m = 0; m < rgs.size(); m++) {
        if (rgs[m] < 0 || rgs[m] > max_label + 1) {
            throw ParameterError("KPartition: growth condition violated at position " + std::to_string(m));
        }
        max_label = std::max(max_label, rgs[m]);
    }
    KPartition p;
    p.n = static_cast<int>(rgs.size());
    p.k = max_label + 1;
    p.rgs = std::move(rgs);
    return p;
}

std::vector<std::vector<int>> KPartition::blocks() const {
    std::vector<std::vector<int>> out(k);
    for (int m = 0; m < n; m++) {
        out[rgs[m]].push_back(m);
    }
    return out;
}

std::vector<SwapSet> KPartition::block_sets() const {
    std::vector<SwapSet> out(k);
    for (int m = 0; m < n; m++) {
        out[rgs[m]] = out[rgs[m]] | SwapSet(std::uint64_t{1} << m);
    }
    return out;
}

std::string KPartition::to_string() const {
    std::stringstream ss;
    auto bs = blocks();
    for (std::size_t b = 0; b < bs.size(); b++) {
        if (b) {
            ss << '|';
        }
        for (std::size_t i = 0; i < bs[b].size(); i++) {
            ss << (i ? "," : "") << bs[b][i];
        }
    }
    return ss.str();
}

KPartition KPartition::parse(const std::string &text) {
    std::vector<std::vector<int>> blocks(1);
    std::string num;
    auto flush = [&]() {
        if (num.empty()) {
            throw ParameterError("KPartition::parse: empty site in '" + text + "'");
        }
        blocks.back().push_back(std::stoi(num));
        num.clear();
    };
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            num += c;
        } else if (c == ',') {
            flush();
        } else if (c == '|') {
            flush();
            blocks.emplace_back();
        } else {
            throw ParameterError("KPartition::parse: unexpected character in '" + text + "'");
        }
    }
    flush();

    int n = 0;
    for (const auto &b : blocks) {
        n += static_cast<int>(b.size());
    }
    std::vector<int> label(n, -1);
    for (std::size_t b = 0; b < blocks.size(); b++) {
        for (int s : blocks[b]) {
            if (s < 0 || s >= n || label[s] != -1) {
                throw ParameterError("KPartition::parse: sites must cover 0..n-1 exactly once");
            }
            label[s] = static_cast<int>(b);
        }
    }
    // Relabel blocks by first occurrence.
    std::vector<int> relabel(blocks.size(), -1);
    int next = 0;
    std::vector<int> rgs(n);
    for (int m = 0; m < n; m++) {
        if (relabel[label[m]] == -1) {
            relabel[label[m]] = next++;
        }
        rgs[m] = relabel[label[m]];
    }
    return from_rgs(std::move(rgs));
}

std::uint64_t stirling2(int n, int k) {
    if (n < 0 || k < 0) {
        throw ParameterError("stirling2: negative argument");
    }
    if (k > n) {
        return 0;
    }
    // row[j] = S(i, j), built by S(i, j) = j S(i-1, j) + S(i-1, j-1).
    std::vector<std::uint64_t> row(k + 1, 0);
    row[0] = 1;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    for (int i = 1; i <= n; i++) {
        for (int j = std::min(i, k); j >= 1; j--) {
            std::uint64_t a = row[j];
            if (a != 0 && static_cast<std::uint64_t>(j) > (kMax - row[j - 1]) / a) {
                throw ParameterError("stirling2: value overflows 64 bits");
            }
            row[j] = static_cast<std::uint64_t>(j) * a + row[j - 1];
        }
        row[0] = 0;
    }
    return row[k];
}

KPartitionGenerator::KPartitionGenerator(int n, int k) : n_(n), k_(k) {
    if (n < 1 || n > kMaxSites || k < 1 || k > n) {
        throw ParameterError("k-partitions need 1 <= k <= n <= " + std::to_string(kMaxSites) + ", got n=" +
                             std::to_string(n) + ", k=" + std::to_string(k));
    }
    // Smallest string with exactly k labels: zeros, then 1, 2, ..., k-1.
    rgs_.assign(n, 0);
    for (int t = 1; t < k; t++) {
        rgs_[n - k + t] = t;
    }
    prefix_max_.resize(n);
    int mx = 0;
    for (int m = 0; m < n; m++) {
        mx = std::max(mx, rgs_[m]);
        prefix_max_[m] = mx;
    }
}

std::optional<KPartition> KPartitionGenerator::next() {
    if (done_) {
        return std::nullopt;
    }
    if (started_ && !advance()) {
        done_ = true;
        return std::nullopt;
    }
    started_ = true;
    KPartition p;
    p.n = n_;
    p.k = k_;
    p.rgs = rgs_;
    return p;
}

bool KPartitionGenerator::advance() {
    // Find the rightmost position that can be incremented while still
    // leaving room in the suffix to introduce every missing label.
    for (int m = n_ - 1; m >= 1; m--) {
        int bound = std::min(prefix_max_[m - 1] + 1, k_ - 1);
        if (rgs_[m] >= bound) {
            continue;
        }
        int room = n_ - 1 - m;
        int value = rgs_[m] + 1;
        int cur_max = std::max(prefix_max_[m - 1], value);
        int missing = k_ - 1 - cur_max;
        // Only opening a new label at m can shrink the deficit.
        if (missing > room && bound > prefix_max_[m - 1]) {
            value = bound;
            cur_max = value;
            missing = k_ - 1 - cur_max;
        }
        if (missing > room) {
            continue;
        }
        rgs_[m] = value;
        prefix_max_[m] = cur_max;
        int zeros = room - missing;
        for (int t = 0; t < room; t++) {
            int pos = m + 1 + t;
            rgs_[pos] = t < zeros ? 0 : cur_max + (t - zeros) + 1;
            prefix_max_[pos] = std::max(prefix_max_[pos - 1], rgs_[pos]);
        }
        return true;
    }
    return false;
}

std::vector<KPartition> enumerate_kpartitions(int n, int k) {
    KPartitionGenerator gen(n, k);
    std::vector<KPartition> out;
    while (auto p = gen.next()) {
        out.push_back(std::move(*p));
    }
    return out;
}

std::vector<SwapTerm> swap_sets(const KPartition &alpha) {
    auto blocks = alpha.block_sets();
    std::vector<SwapTerm> out;
    out.reserve(static_cast<std::size_t>(alpha.k) * (alpha.k + 1) / 2);
    for (int i = 0; i < alpha.k; i++) {
        out.push_back({i, i, blocks[i], 1});
    }
    for (int i = 0; i < alpha.k; i++) {
        for (int j = i + 1; j < alpha.k; j++) {
            out.push_back({i, j, blocks[i] | blocks[j], 2});
        }
    }
    return out;
}

}  // namespace ksep
