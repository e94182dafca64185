// Copyright 2026 The qformer Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qformer/ledger.hpp"

#include <algorithm>

#include "qformer/error.hpp"

namespace qformer {

auto mul_checked(std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    std::uint64_t out = 0;
    require(!__builtin_mul_overflow(a, b, &out), ErrorKind::Resource,
            "query count overflow");
    return out;
}

auto QueryLedger::count(const std::string &label) const -> std::uint64_t {
    const auto it = counts.find(label);
    return it == counts.end() ? 0 : it->second;
}

auto QueryLedger::total() const -> std::uint64_t {
    std::uint64_t sum = 0;
    for (const auto &[label, c] : counts) {
        require(!__builtin_add_overflow(sum, c, &sum), ErrorKind::Resource,
                "query count overflow");
    }
    return sum;
}

auto QueryLedger::scaled(std::uint64_t k) const -> QueryLedger {
    QueryLedger out = *this;
    for (auto &[label, c] : out.counts) {
        c = mul_checked(c, k);
    }
    return out;
}

auto QueryLedger::with_peak(int ancillas) const -> QueryLedger {
    QueryLedger out = *this;
    out.ancilla_peak = std::max(out.ancilla_peak, ancillas);
    return out;
}

auto QueryLedger::operator+=(const QueryLedger &other) -> QueryLedger & {
    for (const auto &[label, c] : other.counts) {
        auto &mine = counts[label];
        require(!__builtin_add_overflow(mine, c, &mine), ErrorKind::Resource,
                "query count overflow");
    }
    ancilla_peak = std::max(ancilla_peak, other.ancilla_peak);
    return *this;
}

} // namespace qformer
