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
/**
 * @file ledger.hpp
 * Counts of input-encoding uses plus the ancilla high-water mark.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace qformer {

struct QueryLedger {
    std::map<std::string, std::uint64_t> counts;
    int ancilla_peak = 0;

    /// Count for a label, zero when absent.
    [[nodiscard]] auto count(const std::string &label) const -> std::uint64_t;
    [[nodiscard]] auto total() const -> std::uint64_t;
    /// Every count multiplied by k; throws Resource on overflow.
    [[nodiscard]] auto scaled(std::uint64_t k) const -> QueryLedger;
    [[nodiscard]] auto with_peak(int ancillas) const -> QueryLedger;

    auto operator+=(const QueryLedger &other) -> QueryLedger &;
    friend auto operator+(QueryLedger a, const QueryLedger &b) -> QueryLedger {
        a += b;
        return a;
    }
    friend auto operator==(const QueryLedger &a, const QueryLedger &b)
        -> bool = default;
};

/// Checked multiplication for query counts.
auto mul_checked(std::uint64_t a, std::uint64_t b) -> std::uint64_t;

} // namespace qformer
