#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace optval {

/// Inclusive interval of 1-based day or entry indices.
struct IndexRange {
    std::int64_t first = 1;
    std::int64_t last = 0;

    [[nodiscard]] std::int64_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
    [[nodiscard]] bool empty() const noexcept { return last < first; }
    [[nodiscard]] bool contains(std::int64_t i) const noexcept { return i >= first && i <= last; }
    [[nodiscard]] bool within(const IndexRange& outer) const noexcept {
        return !empty() && first >= outer.first && last <= outer.last;
    }

    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Malformed or unreadable input data (files, rows, columns).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace optval
