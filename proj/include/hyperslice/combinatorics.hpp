#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hyperslice {

using IndexSet = std::vector<std::size_t>;

/// Binomial coefficient; exact for every value used here (n <= 64).
inline std::uint64_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

/// All k-subsets of {0, ..., n-1}, each sorted ascending, in lexicographic order.
/// For k = 0 the result is a single empty subset.
inline std::vector<IndexSet> combinations(std::size_t n, std::size_t k)
{
    std::vector<IndexSet> out;
    if (k > n) return out;
    out.reserve(static_cast<std::size_t>(binomial(n, k)));
    IndexSet c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        // advance to the next combination
        std::size_t i = k;
        while (i > 0 && c[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

/// Complement of a sorted subset within {0, ..., n-1}.
inline IndexSet complement(const IndexSet& subset, std::size_t n)
{
    IndexSet out;
    out.reserve(n - subset.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < subset.size() && subset[j] == i) {
            ++j;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace hyperslice
