#pragma once

#include <cstdint>
#include <random>

#include "field.hpp"
#include "matrix.hpp"

namespace mvd {

using RandomEngine = std::mt19937_64;

/// Uniform draw from [lo, hi] by rejection; avoids the non-portable
/// std::uniform_int_distribution so seeded runs are reproducible everywhere.
inline long bounded_int(RandomEngine& eng, long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
}

template <class K>
Vec<K> random_int_vector(RandomEngine& eng, std::size_t len, long bound) {
    Vec<K> v(len);
    for (auto& x : v) x = field_traits<K>::from_int(bounded_int(eng, -bound, bound));
    return v;
}

template <class K>
Matrix<K> random_int_matrix(RandomEngine& eng, std::size_t rows, std::size_t cols,
                            long bound) {
    Matrix<K> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = field_traits<K>::from_int(bounded_int(eng, -bound, bound));
    return m;
}

} // namespace mvd
