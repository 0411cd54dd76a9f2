#include "mdl/kernels.hpp"

#include <bit>

namespace mdl::kern {
namespace {

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t n) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i]);
    return c;
}

std::uint64_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

std::uint64_t popcount_andnot_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i] & ~b[i]);
    return c;
}

std::uint64_t popcount_xor_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i] ^ b[i]);
    return c;
}

void and_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] &= src[i];
}

void andnot_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] &= ~src[i];
}

void or_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

bool disjoint_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] & b[i]) return false;
    return true;
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar",
        popcount_scalar,
        popcount_and_scalar,
        popcount_andnot_scalar,
        popcount_xor_scalar,
        and_inplace_scalar,
        andnot_inplace_scalar,
        or_inplace_scalar,
        disjoint_scalar,
    };
    return k;
}

} // namespace mdl::kern
