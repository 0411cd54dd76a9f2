#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace mdl::kern {

// Word-level primitives behind every hot loop in the library: contingency
// counts for correlations, disagreement counting, Hamming distances and
// consistent-conjunction folds all reduce to these. Each entry has a scalar
// reference implementation and (on x86-64) an AVX2 variant selected at
// runtime; the backends are equivalence-tested against each other.
struct Kernels {
    const char* name;

    std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t n);
    std::uint64_t (*popcount_and)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
    std::uint64_t (*popcount_andnot)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n); // a & ~b
    std::uint64_t (*popcount_xor)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);

    void (*and_inplace)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
    void (*andnot_inplace)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n); // dst &= ~src
    void (*or_inplace)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);

    bool (*disjoint)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n); // (a & b) == 0
};

const Kernels& scalar_kernels();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const Kernels& avx2_kernels(); // call only when avx2_supported()
#endif

/// Runtime-selected backend. MDL_KERNELS=scalar|avx2 overrides for testing.
const Kernels& active();

/// Every backend usable on this machine (for equivalence tests).
std::vector<const Kernels*> supported_backends();

} // namespace mdl::kern
