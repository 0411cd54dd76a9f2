#include "mdl/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace mdl::kern {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}
#endif

namespace {

const Kernels* select() {
    const char* env = std::getenv("MDL_KERNELS");
    std::string_view want = env ? env : "";
    if (want == "scalar") return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
    if (want == "avx2" && avx2_supported()) return &avx2_kernels();
    if (want.empty() && avx2_supported()) return &avx2_kernels();
#endif
    return &scalar_kernels();
}

} // namespace

const Kernels& active() {
    static const Kernels* chosen = select();
    return *chosen;
}

std::vector<const Kernels*> supported_backends() {
    std::vector<const Kernels*> out{&scalar_kernels()};
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) out.push_back(&avx2_kernels());
#endif
    return out;
}

} // namespace mdl::kern
