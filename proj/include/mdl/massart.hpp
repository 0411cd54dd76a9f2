#pragma once

#include "mdl/evaluate.hpp"
#include "mdl/hypothesis.hpp"
#include "mdl/rng.hpp"
#include "mdl/types.hpp"

#include <functional>
#include <span>

namespace mdl::massart {

/// A learner valid under random classification noise: given a sample whose
/// labels are flipped iid at some unknown rate eta <= eta_bound < 1/2, it
/// targets Pr[h != c] <= eps with probability >= 1-delta once the sample is
/// at least sample_size(n, eta_bound, eps, delta). The guarantee is validated
/// empirically in tests at desk-scale sizes, not assumed.
struct CnLearnerHandle {
    std::function<Hypothesis(std::span<const Example>, double eta_bound, double eps,
                             double delta)>
        learn;
    std::function<double(std::uint32_t n, double eta_bound, double eps, double delta)>
        sample_size;
};

/// ERM over an explicit finite class: the member with minimum empirical error
/// on the (possibly noisy) sample, ties to the lowest class index. Valid under
/// RCN because flipping labels at a fixed rate shifts every member's expected
/// empirical error by the same affine map and preserves the ordering.
/// eta_bound is accepted for signature compatibility; the minimizer never
/// needs it.
Hypothesis cn_erm_finite(std::span<const Example> sample, std::span<const Hypothesis> classes,
                         double eta_bound);

/// Noise-tolerant conjunction learner.
///
/// Over the grid eta_hat in {0, step, 2*step, ..., eta_bound} with
/// step = (1-2*eta_bound)*eps/8, a candidate conjunction per grid point:
/// include literal l exactly when the noise-corrected violation statistic
///     (P[violates l and noisy y=1] - eta_hat * P[violates l]) / (1-2*eta_hat)
/// is at most eps/(8n). Among grid candidates, return the one minimizing the
/// noise-corrected empirical error max(0, (E - eta_hat)/(1-2*eta_hat)), ties
/// to the smaller eta_hat. The clamp floors the corrected error at its true
/// minimum (an error rate cannot be negative); without it the minimization
/// degenerates toward the top of the grid, where over-corrected candidates
/// score arbitrarily negative regardless of quality. With the clamp the rule
/// reads: the smallest grid noise rate whose candidate explains the observed
/// noisy error.
///
/// Each literal's inclusion flips at most once along the grid, so the grid
/// decomposes into at most 2n+1 runs of constant candidate; the implementation
/// walks runs rather than grid points and only ever evaluates O(n) candidates,
/// keeping the cost O(m*n + n log n) for any grid resolution.
Hypothesis cn_conjunction(std::span<const Example> sample, double eta_bound, double eps,
                          double delta);

/// Hoeffding-style sample size making every statistic above resolve: all 4n+2
/// violation counts within eps*(1-2*eta_bound)/(32n) and all candidate error
/// estimates within eps*(1-2*eta_bound)/8, each with failure share delta.
double cn_conjunction_sample_size(std::uint32_t n, double eta_bound, double eps, double delta);

/// cn_conjunction packaged as a handle.
CnLearnerHandle conjunction_cn_learner();

struct DenoiseOptions {
    /// Noise bound handed to the final pooled training call. 0 reproduces the
    /// idealized reduction (every relabel correct); a small positive bound
    /// lets the final CN learner absorb the relabeling mistakes that finite
    /// per-dataset samples leave behind.
    double final_noise_bound = 0.0;
};

struct DenoiseDetail {
    Hypothesis hypothesis;
    std::vector<std::uint32_t> holdout_index; // per dataset
    std::vector<Example> relabeled;           // the pooled denoised sample
};

/// The reduction: train a per-dataset hypothesis on a random (m-1)-subset
/// with accuracy/confidence targets delta/(4d), relabel the held-out example
/// with it, then train the same CN learner on the pooled relabeled sample
/// with parameters (eps, delta/2).
Hypothesis denoise_reduce(const MultiDomainSample& sample, const CnLearnerHandle& cn,
                          double eta_bound, double eps, double delta, std::uint64_t seed,
                          const DenoiseOptions& options = {});

DenoiseDetail denoise_reduce_detailed(const MultiDomainSample& sample,
                                      const CnLearnerHandle& cn, double eta_bound, double eps,
                                      double delta, std::uint64_t seed,
                                      const DenoiseOptions& options = {});

struct GuaranteeSizes {
    double datasets;             // d = f(1, 1/eps, 2/delta)
    double examples_per_dataset; // m > f(1/(1-2*eta_bound), 4d/delta, 4d/delta)
};

/// The proof-faithful sizes for a given handle; far beyond desk scale, they
/// are reported for documentation while experiments take explicit d, m.
GuaranteeSizes proof_faithful_sizes(const CnLearnerHandle& cn, std::uint32_t n, double eta_bound,
                                  double eps, double delta);

} // namespace mdl::massart
