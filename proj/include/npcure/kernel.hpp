#pragma once

#include <span>
#include <vector>

namespace npcure {

// Symmetric densities vanishing outside (-1, 1). Only the Epanechnikov
// kernel ships; the enumeration leaves room for other compactly supported
// kernels without an API change.
enum class KernelKind { Epanechnikov };

struct KernelSpec {
    KernelKind kind = KernelKind::Epanechnikov;
};

// K(u); zero outside the open interval (-1, 1), including the endpoints.
double kernel_eval(const KernelSpec& spec, double u);

struct KernelConstants {
    double c_k;  // integral of K^2
    double d_k;  // integral of v^2 K(v)
};

KernelConstants kernel_constants(const KernelSpec& spec);

struct WeightVector {
    std::vector<double> weights;  // aligned to the covariate sequence
    double center = 0.0;
    double bandwidth = 0.0;
};

// Nadaraya-Watson weights K_h(x - X_i) / sum_j K_h(x - X_j).
// Throws EmptyNeighborhood when every kernel evaluation is zero.
WeightVector nw_weights(std::span<const double> xs, double x, double h,
                        const KernelSpec& spec = {});

}  // namespace npcure
