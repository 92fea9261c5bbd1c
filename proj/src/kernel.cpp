#include "npcure/kernel.hpp"

#include <cmath>

#include "npcure/errors.hpp"

namespace npcure {

double kernel_eval(const KernelSpec& spec, double u) {
    switch (spec.kind) {
        case KernelKind::Epanechnikov:
            if (std::abs(u) >= 1.0) return 0.0;
            return 0.75 * (1.0 - u * u);
    }
    return 0.0;
}

KernelConstants kernel_constants(const KernelSpec& spec) {
    switch (spec.kind) {
        case KernelKind::Epanechnikov:
            // int 0.5625 (1-u^2)^2 du = 3/5, int 0.75 u^2 (1-u^2) du = 1/5
            return {0.6, 0.2};
    }
    return {0.0, 0.0};
}

WeightVector nw_weights(std::span<const double> xs, double x, double h,
                        const KernelSpec& spec) {
    if (h <= 0.0) throw DomainError("nw_weights requires h > 0");
    if (xs.empty()) throw DomainError("nw_weights requires a non-empty covariate sequence");
    WeightVector out;
    out.center = x;
    out.bandwidth = h;
    out.weights.resize(xs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double k = kernel_eval(spec, (x - xs[i]) / h);
        out.weights[i] = k;
        total += k;
    }
    if (total <= 0.0) throw EmptyNeighborhood(x, h);
    for (double& w : out.weights) w /= total;
    return out;
}

}  // namespace npcure
