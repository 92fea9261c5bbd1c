#pragma once

#include <functional>

namespace npcure {

// Adaptive Simpson quadrature with absolute tolerance. Throws
// QuadratureFailure when the tolerance cannot be met within the depth budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 60);

// Central finite differences with one step of Richardson extrapolation.
double derivative1(const std::function<double(double)>& f, double x, double step);
double derivative2(const std::function<double(double)>& f, double x, double step);

}  // namespace npcure
