#include "npcure/numeric.hpp"

#include <cmath>

#include "npcure/errors.hpp"

namespace npcure {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureFailure("adaptive quadrature depth exhausted");
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson(fa, fm, fb, a, b);
    return adaptive(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double derivative1(const std::function<double(double)>& f, double x, double step) {
    const auto central = [&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); };
    const double d1 = central(step);
    const double d2 = central(0.5 * step);
    return (4.0 * d2 - d1) / 3.0;
}

double derivative2(const std::function<double(double)>& f, double x, double step) {
    const double fx = f(x);
    const auto central = [&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); };
    const double d1 = central(step);
    const double d2 = central(0.5 * step);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace npcure
