#ifndef KHI_QUADRATURE_HPP
#define KHI_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace khi {

// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-300,
                 int max_depth = 48);

}  // namespace khi

#endif  // KHI_QUADRATURE_HPP
