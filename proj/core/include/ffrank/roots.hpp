#pragma once
// Roots of complex polynomials, degree <= 1 closed form, quadratics by the
// stable formula, everything else by companion-matrix eigenvalues followed by
// a few Newton steps. Degrees here stay tiny (single digits), conditioning is
// not a concern.

#include <complex>
#include <vector>

namespace ffrank {

// roots of sum c[i] z^i, c ascending; leading coefficients below
// 1e-12 * max|c| are dropped first
std::vector<std::complex<double>> poly_roots(const std::vector<std::complex<double>>& c);

// evaluate sum c[i] z^i by Horner
std::complex<double> poly_eval(const std::vector<std::complex<double>>& c,
                               std::complex<double> z);

}  // namespace ffrank
