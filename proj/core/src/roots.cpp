#include "ffrank/roots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ffrank {

using cd = std::complex<double>;

cd poly_eval(const std::vector<cd>& c, cd z) {
  cd v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

namespace {

cd poly_deriv_eval(const std::vector<cd>& c, cd z) {
  cd v = 0.0;
  for (size_t i = c.size(); i-- > 1;) v = v * z + double(i) * c[i];
  return v;
}

void newton_polish(const std::vector<cd>& c, cd& r) {
  for (int it = 0; it < 8; it++) {
    cd f = poly_eval(c, r);
    cd df = poly_deriv_eval(c, r);
    if (std::abs(df) < 1e-300) break;
    cd step = f / df;
    r -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(r))) break;
  }
}

}  // namespace

std::vector<cd> poly_roots(const std::vector<cd>& c_in) {
  std::vector<cd> c = c_in;
  double mx = 0.0;
  for (const cd& x : c) mx = std::max(mx, std::abs(x));
  if (mx == 0.0) throw std::invalid_argument("poly_roots: zero polynomial");
  while (c.size() > 1 && std::abs(c.back()) < 1e-12 * mx) c.pop_back();

  std::vector<cd> roots;
  // factor out z = 0 roots exactly
  size_t z0 = 0;
  while (z0 + 1 < c.size() && std::abs(c[z0]) < 1e-14 * mx) z0++;
  roots.assign(z0, cd(0.0, 0.0));
  c.erase(c.begin(), c.begin() + z0);

  size_t n = c.size() - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  if (n == 2) {
    cd a = c[2], b = c[1], cc = c[0];
    cd disc = std::sqrt(b * b - 4.0 * a * cc);
    // pick the sign that avoids cancellation in -b -+ disc
    cd qq = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc)
                                                    : -0.5 * (b - disc);
    if (std::abs(qq) > 1e-300) {
      roots.push_back(qq / a);
      roots.push_back(cc / qq);
    } else {
      roots.push_back(cd(0.0, 0.0));
      roots.push_back(-b / a);
    }
    return roots;
  }

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(long(n), long(n));
  for (size_t i = 0; i + 1 < n; i++) comp(long(i) + 1, long(i)) = 1.0;
  for (size_t i = 0; i < n; i++) comp(long(i), long(n) - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("poly_roots: eigensolver failed");
  for (long i = 0; i < long(n); i++) {
    cd r = es.eigenvalues()(i);
    newton_polish(c, r);
    roots.push_back(r);
  }
  return roots;
}

}  // namespace ffrank
