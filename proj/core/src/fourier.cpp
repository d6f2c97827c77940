#include "ffrank/fourier.hpp"

#include "ffrank/gf_table.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ffrank {

namespace {
cplx unit_root(uint64_t j, uint64_t L) { return std::polar(1.0, 2.0 * M_PI * double(j % L) / double(L)); }
}  // namespace

uint32_t hayes_exponent(const PolyFq& A, const PolyFq& H) {
  assert(!H.is_zero());
  if (H.is_monic() && A.degree() < H.degree())
    return A.coeff(H.degree() - 1);
  return laurent_tail(A, H, 1)[0];
}

cplx hayes_e(const PolyFq& A, const PolyFq& H) { return unit_root(hayes_exponent(A, H), A.q); }

PeriodicFn::PeriodicFn(uint32_t q_, PolyFq f_) : q(q_), f(std::move(f_).monic_scaled()) {
  assert(f.degree() >= 1);
  values.assign(size_t(qpow64(q, f.degree())), cplx{});
}

PeriodicFn PeriodicFn::constant_one(uint32_t q, const PolyFq& f) {
  PeriodicFn F(q, f);
  for (auto& v : F.values) v = 1.0;
  return F;
}

PeriodicFn PeriodicFn::indicator_zero(uint32_t q, const PolyFq& f) {
  PeriodicFn F(q, f);
  F.values[0] = 1.0;
  return F;
}

PeriodicFn PeriodicFn::from_character(const DirichletGroup& G, const DirichletChar& chi) {
  PeriodicFn F(G.q(), G.modulus());
  int n = F.f.degree();
  for (uint64_t i = 0; i < F.values.size(); i++)
    F.values[i] = G.value(chi, poly_below_deg(G.q(), n, i)).to_complex();
  return F;
}

PeriodicFn PeriodicFn::random(uint32_t q, const PolyFq& f, uint64_t seed) {
  PeriodicFn F(q, f);
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return double(rng() >> 11) * 0x1p-53; };
  for (auto& v : F.values) v = cplx(2 * u01() - 1, 2 * u01() - 1);
  return F;
}

cplx PeriodicFn::at(const PolyFq& g) const { return values[size_t((g % f).dense_index())]; }

namespace {

// Neumaier-compensated complex accumulator. The summation identities get
// checked at 1e-9 absolute on sums of thousands of O(1) terms; plain
// accumulation drifts past that around q = 7, deg f = 4.
struct CompensatedSum {
  double re = 0, im = 0, cre = 0, cim = 0;
  void add(const cplx& z) {
    double x = z.real(), t = re + x;
    cre += std::abs(re) >= std::abs(x) ? (re - t) + x : (x - t) + re;
    re = t;
    double y = z.imag(), u = im + y;
    cim += std::abs(im) >= std::abs(y) ? (im - u) + y : (y - u) + im;
    im = u;
  }
  cplx value() const { return {re + cre, im + cim}; }
};

}  // namespace

cplx fourier_transform(const PeriodicFn& F, const PolyFq& u) {
  const int n = F.f.degree();
  PolyFq ur = u % F.f;
  // accumulate per q-th-root exponent so unity values stay exact
  std::vector<CompensatedSum> bucket(F.q);
  for (uint64_t i = 0; i < F.values.size(); i++) {
    PolyFq V = poly_below_deg(F.q, n, i);
    bucket[(ur * V % F.f).coeff(n - 1)].add(F.values[i]);
  }
  CompensatedSum tot;
  for (uint32_t j = 0; j < F.q; j++) tot.add(bucket[j].value() * unit_root(j, F.q));
  return tot.value();
}

namespace {

// every V with deg V <= bound (including V = 0), bound may be negative
std::vector<PolyFq> low_degree_polys(uint32_t q, int bound) {
  std::vector<PolyFq> out{PolyFq::zero(q)};
  for (int d = 0; d <= bound; d++)
    for (uint64_t i = 0; i < (q - 1) * qpow64(q, d); i++) out.push_back(all_leading_by_index(q, d, i));
  return out;
}

}  // namespace

TwoSides poisson_monic(const PeriodicFn& F, int m) {
  assert(m >= 1);
  const uint32_t q = F.q;
  const int n = F.f.degree();
  CompensatedSum lhs, rhs;
  for (uint64_t i = 0; i < qpow64(q, m); i++) lhs.add(F.at(monic_by_index(q, m, i)));
  PolyFq tm = PolyFq::monomial(q, m);
  for (const PolyFq& V : low_degree_polys(q, n - m - 1)) {
    uint32_t ph = negq(hayes_exponent(V * tm % F.f, F.f), q);
    rhs.add(fourier_transform(F, V) * unit_root(ph, q));
  }
  double scale = double(qpow64(q, m)) / double(qpow64(q, n));
  return {lhs.value(), rhs.value() * scale};
}

TwoSides poisson_all(const PeriodicFn& F, int m) {
  assert(m >= 1);
  const uint32_t q = F.q;
  const int n = F.f.degree();
  CompensatedSum lhs, rhs;
  for (uint64_t i = 0; i < (q - 1) * qpow64(q, m); i++) lhs.add(F.at(all_leading_by_index(q, m, i)));
  for (const PolyFq& V : low_degree_polys(q, n - m - 1)) {
    // kNegInfDeg makes V = 0 fall in the strict-inequality class for every m
    double w = V.degree() == n - m - 1 ? -1.0 : double(q - 1);
    rhs.add(w * fourier_transform(F, V));
  }
  double scale = double(qpow64(q, m)) / double(qpow64(q, n));
  return {lhs.value(), rhs.value() * scale};
}

cplx gauss_sum(const DirichletGroup& G, const DirichletChar& chi, const PolyFq& u) {
  const uint32_t q = G.q();
  const PolyFq& f = G.modulus();
  const int n = f.degree();
  const uint64_t L = std::lcm((uint64_t)G.value_modulus(), (uint64_t)q);
  PolyFq ur = u % f;
  std::vector<int64_t> bucket(L, 0);
  for (uint64_t i = 0; i < qpow64(q, n); i++) {
    PolyFq V = poly_below_deg(q, n, i);
    CharValue cv = G.value(chi, V);
    if (cv.zero) continue;
    uint64_t j = (uint64_t)cv.k * (L / cv.m) + (uint64_t)(ur * V % f).coeff(n - 1) * (L / q);
    bucket[j % L]++;
  }
  cplx tot = 0;
  for (uint64_t j = 0; j < L; j++)
    if (bucket[j]) tot += double(bucket[j]) * unit_root(j, L);
  return tot;
}

cplx gauss_quadratic_brute(const PolyFq& P) {
  const uint32_t q = P.q;
  const int d = P.degree();
  const GFTable& F = gf_table(q, d);
  const uint32_t th = F.theta_root(P);
  // W(theta) tracked incrementally as the dense index of W ticks through digits
  std::vector<uint32_t> thpow(d);
  for (int j = 0; j < d; j++) thpow[j] = F.pow(th, j);
  std::vector<int64_t> bucket(2 * q, 0);  // (sign, exponent)
  std::vector<uint32_t> digits(d, 0);
  uint32_t val = 0;
  const uint64_t total = qpow64(q, d);
  for (uint64_t i = 0;; i++) {
    int s = F.chi(val);
    if (s) bucket[(s > 0 ? 0 : q) + digits[d - 1]]++;
    if (i + 1 == total) break;
    int j = 0;
    while (digits[j] + 1 == q) { digits[j] = 0; j++; }
    digits[j]++;
    // stepping digit j by +1 adds theta^j; wrapped digits below each subtracted (q-1) theta^i,
    // which is the same as adding theta^i once
    val = F.add(val, thpow[j]);
    for (int i2 = 0; i2 < j; i2++) val = F.add(val, thpow[i2]);
  }
  cplx tot = 0;
  for (uint32_t jj = 0; jj < q; jj++)
    tot += (double(bucket[jj]) - double(bucket[q + jj])) * unit_root(jj, q);
  return tot;
}

cplx gauss_sum_prime_closed(const PolyFq& V, const PolyFq& P) {
  return std::sqrt(double(qpow64(P.q, P.degree()))) * double(quad_symbol(V, P));
}

cplx gauss_epsilon(const PolyFq& P) {
  return gauss_quadratic_brute(P) / gauss_sum_prime_closed(PolyFq::one(P.q), P);
}

cplx ec_fourier_brute(const PolyFq& alpha, const PolyFq& beta, const PolyFq& P) {
  const uint32_t q = P.q;
  const int d = P.degree();
  const uint64_t R = qpow64(q, d);
  const GFTable& F = gf_table(q, d);
  const uint32_t th = F.theta_root(P);
  // residue index -> field element at theta
  std::vector<uint32_t> at(R);
  for (uint64_t i = 0; i < R; i++) {
    PolyFq W = poly_below_deg(q, d, i);
    uint32_t v = 0;
    for (int j = W.degree(); j >= 0; j--) v = F.add(F.mul(v, th), W.coeff(j));
    at[i] = v;
  }
  // F(A,B) = sum_x chi(x^3 + A x + B)
  std::vector<int64_t> FAB(R * R, 0);
  for (uint64_t xa = 0; xa < R; xa++) {
    uint32_t x = at[xa], x3 = F.cube(x);
    for (uint64_t ia = 0; ia < R; ia++) {
      uint32_t ax = F.add(x3, F.mul(at[ia], x));
      int64_t* row = &FAB[ia * R];
      for (uint64_t ib = 0; ib < R; ib++) row[ib] += F.chi(F.add(ax, at[ib]));
    }
  }
  PolyFq ar = alpha % P, br = beta % P;
  std::vector<cplx> bucket(q, cplx{});
  for (uint64_t ia = 0; ia < R; ia++) {
    PolyFq aA = ar * poly_below_deg(q, d, ia) % P;
    for (uint64_t ib = 0; ib < R; ib++) {
      PolyFq s = aA + br * poly_below_deg(q, d, ib) % P;
      bucket[(s % P).coeff(d - 1)] += double(FAB[ia * R + ib]);
    }
  }
  cplx tot = 0;
  for (uint32_t j = 0; j < q; j++) tot += bucket[j] * unit_root(j, q);
  return tot;
}

cplx ec_fourier_closed(const PolyFq& alpha, const PolyFq& beta, const PolyFq& P) {
  int s = quad_symbol(beta, P);
  if (!s) return 0;
  PolyFq bbar = inv_mod(beta, P);
  PolyFq arg = -(alpha * alpha % P) * (alpha * bbar % P) % P * bbar % P;
  double mag = std::pow(double(qpow64(P.q, P.degree())), 1.5);
  return mag * double(s) * unit_root(hayes_exponent(arg % P, P), P.q);
}

ReciprocityWitness elementary_reciprocity(const PolyFq& alpha, const PolyFq& beta) {
  if (alpha.is_zero() || beta.is_zero() || !gcd(alpha, beta).is_one())
    throw std::invalid_argument("elementary_reciprocity: inputs must be nonzero and coprime");
  const uint32_t q = alpha.q;
  ReciprocityWitness w;
  w.alpha_bar = beta.degree() >= 1 ? inv_mod(alpha, beta) : PolyFq::zero(q);
  // beta betabar = 1 - alpha alphabar continued mod alpha
  PolyFq num = PolyFq::one(q) - alpha * w.alpha_bar;
  auto [quo, rem] = divrem(num, beta);
  assert(rem.is_zero());
  w.beta_bar = alpha.degree() >= 1 ? quo % alpha : quo;
  PolyFq check = (alpha * w.alpha_bar + beta * w.beta_bar - PolyFq::one(q)) % (alpha * beta);
  w.identity_ok = check.is_zero();
  return w;
}

bool reciprocity_phase_check(const PolyFq& alpha, const PolyFq& beta, const PolyFq& X) {
  ReciprocityWitness w = elementary_reciprocity(alpha, beta);
  if (!w.identity_ok) return false;
  uint32_t lhs = hayes_exponent(X, alpha * beta);
  uint32_t rhs = addq(hayes_exponent(X * w.alpha_bar, beta), hayes_exponent(X * w.beta_bar, alpha), X.q);
  return lhs == rhs;
}

MixedSum mixed_char_sum(uint32_t q, int n, int k, int l, uint32_t a, uint64_t budget) {
  assert(n >= 1 && k >= 1 && l >= 1 && a % q != 0);
  uint64_t work = qpow64(q, n + k + 2 * l);
  if (work > budget) throw std::runtime_error("mixed_char_sum: budget exceeded");
  const auto& primes = primes_of_degree(q, n);
  std::vector<int64_t> bucket(2 * q, 0);
  uint64_t terms = 0;
  PolyFq ac = PolyFq::constant(q, a);
  for (uint64_t wi = 0; wi < (q - 1) * qpow64(q, l); wi++) {
    PolyFq W = all_leading_by_index(q, l, wi);
    PolyFq W2 = W * W;
    for (const PolyFq& P : primes) {
      if (!gcd(P, W).is_one()) continue;  // (W/P) = 0
      int s = quad_symbol(W, P);
      PolyFq pbar = inv_mod(P, W2);
      for (uint64_t vi = 0; vi < qpow64(q, k); vi++) {
        PolyFq av = ac * monic_by_index(q, k, vi);
        PolyFq num = (av * av % W2) * av % W2 * pbar % W2;
        uint32_t ph = hayes_exponent(num, W2);
        bucket[(s > 0 ? 0 : q) + ph]++;  // sign of -(W/P) folded below
        terms++;
      }
    }
  }
  cplx tot = 0;
  for (uint32_t j = 0; j < q; j++)
    tot += (double(bucket[q + j]) - double(bucket[j])) * unit_root(j, q);
  MixedSum out;
  out.value = tot * std::pow(double(q), -0.5 * n);
  const double eps = 0.01;
  out.bound = std::pow(q, eps * l) *
              (std::pow(q, k + 2) + std::pow(16.0, l) * std::pow(q, n / 2.0 + 2 + k / 2.0) +
               std::pow(16.0, l) * std::pow(q, 2.0 * l + 2 + k / 2.0));
  out.terms = terms;
  return out;
}

}  // namespace ffrank
