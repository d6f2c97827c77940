#pragma once
// The additive exponential e(A/H), Fourier transforms of periodic functions
// mod f, the two Poisson summation identities (monic sums and all-leading
// sums), quadratic Gauss sums with their closed form, the elliptic family
// transform, elementary reciprocity, and the mixed character sum.
//
// Every root of unity is tracked by its exact integer exponent; floating point
// enters only in the final accumulation.

#include "ffrank/characters.hpp"
#include "ffrank/fq_poly.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace ffrank {

using cplx = std::complex<double>;

// exponent of e(A/H) as a q-th root of unity: the t^{-1} Laurent coefficient
uint32_t hayes_exponent(const PolyFq& A, const PolyFq& H);
cplx hayes_e(const PolyFq& A, const PolyFq& H);

struct PeriodicFn {
  uint32_t q = 0;
  PolyFq f;                  // monic, deg >= 1
  std::vector<cplx> values;  // dense residue index, length |f|

  PeriodicFn() = default;
  PeriodicFn(uint32_t q_, PolyFq f_);
  static PeriodicFn constant_one(uint32_t q, const PolyFq& f);
  static PeriodicFn indicator_zero(uint32_t q, const PolyFq& f);
  static PeriodicFn from_character(const DirichletGroup& G, const DirichletChar& chi);
  static PeriodicFn random(uint32_t q, const PolyFq& f, uint64_t seed);
  cplx at(const PolyFq& g) const;
};

// Fhat(u; f) = sum_{V mod f} F(V) e(uV/f)
cplx fourier_transform(const PeriodicFn& F, const PolyFq& u);

struct TwoSides {
  cplx lhs, rhs;
};
// monic sums: lhs = sum_{g in M_m} F(g),
// rhs = (q^m/|f|) sum_{deg V <= n-m-1} Fhat(V) e(-V t^m/f); V = 0 always included
TwoSides poisson_monic(const PeriodicFn& F, int m);
// all-leading sums: lhs over polynomials of degree exactly m with any leading
// coefficient; rhs weights -1 at deg V = n-m-1 and (q-1) at deg V < n-m-1,
// with no exponential phase. V = 0 sits in the second class for every m.
TwoSides poisson_all(const PeriodicFn& F, int m);

// generalized Gauss sum sum_{V mod f} chi(V) e(uV/f), exact exponent buckets
cplx gauss_sum(const DirichletGroup& G, const DirichletChar& chi, const PolyFq& u);
// fast direct sum for the quadratic character of prime P at u = 1, via field tables
cplx gauss_quadratic_brute(const PolyFq& P);
// |P|^{1/2} (V/P); exact for q = 1 mod 4
cplx gauss_sum_prime_closed(const PolyFq& V, const PolyFq& P);
// measured unit ratio brute/closed at V = 1 (interesting for q = 3 mod 4)
cplx gauss_epsilon(const PolyFq& P);

// elliptic family transform mod prime P:
//   F(A,B) = sum_x (x^3+Ax+B / P),  Fhat(alpha,beta) = sum_{A,B} F(A,B) e((alpha A + beta B)/P)
cplx ec_fourier_brute(const PolyFq& alpha, const PolyFq& beta, const PolyFq& P);
// closed form |P|^{3/2} (beta/P) e(-alpha^3 betabar^2 / P), zero when P | beta
cplx ec_fourier_closed(const PolyFq& alpha, const PolyFq& beta, const PolyFq& P);

// alpha alphabar + beta betabar = 1 mod alpha*beta, so that
// e(X/(alpha beta)) = e(X alphabar / beta) e(X betabar / alpha)
struct ReciprocityWitness {
  PolyFq alpha_bar, beta_bar;
  bool identity_ok = false;
};
ReciprocityWitness elementary_reciprocity(const PolyFq& alpha, const PolyFq& beta);
bool reciprocity_phase_check(const PolyFq& alpha, const PolyFq& beta, const PolyFq& X);

// sum over monic primes P of degree n, monic V of degree k, all W of degree l:
//   |P|^{-1/2} * -(W/P) e((aV)^3 Pbar / W^2),  Pbar the inverse of P mod W^2
struct MixedSum {
  cplx value;
  double bound = 0;  // q^{eps l} (q^{k+2} + 16^l q^{n/2+2+k/2} + 16^l q^{2l+2+k/2}), eps = 0.01
  uint64_t terms = 0;
};
MixedSum mixed_char_sum(uint32_t q, int n, int k, int l, uint32_t a, uint64_t budget = 100000000);

}  // namespace ffrank
