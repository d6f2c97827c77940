#pragma once
// Exact Dirichlet L-polynomials over F_q[t].
//
// For non-principal chi mod h, L(u,chi) = sum_{f monic} chi(f) u^{deg f} is a
// polynomial of degree < deg h. Coefficients are accumulated as integer
// multiplicities of M-th roots of unity (M = value modulus of the group), so
// cancellation is exact and "zero" really means a rounding-level residue.
//
// The trivial zero at u = 1 is split off structurally: lambda = 1 iff chi is
// even (trivial on scalars). Imprimitive characters can pick up extra zeros at
// u = 1 from Euler factors of primes dividing h but not the conductor; we
// record the observed vanishing order next to the structural lambda instead of
// papering over the difference.

#include "ffrank/characters.hpp"
#include "ffrank/fourier.hpp"

#include <vector>

namespace ffrank {

struct DirichletLPoly {
  DirichletChar chi;
  uint32_t q = 0;
  PolyFq modulus;              // h
  bool primitive = false;
  int lambda = 0;              // structural trivial-zero count: 1 iff chi even
  int vanish_order = 0;        // multiplicity of u = 1 actually observed in L
  bool lambda_mismatch = false;

  std::vector<cplx> coeffs;    // c_0 .. c_{deg h - 1}, c_0 = 1
  std::vector<cplx> lstar;     // L / (1-u)^lambda, trailing ~0 trimmed
  std::vector<cplx> inv_roots; // L*(u) = prod_j (1 - inv_roots[j] u)

  // primitive chi only: inv_roots[j] = sqrt(q) e^{i theta[j]}, checked
  std::vector<double> theta;
  // imprimitive chi: inverse roots split by magnitude, sqrt(q) circle vs the
  // unit-circle zeros contributed by Euler factors at primes P | h, P coprime
  // to the conductor
  std::vector<cplx> rh_inv_roots;
  std::vector<cplx> euler_inv_roots;

  cplx eval(cplx u) const;
};

// Builds L(u,chi), checking on the way that the three coefficients past
// deg h - 1 vanish and that the Euler product over primes reproduces the same
// series. Throws on a principal character or if either check fails.
DirichletLPoly l_polynomial_char(const DirichletGroup& G, const DirichletChar& chi);

enum class SumDomain { monic, all_leading };

// sum of chi over M_k (monic) or over all degree-k polynomials (all_leading)
cplx char_sum_range(const DirichletGroup& G, const DirichletChar& chi, int k,
                    SumDomain dom);

// Explicit formula: for primitive non-principal chi, minus the n-th power-sum
// of the unitarized inverse roots equals lambda/q^{n/2} plus the normalized
// von Mangoldt sum q^{-n/2} sum_{f monic, deg f = n} Lambda(f) chi(f).
struct ThetaTracePair {
  cplx trace;            // sum_j e^{i n theta_j}
  cplx vonmangoldt_side; // lambda/q^{n/2} + q^{-n/2} sum Lambda(f) chi(f)
};
ThetaTracePair theta_traces(const DirichletGroup& G, const DirichletLPoly& Lp, int n);

// sum over monic prime P of degree n of chi(P)/|P|^{1/2}
cplx prime_char_sum(const DirichletGroup& G, const DirichletChar& chi, int n);

// max |L| sampled on the critical circle |u| = q^{-1/2}, against the
// 16^{deg h} q^{0.01 deg h} bound
struct LindelofReport {
  double max_abs = 0.0;
  double bound = 0.0;
  bool ok = false;
};
LindelofReport lindelof_check(const DirichletLPoly& Lp, int samples = 256);

// all non-principal characters mod h, principal-excluded group order, built in
// parallel; order matches G.characters() minus the leading principal entry
std::vector<DirichletLPoly> l_family(const DirichletGroup& G, unsigned threads = 0);

// one row per character: index into G.characters(), conductor, lambda,
// observed vanishing order, re/im coefficient pairs, inverse root moduli,
// max |L| on the critical circle
std::string l_family_csv(const DirichletGroup& G,
                         const std::vector<DirichletLPoly>& fam);

}  // namespace ffrank
