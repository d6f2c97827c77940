#pragma once
// Elliptic surfaces y^2 = x^3 + A(t) x + B(t) over F_q(t), q >= 5: reduction
// data at every place including infinity, conductor, exact integer
// L-polynomial with functional equation and analytic rank, and the
// prime-vs-zero power sum identities.
//
// q >= 5 keeps everything tame: minimalization is just stripping P^4 | A,
// P^6 | B, conductor exponents stop at 2, and no Tate algorithm is needed.

#include "ffrank/fq_poly.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ffrank {

// -16(4A^3 + 27B^2); throws on the singular locus
PolyFq ec_discriminant(const PolyFq& A, const PolyFq& B);

enum class RedType { good, split_mult, nonsplit_mult, additive };
const char* red_type_name(RedType t);

struct ReductionDatum {
  PolyFq place;             // monic prime; for infinity, the prime s of the flipped model
  bool at_infinity = false;
  RedType type = RedType::good;
  int64_t aP = 0;           // good: the trace; multiplicative: +-1; additive: 0
  int fP = 0;               // conductor exponent
  int minimal_steps = 0;    // (A,B) <- (A/P^4, B/P^6) count
};

// classify E at the finite place P, minimalizing first
ReductionDatum reduction_type(uint32_t q, const PolyFq& A, const PolyFq& B,
                              const PolyFq& P);
// classify at infinity: flip t -> 1/s with twist scale k = max(ceil(degA/4),
// ceil(degB/6)), then run the same criteria at the place s
ReductionDatum infinity_reduction(uint32_t q, const PolyFq& A, const PolyFq& B);

// a_P = |P| + 1 - #E(F_P) at a place of good reduction (minimalizes first;
// throws if the reduction is bad). Point count by quadratic-character table.
int64_t trace_aP(uint32_t q, const PolyFq& A, const PolyFq& B, const PolyFq& P);

struct EllipticSurface {
  uint32_t q = 0;
  PolyFq A, B;
  PolyFq delta;
  // every place dividing delta, whatever the outcome; places that minimalize
  // to good reduction carry their minimal-model trace here
  std::vector<ReductionDatum> finite_special;
  std::vector<ReductionDatum> finite_bad;  // the fP >= 1 subset, sorted
  ReductionDatum infinity;                 // always present, possibly good
  PolyFq M_fin, A_fin;                     // finite multiplicative/additive parts
  int deg_M = 0, deg_A = 0, deg_N = 0;     // infinity counted with degree 1

  EllipticSurface(uint32_t q, PolyFq A, PolyFq B);
  int N() const { return deg_N - 4; }  // degree of the L-polynomial

  // a_P over every prime of degree d in primes_of_degree order, computed by
  // the table kernel on (A, B) directly; entries at finite_special places are
  // meaningless and must be overridden by the stored datum. Cached per curve.
  const std::vector<int64_t>& good_traces(int d) const;

 private:
  mutable std::shared_ptr<struct TraceCache> trace_cache_;
};

struct ECLPolynomial {
  uint32_t q = 0;
  int N = 0;
  std::vector<int64_t> c;  // c_0..c_N, exact
  int epsilon = 1;
  int analytic_rank = 0;   // multiplicity of the exact integer factor (1-qu)
  std::vector<std::complex<double>> mu;  // inverse roots, |mu_i| = q
};

// Full Euler product over every place of degree <= N+3; the three
// coefficients past N must vanish exactly in integer arithmetic and the
// functional equation must hold, else this throws. Curves with deg N_E < 4
// are rejected with a diagnostic.
ECLPolynomial l_polynomial_ec(const EllipticSurface& E);

// Functional-equation shortcut: coefficients up to floor(N/2) from the Euler
// product, the rest by palindrome; epsilon resolved by computing one extra
// coefficient directly whenever the half set leaves it ambiguous. Same output
// as l_polynomial_ec, without the degree-(N+3) tail work.
ECLPolynomial l_polynomial_ec_fast(const EllipticSurface& E);

// largest r with (1-qu)^r | L exactly over the integers
int analytic_rank_of(const std::vector<int64_t>& c, uint32_t q);

// Lemma-style power sums of unitarized zeros against prime sums.
// lhs = (1/n) sum (mu_i/q)^n; rhs_full the exact all-places identity;
// rhs_k1_half keeps only the k=1 good-prime term with the empirical sign
// plus 1/2 on even n.
struct PowerSumTriple {
  double lhs = 0.0;
  double rhs_full = 0.0;
  double rhs_k1_half = 0.0;
};
PowerSumTriple zero_power_sums(const EllipticSurface& E, const ECLPolynomial& Lp,
                               int n);

// exact integer power sums p_j = sum_i mu_i^j, j = 0..n_max, by Newton's
// identity on the coefficients (robust where floating zeros are not)
std::vector<int64_t> newton_power_sums(const ECLPolynomial& Lp, int n_max);

// {q, A, B, degN_E, places (bad finite + infinity), L, epsilon, analytic_rank};
// indent as in nlohmann dump, -1 for one-line records
std::string curve_json(const EllipticSurface& E, const ECLPolynomial& Lp,
                       int indent = 2);

}  // namespace ffrank
