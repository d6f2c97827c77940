#pragma once
// Dense polynomials over F_q[t], q an odd prime, plus the enumeration and
// irreducibility machinery everything else is built on.
//
// Degree of the zero polynomial is kNegInfDeg (INT_MIN), which behaves as
// -infinity under comparison. Do not replace it with -1: conditions like
// deg V < n-m-1 must hold for V=0 even when n-m-1 is negative.

#include <climits>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ffrank {

inline constexpr int kNegInfDeg = INT_MIN;

inline uint32_t addq(uint32_t a, uint32_t b, uint32_t q) { uint32_t s = a + b; return s >= q ? s - q : s; }
inline uint32_t subq(uint32_t a, uint32_t b, uint32_t q) { return a >= b ? a - b : a + q - b; }
inline uint32_t negq(uint32_t a, uint32_t q) { return a ? q - a : 0; }
inline uint32_t mulq(uint32_t a, uint32_t b, uint32_t q) { return uint32_t((uint64_t)a * b % q); }
uint32_t powq(uint32_t a, uint64_t e, uint32_t q);
inline uint32_t invq(uint32_t a, uint32_t q) { return powq(a, q - 2, q); }

// q^n as uint64, asserting no overflow past 2^62
uint64_t qpow64(uint32_t q, int n);

struct PolyFq {
  uint32_t q = 0;
  std::vector<uint32_t> c;  // ascending, normalized: c.empty() or c.back() != 0

  PolyFq() = default;
  PolyFq(uint32_t q_, std::vector<uint32_t> coeffs);

  static PolyFq zero(uint32_t q) { return PolyFq(q, {}); }
  static PolyFq one(uint32_t q) { return PolyFq(q, {1}); }
  static PolyFq constant(uint32_t q, uint32_t a) { return PolyFq(q, {a % q}); }
  static PolyFq t(uint32_t q) { return PolyFq(q, {0, 1}); }
  static PolyFq monomial(uint32_t q, int k, uint32_t a = 1);

  int degree() const { return c.empty() ? kNegInfDeg : int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  uint32_t lead() const { return c.empty() ? 0 : c.back(); }
  uint32_t coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : 0; }
  uint32_t eval(uint32_t x) const;

  void normalize();
  PolyFq monic_scaled() const;  // divide by leading coefficient (zero stays zero)

  std::string to_string() const;                      // "1,3,1" = 1 + 3t + t^2; zero is "0"
  static PolyFq parse(uint32_t q, const std::string& s);

  // dense index of the coefficient vector in base q, little-endian; asserts fit
  uint64_t dense_index() const;

  bool operator==(const PolyFq& o) const { return q == o.q && c == o.c; }
  bool operator!=(const PolyFq& o) const { return !(*this == o); }
  bool operator<(const PolyFq& o) const;  // by degree, then coefficients from the top
};

struct PolyHash {
  size_t operator()(const PolyFq& f) const {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t x : f.c) { h ^= x; h *= 1099511628211ull; }
    return size_t(h ^ (h >> 32));
  }
};

PolyFq operator+(const PolyFq& a, const PolyFq& b);
PolyFq operator-(const PolyFq& a, const PolyFq& b);
PolyFq operator-(const PolyFq& a);
PolyFq operator*(const PolyFq& a, const PolyFq& b);
PolyFq operator*(uint32_t s, const PolyFq& a);
PolyFq operator%(const PolyFq& a, const PolyFq& b);

// quotient and remainder, deg r < deg b; b must be nonzero
std::pair<PolyFq, PolyFq> divrem(const PolyFq& a, const PolyFq& b);
PolyFq shift(const PolyFq& a, int k);  // multiply by t^k, k >= 0
PolyFq derivative(const PolyFq& a);
PolyFq gcd(PolyFq a, PolyFq b);  // monic unless both zero
// g = u*a + v*b with g monic (unless both zero)
struct XgcdResult { PolyFq g, u, v; };
XgcdResult xgcd(const PolyFq& a, const PolyFq& b);
PolyFq inv_mod(const PolyFq& a, const PolyFq& m);  // asserts gcd == 1
PolyFq powmod(PolyFq base, uint64_t e, const PolyFq& m);

// exact valuation: largest e with P^e | f (f nonzero); also returns f / P^e
int valuation(const PolyFq& f, const PolyFq& P, PolyFq* cofactor = nullptr);

// Rabin test: t^{q^n} == t mod f, and gcd(t^{q^{n/l}} - t, f) = 1 for primes l | n
bool is_irreducible(const PolyFq& f);

// number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^{n/d}
uint64_t irreducible_count(uint32_t q, int n);

// enumeration by dense index
PolyFq poly_below_deg(uint32_t q, int n, uint64_t idx);        // deg < n, idx < q^n
PolyFq monic_by_index(uint32_t q, int n, uint64_t idx);        // monic deg n, idx < q^n
PolyFq all_leading_by_index(uint32_t q, int n, uint64_t idx);  // deg n any lead, idx < (q-1)q^n

// all monic irreducibles of degree n via Rabin over M_n; reference path, fine for small n
std::vector<PolyFq> irreducibles_rabin(uint32_t q, int n);

// squarefree-distinct-equal degree factorization; primes monic, sorted, exponents > 0.
// Deterministic: equal-degree splitting draws from a generator seeded by f itself.
struct FactorExp { PolyFq p; int e; };
std::vector<FactorExp> factorize(const PolyFq& f);

// Laurent tail of A/H at infinity: coefficients of t^{-1}, ..., t^{-kmax}.
// H nonzero, not necessarily monic; polynomial part is discarded.
std::vector<uint32_t> laurent_tail(const PolyFq& A, const PolyFq& H, int kmax);

// prime list cache files: header "ffrank-primes v1 q=<q>", then one canonical
// polynomial per line, sorted by (degree, dense index). A degree is trusted only
// if its line count matches irreducible_count.
struct PrimeCache {
  uint32_t q = 0;
  std::vector<std::vector<PolyFq>> by_degree;  // [0] unused
  int max_complete_degree() const;
};
std::string prime_cache_path(const std::string& dir, uint32_t q);
bool save_prime_cache(const PrimeCache& cache, const std::string& path);
// returns nullopt if missing or malformed beyond salvage; complains to stderr on corruption
std::optional<PrimeCache> load_prime_cache(uint32_t q, const std::string& path);

}  // namespace ffrank
