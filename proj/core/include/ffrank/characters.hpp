#pragma once
// Multiplicative characters of (F_q[t]/h)^*, with exactly represented values.
//
// The unit group is assembled per prime-power factor of h: a lifted generator
// of the residue field gives the cyclic part, and the 1-units form an
// elementary abelian p-group when e <= p (we reject e > p, which never occurs
// at the scales this laboratory runs). The chosen basis is certified by
// enumerating all products and checking they hit each unit exactly once, so a
// wrong basis cannot slip through.

#include "ffrank/fq_poly.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace ffrank {

// quadratic residue symbol (f/P) via the Euler criterion; 0 if P | f
int quad_symbol(const PolyFq& f, const PolyFq& P);

// Jacobi extension to monic D, computed by reciprocity descent without
// factoring D: (A/B)(B/A) = (-1)^{(q-1)/2 deg A deg B} for monic coprime A, B,
// and scalars satisfy (c/D) = legendre(c)^{deg D}
int jacobi_symbol(const PolyFq& f, const PolyFq& D);
int legendre(uint32_t c, uint32_t q);

// value exp(2 pi i k / m), or zero
struct CharValue {
  bool zero = true;
  uint32_t k = 0;
  uint32_t m = 1;
  std::complex<double> to_complex() const;
  bool is_one() const { return !zero && k == 0; }
};

struct DirichletChar {
  std::vector<uint32_t> a;  // exponent on each basis generator, in group order
};

class DirichletGroup {
 public:
  DirichletGroup(uint32_t q, const PolyFq& h);

  uint32_t q() const { return q_; }
  const PolyFq& modulus() const { return h_; }
  uint64_t unit_count() const { return phi_; }
  uint32_t value_modulus() const { return M_; }  // every value is an M-th root of unity

  // all Phi(h) characters, principal first, in odometer order over the basis
  std::vector<DirichletChar> characters() const;
  DirichletChar principal() const;
  // the order-2 character when the modulus is prime
  DirichletChar quadratic_character() const;

  CharValue value(const DirichletChar& chi, const PolyFq& f) const;
  bool is_principal(const DirichletChar& chi) const;
  uint32_t char_order(const DirichletChar& chi) const;
  bool is_even(const DirichletChar& chi) const;  // trivial on scalars F_q^*
  PolyFq conductor(const DirichletChar& chi) const;
  bool is_primitive(const DirichletChar& chi) const { return conductor(chi) == h_; }
  // exponents of the primitive character mod conductor(chi) that induces chi
  DirichletChar restrict_to(const DirichletGroup& smaller, const DirichletChar& chi) const;

  struct LocalFactor {
    PolyFq P;
    int e = 1;
    PolyFq Pe;
    uint64_t size = 0;                          // q^{e deg P}, dense residue count
    std::vector<PolyFq> gens;
    std::vector<uint32_t> orders;
    std::vector<std::vector<uint32_t>> dlogs;   // [gen][residue index], UINT32_MAX off units
  };
  const std::vector<LocalFactor>& factors() const { return factors_; }
  size_t basis_size() const { return total_gens_; }

 private:
  uint32_t q_;
  PolyFq h_;
  uint64_t phi_ = 1;
  uint32_t M_ = 1;
  size_t total_gens_ = 0;
  std::vector<LocalFactor> factors_;
  std::vector<uint32_t> weight_;  // per generator: M / order, premultiplied for value()
};

}  // namespace ffrank
