#pragma once
// Table-driven arithmetic for F_{q^e}. Elements are dense base-q indices of
// their coordinate vectors in the power basis of theta = t mod modulus, so the
// embedded copy of F_q is exactly the indices 0..q-1 and theta itself is index q.
//
// Multiplication runs on log/exp tables against a fixed generator; addition is
// digitwise via two half-width lookup tables. Everything is immutable after
// construction, so concurrent reads need no locking.

#include "ffrank/fq_poly.hpp"

#include <cstdint>
#include <vector>

namespace ffrank {

class GFTable {
 public:
  // defines the field by the first monic irreducible of degree e (dense-index order)
  GFTable(uint32_t q, int e);
  explicit GFTable(const PolyFq& modulus);

  uint32_t q() const { return q_; }
  int e() const { return e_; }
  uint64_t size() const { return n_; }
  const PolyFq& modulus() const { return mod_; }
  PolyFq element_poly(uint32_t idx) const;           // residue with that index
  uint32_t embed(const PolyFq& f) const;             // f mod modulus -> index
  PolyFq generator_poly() const { return element_poly(gen_); }
  uint32_t generator() const { return gen_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    return addlo_[(uint64_t)lo_[a] * qh_ + lo_[b]] + qh_ * addhi_[(uint64_t)hi_[a] * qr_ + hi_[b]];
  }
  uint32_t neg(uint32_t a) const { return neg_[a]; }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg_[b]); }
  uint32_t mul(uint32_t a, uint32_t b) const { return (a && b) ? exp_[(uint64_t)log_[a] + log_[b]] : 0; }
  uint32_t inv(uint32_t a) const;
  uint32_t pow(uint32_t a, uint64_t k) const;
  int chi(uint32_t a) const { return chi_[a]; }      // quadratic character, 0 at 0
  uint32_t cube(uint32_t a) const { return cube_[a]; }
  uint32_t frob(uint32_t a) const { return pow(a, q_); }

  // raw tables for hot kernels
  const std::vector<uint32_t>& exp_table() const { return exp_; }
  const std::vector<uint32_t>& log_table() const { return log_; }
  const std::vector<int8_t>& chi_table() const { return chi_; }
  const std::vector<uint32_t>& cube_table() const { return cube_; }

  // minimal polynomial of element idx over F_q (monic)
  PolyFq min_poly(uint32_t idx) const;

  // root directory for monic irreducibles of degree exactly e: maps the dense
  // index of P's low coefficients (degree < e part) to a root of P here.
  // Built lazily on first call, then cached.
  const std::vector<uint32_t>& root_directory() const;
  uint32_t theta_root(const PolyFq& P) const;  // P monic irreducible of degree e

 private:
  void build();
  uint32_t q_, qh_, qr_;
  int e_;
  uint64_t n_;
  PolyFq mod_;
  uint32_t gen_ = 0;
  std::vector<uint32_t> lo_, hi_, addlo_, addhi_, neg_, exp_, log_, cube_;
  std::vector<int8_t> chi_;
  mutable std::vector<uint32_t> rootdir_;
  mutable bool rootdir_built_ = false;
};

// process-wide registry, built on demand; safe to call from multiple threads
const GFTable& gf_table(uint32_t q, int e);

// sorted monic irreducibles of degree exactly e, generated through the field's
// minimal-polynomial directory (much faster than Rabin over all of M_e)
const std::vector<PolyFq>& primes_of_degree(uint32_t q, int e);

// pre-fill the prime registry from a loaded disk cache (entries are trusted as
// far as max_complete_degree allows)
void seed_primes_from_cache(const PrimeCache& cache);

}  // namespace ffrank
