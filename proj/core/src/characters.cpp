#include "ffrank/characters.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ffrank {

int legendre(uint32_t c, uint32_t q) {
  c %= q;
  if (!c) return 0;
  uint32_t r = powq(c, (q - 1) / 2, q);
  return r == 1 ? 1 : -1;
}

int quad_symbol(const PolyFq& f, const PolyFq& P) {
  assert(P.is_monic() && P.degree() >= 1);
  PolyFq r = f % P;
  if (r.is_zero()) return 0;
  uint64_t e = (qpow64(P.q, P.degree()) - 1) / 2;
  PolyFq s = powmod(r, e, P);
  assert(s.degree() == 0);
  return s.c[0] == 1 ? 1 : -1;
}

int jacobi_symbol(const PolyFq& f, const PolyFq& D) {
  assert(D.is_monic());
  const uint32_t q = D.q;
  PolyFq A = f % D, B = D;
  int sign = 1;
  while (true) {
    if (B.is_one()) return sign;
    if (A.is_zero()) return 0;
    if (A.degree() == 0) {
      // scalar numerator: (c/B) = legendre(c)^{deg B}
      return (B.degree() % 2) ? sign * legendre(A.c[0], q) : sign;
    }
    // peel the leading unit: (c A1 / B) = legendre(c)^{deg B} (A1 / B)
    uint32_t c = A.lead();
    if (c != 1 && (B.degree() % 2) && legendre(c, q) == -1) sign = -sign;
    A = A.monic_scaled();
    // reciprocity for monic A, B
    if ((((uint64_t)(q - 1) / 2) * A.degree() * B.degree()) % 2) sign = -sign;
    std::swap(A, B);
    A = A % B;
  }
}

std::complex<double> CharValue::to_complex() const {
  if (zero) return {0.0, 0.0};
  return std::polar(1.0, 2.0 * M_PI * double(k) / double(m));
}

namespace {

uint64_t order_of_unit(const PolyFq& g, const PolyFq& mod, uint64_t group_order,
                       const std::vector<uint64_t>& prime_factors) {
  uint64_t ord = group_order;
  for (uint64_t p : prime_factors)
    while (ord % p == 0 && powmod(g, ord / p, mod).is_one()) ord /= p;
  return ord;
}

std::vector<uint64_t> prime_factors_u64(uint64_t m) {
  std::vector<uint64_t> out;
  for (uint64_t p = 2; p * p <= m; p++)
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) out.push_back(m);
  return out;
}

}  // namespace

DirichletGroup::DirichletGroup(uint32_t q, const PolyFq& h) : q_(q), h_(h.monic_scaled()) {
  if (h_.degree() < 1) throw std::invalid_argument("modulus must have degree >= 1");
  if (qpow64(q, h_.degree()) > (uint64_t(1) << 22))
    throw std::invalid_argument("modulus too large");
  auto fac = factorize(h_);
  for (const auto& [P, e] : fac) {
    if (e > (int)q)
      throw std::invalid_argument("prime power P^e with e > p in modulus: 1-units are not "
                                  "elementary abelian there; unsupported");
    LocalFactor L;
    L.P = P;
    L.e = e;
    L.Pe = P;
    for (int i = 1; i < e; i++) L.Pe = L.Pe * P;
    int d = P.degree();
    L.size = qpow64(q, d * e);
    uint64_t fp_order = qpow64(q, d) - 1;          // residue field units
    uint64_t one_units = qpow64(q, (uint64_t)d * (e - 1));
    uint64_t total = fp_order * one_units;

    // cyclic part: generator of (F_q[t]/P)^*, lifted and purified by the p-part
    auto fp_primes = prime_factors_u64(fp_order);
    PolyFq gen;
    for (uint64_t i = 0;; i++) {
      PolyFq cand = poly_below_deg(q, d, i + 1);  // skip 0
      if (cand.is_zero() || !gcd(cand, P).is_one()) continue;
      if (order_of_unit(cand, P, fp_order, fp_primes) == fp_order) { gen = cand; break; }
    }
    PolyFq gcyc = e == 1 ? gen : powmod(gen, one_units, L.Pe);
    L.gens.push_back(gcyc);
    L.orders.push_back(uint32_t(fp_order));

    // 1-units: greedy basis of the elementary abelian p-group (e <= p)
    if (e > 1) {
      std::vector<char> span(size_t(L.size), 0);
      span[1] = 1;
      uint64_t span_count = 1;
      for (uint64_t gi = 0; gi < qpow64(q, (uint64_t)d * (e - 1)) && span_count < one_units; gi++) {
        PolyFq u = (PolyFq::one(q) + P * poly_below_deg(q, d * (e - 1), gi)) % L.Pe;
        if (span[u.dense_index()]) continue;
        // extend the span by u^j for each current element
        std::vector<uint64_t> cur;
        for (uint64_t idx = 0; idx < L.size; idx++) if (span[idx]) cur.push_back(idx);
        PolyFq upow = PolyFq::one(q);
        for (uint32_t j = 1; j < q; j++) {
          upow = upow * u % L.Pe;
          for (uint64_t idx : cur) {
            PolyFq prod = poly_below_deg(q, d * e, idx) * upow % L.Pe;
            uint64_t pi = prod.dense_index();
            assert(!span[pi]);
            span[pi] = 1;
            span_count++;
          }
        }
        L.gens.push_back(u);
        L.orders.push_back(q);
      }
      assert(span_count == one_units);
    }

    // certification: odometer over the basis must hit every unit exactly once
    size_t ng = L.gens.size();
    L.dlogs.assign(ng, std::vector<uint32_t>(size_t(L.size), UINT32_MAX));
    std::vector<uint32_t> exps(ng, 0);
    PolyFq cur = PolyFq::one(q);
    uint64_t seen = 0;
    while (true) {
      uint64_t idx = cur.dense_index();
      assert(L.dlogs[0][idx] == UINT32_MAX);  // bijectivity certificate
      for (size_t g = 0; g < ng; g++) L.dlogs[g][idx] = exps[g];
      seen++;
      size_t g = 0;
      for (; g < ng; g++) {
        cur = cur * L.gens[g] % L.Pe;
        if (++exps[g] < L.orders[g]) break;
        exps[g] = 0;  // wrapped: cur already absorbed g^order = 1
      }
      if (g == ng) break;
    }
    assert(seen == total);
    assert(cur.is_one());

    phi_ *= total;
    factors_.push_back(std::move(L));
  }

  uint64_t M = 1;
  for (const auto& L : factors_)
    for (uint32_t o : L.orders) M = std::lcm(M, (uint64_t)o);
  assert(M < (uint64_t(1) << 31));
  M_ = uint32_t(M);
  for (const auto& L : factors_) {
    total_gens_ += L.gens.size();
    for (uint32_t o : L.orders) weight_.push_back(M_ / o);
  }
}

std::vector<DirichletChar> DirichletGroup::characters() const {
  std::vector<uint32_t> orders;
  for (const auto& L : factors_)
    for (uint32_t o : L.orders) orders.push_back(o);
  std::vector<DirichletChar> out;
  out.reserve(size_t(phi_));
  DirichletChar cur;
  cur.a.assign(orders.size(), 0);
  while (true) {
    out.push_back(cur);
    size_t g = 0;
    for (; g < orders.size(); g++) {
      if (++cur.a[g] < orders[g]) break;
      cur.a[g] = 0;
    }
    if (g == orders.size()) break;
  }
  assert(out.size() == phi_);
  return out;
}

DirichletChar DirichletGroup::principal() const {
  DirichletChar chi;
  chi.a.assign(total_gens_, 0);
  return chi;
}

DirichletChar DirichletGroup::quadratic_character() const {
  if (factors_.size() != 1 || factors_[0].e != 1)
    throw std::logic_error("quadratic_character: modulus must be prime");
  DirichletChar chi = principal();
  assert(factors_[0].orders[0] % 2 == 0);
  chi.a[0] = factors_[0].orders[0] / 2;
  return chi;
}

CharValue DirichletGroup::value(const DirichletChar& chi, const PolyFq& f) const {
  assert(chi.a.size() == total_gens_);
  uint64_t k = 0;
  size_t g0 = 0;
  for (const auto& L : factors_) {
    uint64_t idx = (f % L.Pe).dense_index();
    for (size_t g = 0; g < L.gens.size(); g++) {
      uint32_t dl = L.dlogs[g][idx];
      if (dl == UINT32_MAX) return CharValue{};  // not a unit
      k += (uint64_t)chi.a[g0 + g] * dl % M_ * weight_[g0 + g] % M_;
    }
    g0 += L.gens.size();
  }
  return CharValue{false, uint32_t(k % M_), M_};
}

bool DirichletGroup::is_principal(const DirichletChar& chi) const {
  return std::all_of(chi.a.begin(), chi.a.end(), [](uint32_t x) { return x == 0; });
}

uint32_t DirichletGroup::char_order(const DirichletChar& chi) const {
  uint64_t ord = 1;
  size_t g0 = 0;
  for (const auto& L : factors_)
    for (size_t g = 0; g < L.gens.size(); g++, g0++) {
      uint32_t o = L.orders[g];
      ord = std::lcm(ord, (uint64_t)o / std::gcd(o, chi.a[g0]));
    }
  return uint32_t(ord);
}

bool DirichletGroup::is_even(const DirichletChar& chi) const {
  // F_q^* is cyclic; triviality at one generator suffices. Scalars are always
  // coprime to the modulus, so the value is never zero.
  auto pf = prime_factors_u64(q_ - 1);
  for (uint32_t c = 2;; c++) {
    bool gen = true;
    for (uint64_t p : pf)
      if (powq(c, (q_ - 1) / p, q_) == 1) { gen = false; break; }
    if (gen) return value(chi, PolyFq::constant(q_, c)).is_one();
  }
}

PolyFq DirichletGroup::conductor(const DirichletChar& chi) const {
  // divisors of h sorted by degree then index
  std::vector<PolyFq> divisors{PolyFq::one(q_)};
  auto fac = factorize(h_);
  for (const auto& [P, e] : fac) {
    std::vector<PolyFq> next;
    PolyFq pk = PolyFq::one(q_);
    for (int k = 0; k <= e; k++) {
      for (const auto& d : divisors) next.push_back(d * pk);
      pk = pk * P;
    }
    divisors = std::move(next);
  }
  std::sort(divisors.begin(), divisors.end());
  for (const auto& f : divisors) {
    int extra = h_.degree() - f.degree();
    bool trivial = true;
    for (uint64_t gi = 0; gi < qpow64(q_, extra) && trivial; gi++) {
      PolyFq u = (PolyFq::one(q_) + f * poly_below_deg(q_, extra, gi)) % h_;
      CharValue v = value(chi, u);
      if (!v.zero && !v.is_one()) trivial = false;
    }
    if (trivial) return f;
  }
  return h_;  // unreachable: f = h always passes
}

DirichletChar DirichletGroup::restrict_to(const DirichletGroup& smaller,
                                          const DirichletChar& chi) const {
  // CRT-lift each local basis generator to a unit of the full modulus that is
  // 1 at the other factors; agreement there pins the inducing character.
  std::vector<PolyFq> lifts;
  for (const auto& L : factors_) {
    PolyFq H = divrem(h_, L.Pe).first;  // cofactor
    for (const auto& g : L.gens) {
      if (H.is_one()) { lifts.push_back(g); continue; }
      PolyFq u = (g * H % h_) * inv_mod(H, L.Pe) + (L.Pe * inv_mod(L.Pe, H) % h_);
      lifts.push_back(u % h_);
    }
  }
  for (const auto& psi : smaller.characters()) {
    bool match = true;
    for (const auto& u : lifts) {
      CharValue a = value(chi, u), b = smaller.value(psi, u);
      assert(!a.zero && !b.zero);
      if ((uint64_t)a.k * b.m != (uint64_t)b.k * a.m) { match = false; break; }
    }
    if (match) return psi;
  }
  throw std::logic_error("restrict_to: no inducing character found");
}

}  // namespace ffrank
