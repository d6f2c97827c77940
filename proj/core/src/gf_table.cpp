#include "ffrank/gf_table.hpp"

#include <cassert>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ffrank {

namespace {
std::vector<uint64_t> prime_factors_u64(uint64_t m) {
  std::vector<uint64_t> out;
  for (uint64_t p = 2; p * p <= m; p++) {
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

PolyFq first_irreducible(uint32_t q, int e) {
  for (uint64_t i = 0;; i++) {
    PolyFq f = monic_by_index(q, e, i);
    if (is_irreducible(f)) return f;
  }
}
}  // namespace

GFTable::GFTable(uint32_t q, int e) : GFTable(first_irreducible(q, e)) {}

GFTable::GFTable(const PolyFq& modulus) : q_(modulus.q), e_(modulus.degree()), mod_(modulus) {
  if (e_ < 1 || !mod_.is_monic() || !is_irreducible(mod_))
    throw std::invalid_argument("GFTable: modulus must be monic irreducible");
  n_ = qpow64(q_, e_);
  if (n_ > (uint64_t(1) << 22))
    throw std::invalid_argument("GFTable: field too large (q^e > 2^22)");
  build();
}

void GFTable::build() {
  const uint32_t q = q_;
  const int e = e_;
  const uint32_t n = uint32_t(n_);
  int h = (e + 1) / 2;
  qh_ = uint32_t(qpow64(q, h));
  qr_ = uint32_t(qpow64(q, e - h));

  lo_.resize(n); hi_.resize(n);
  for (uint32_t a = 0; a < n; a++) { lo_[a] = a % qh_; hi_[a] = a / qh_; }
  auto build_add = [&](std::vector<uint32_t>& tab, uint32_t w) {
    tab.resize((uint64_t)w * w);
    for (uint32_t i = 0; i < w; i++)
      for (uint32_t j = 0; j < w; j++) {
        uint32_t x = i, y = j, r = 0, mul = 1;
        while (x || y) {
          r += mul * addq(x % q, y % q, q);
          x /= q; y /= q; mul *= q;
        }
        tab[(uint64_t)i * w + j] = r;
      }
  };
  build_add(addlo_, qh_);
  build_add(addhi_, qr_);
  neg_.resize(n);
  for (uint32_t a = 0; a < n; a++) {
    uint32_t x = a, r = 0, mul = 1;
    while (x) { r += mul * negq(x % q, q); x /= q; mul *= q; }
    neg_[a] = r;
  }

  // generator of the multiplicative group
  auto factors = prime_factors_u64(n - 1);
  PolyFq g;
  for (uint32_t cand = 2;; cand++) {
    assert(cand < n);
    PolyFq gc = element_poly(cand);
    bool ok = true;
    for (uint64_t p : factors)
      if (powmod(gc, (n - 1) / p, mod_).is_one()) { ok = false; break; }
    if (ok) { g = gc; gen_ = cand; break; }
  }

  // exp/log by repeated multiplication with g, in flat digit arrays
  std::vector<uint32_t> gcol((size_t)e * e, 0);  // gcol[j*e+i]: coeff i of g*theta^j mod f
  {
    PolyFq cur = g;
    for (int j = 0; j < e; j++) {
      for (int i = 0; i < e; i++) gcol[(size_t)j * e + i] = cur.coeff(i);
      cur = shift(cur, 1) % mod_;
    }
  }
  exp_.assign(2 * (size_t)(n - 1), 0);
  log_.assign(n, 0);
  std::vector<uint32_t> cur(e, 0), nxt(e, 0);
  cur[0] = 1;
  for (uint32_t i = 0; i < n - 1; i++) {
    uint32_t idx = 0, mul = 1;
    for (int d = 0; d < e; d++) { idx += cur[d] * mul; mul *= q; }
    exp_[i] = idx;
    log_[idx] = i;
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int j = 0; j < e; j++) {
      uint32_t cj = cur[j];
      if (!cj) continue;
      const uint32_t* col = &gcol[(size_t)j * e];
      for (int d = 0; d < e; d++) nxt[d] = uint32_t((nxt[d] + (uint64_t)cj * col[d]) % q);
    }
    std::swap(cur, nxt);
  }
  assert(cur[0] == 1 && std::count(cur.begin(), cur.end(), 0u) == e - 1);  // g^{n-1} = 1
  std::memcpy(exp_.data() + (n - 1), exp_.data(), (n - 1) * sizeof(uint32_t));

  chi_.assign(n, 0);
  cube_.assign(n, 0);
  for (uint32_t i = 0; i < n - 1; i++) chi_[exp_[i]] = (i & 1) ? -1 : 1;
  for (uint32_t a = 1; a < n; a++) cube_[a] = exp_[(uint64_t)3 * log_[a] % (n - 1)];
}

PolyFq GFTable::element_poly(uint32_t idx) const {
  std::vector<uint32_t> v(e_);
  for (int i = 0; i < e_; i++) { v[i] = idx % q_; idx /= q_; }
  return PolyFq(q_, std::move(v));
}

uint32_t GFTable::embed(const PolyFq& f) const {
  PolyFq r = f % mod_;
  uint32_t idx = 0, mul = 1;
  for (int i = 0; i < e_; i++) { idx += r.coeff(i) * mul; mul *= q_; }
  return idx;
}

uint32_t GFTable::inv(uint32_t a) const {
  assert(a);
  return exp_[n_ - 1 - log_[a]];
}

uint32_t GFTable::pow(uint32_t a, uint64_t k) const {
  if (!a) return k == 0 ? 1 : 0;
  uint64_t kr = k % (n_ - 1);
  return exp_[(uint64_t)log_[a] * kr % (n_ - 1)];
}

PolyFq GFTable::min_poly(uint32_t idx) const {
  // conjugate orbit under Frobenius
  std::vector<uint32_t> orbit{idx};
  for (uint32_t z = frob(idx); z != idx; z = frob(z)) orbit.push_back(z);
  int d = int(orbit.size());
  std::vector<uint32_t> mp(d + 1, 0);
  mp[0] = 1;
  int len = 0;
  for (uint32_t z : orbit) {
    uint32_t nz = neg_[z];
    mp[len + 1] = mp[len];
    for (int j = len; j >= 1; j--) mp[j] = add(mul(mp[j], nz), mp[j - 1]);
    mp[0] = mul(mp[0], nz);
    len++;
  }
  std::vector<uint32_t> coeffs(d + 1);
  for (int j = 0; j <= d; j++) {
    assert(mp[j] < q_);  // coefficients of the minimal polynomial are scalars
    coeffs[j] = mp[j];
  }
  return PolyFq(q_, std::move(coeffs));
}

const std::vector<uint32_t>& GFTable::root_directory() const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (rootdir_built_) return rootdir_;
  rootdir_.assign(n_, UINT32_MAX);
  std::vector<bool> seen(n_, false);
  for (uint32_t z = 0; z < n_; z++) {
    if (seen[z]) continue;
    std::vector<uint32_t> orbit{z};
    seen[z] = true;
    for (uint32_t w = frob(z); w != z; w = frob(w)) { orbit.push_back(w); seen[w] = true; }
    if (int(orbit.size()) != e_) continue;
    PolyFq mp = min_poly(z);
    uint32_t key = 0, mul = 1;
    for (int i = 0; i < e_; i++) { key += mp.coeff(i) * mul; mul *= q_; }
    rootdir_[key] = z;
  }
  rootdir_built_ = true;
  return rootdir_;
}

uint32_t GFTable::theta_root(const PolyFq& P) const {
  assert(P.q == q_ && P.degree() == e_ && P.is_monic());
  uint32_t key = 0, mul = 1;
  for (int i = 0; i < e_; i++) { key += (P.coeff(i) % q_) * mul; mul *= q_; }
  uint32_t r = root_directory()[key];
  assert(r != UINT32_MAX);
  return r;
}

namespace {
std::mutex g_registry_mu;
std::map<std::pair<uint32_t, int>, std::unique_ptr<GFTable>> g_fields;
std::map<std::pair<uint32_t, int>, std::vector<PolyFq>> g_primes;
}  // namespace

const GFTable& gf_table(uint32_t q, int e) {
  std::lock_guard<std::mutex> lock(g_registry_mu);
  auto key = std::make_pair(q, e);
  auto it = g_fields.find(key);
  if (it == g_fields.end())
    it = g_fields.emplace(key, std::make_unique<GFTable>(q, e)).first;
  return *it->second;
}

const std::vector<PolyFq>& primes_of_degree(uint32_t q, int e) {
  {
    std::lock_guard<std::mutex> lock(g_registry_mu);
    auto it = g_primes.find({q, e});
    if (it != g_primes.end()) return it->second;
  }
  const GFTable& F = gf_table(q, e);
  const auto& dir = F.root_directory();
  std::vector<PolyFq> out;
  out.reserve(irreducible_count(q, e));
  for (uint64_t key = 0; key < F.size(); key++) {
    if (dir[key] == UINT32_MAX) continue;
    PolyFq p = monic_by_index(q, e, key);
    out.push_back(std::move(p));
  }
  assert(out.size() == irreducible_count(q, e));
  std::lock_guard<std::mutex> lock(g_registry_mu);
  return g_primes.emplace(std::make_pair(q, e), std::move(out)).first->second;
}

void seed_primes_from_cache(const PrimeCache& cache) {
  int maxd = cache.max_complete_degree();
  std::lock_guard<std::mutex> lock(g_registry_mu);
  for (int d = 1; d <= maxd; d++)
    g_primes.insert({{cache.q, d}, cache.by_degree[d]});
}

}  // namespace ffrank
