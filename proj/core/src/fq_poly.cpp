#include "ffrank/fq_poly.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ffrank {

uint32_t powq(uint32_t a, uint64_t e, uint32_t q) {
  uint64_t r = 1, b = a % q;
  while (e) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return uint32_t(r);
}

uint64_t qpow64(uint32_t q, int n) {
  assert(n >= 0);
  uint64_t r = 1;
  for (int i = 0; i < n; i++) {
    assert(r <= (uint64_t(1) << 62) / q);
    r *= q;
  }
  return r;
}

PolyFq::PolyFq(uint32_t q_, std::vector<uint32_t> coeffs) : q(q_), c(std::move(coeffs)) {
  for (auto& x : c) x %= q;
  normalize();
}

void PolyFq::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

PolyFq PolyFq::monomial(uint32_t q, int k, uint32_t a) {
  std::vector<uint32_t> v(k + 1, 0);
  v[k] = a % q;
  return PolyFq(q, std::move(v));
}

uint32_t PolyFq::eval(uint32_t x) const {
  uint64_t r = 0;
  for (size_t i = c.size(); i-- > 0;) r = (r * x + c[i]) % q;
  return uint32_t(r);
}

PolyFq PolyFq::monic_scaled() const {
  if (is_zero() || is_monic()) return *this;
  uint32_t s = invq(lead(), q);
  PolyFq r = *this;
  for (auto& x : r.c) x = mulq(x, s, q);
  return r;
}

std::string PolyFq::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (size_t i = 0; i < c.size(); i++) {
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  return s;
}

PolyFq PolyFq::parse(uint32_t q, const std::string& s) {
  std::vector<uint32_t> v;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    size_t b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty coefficient in '" + s + "'");
    size_t e = tok.find_last_not_of(" \t");
    std::string num = tok.substr(b, e - b + 1);
    size_t used = 0;
    long long x = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument("bad coefficient '" + num + "'");
    long long m = x % (long long)q;
    if (m < 0) m += q;
    v.push_back(uint32_t(m));
  }
  if (v.empty()) throw std::invalid_argument("empty polynomial string");
  return PolyFq(q, std::move(v));
}

uint64_t PolyFq::dense_index() const {
  uint64_t r = 0;
  for (size_t i = c.size(); i-- > 0;) {
    assert(r <= ((uint64_t(1) << 62) - c[i]) / q);
    r = r * q + c[i];
  }
  return r;
}

bool PolyFq::operator<(const PolyFq& o) const {
  if (c.size() != o.c.size()) return c.size() < o.c.size();
  for (size_t i = c.size(); i-- > 0;)
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  return false;
}

PolyFq operator+(const PolyFq& a, const PolyFq& b) {
  assert(a.q == b.q);
  PolyFq r = a.c.size() >= b.c.size() ? a : b;
  const PolyFq& s = a.c.size() >= b.c.size() ? b : a;
  for (size_t i = 0; i < s.c.size(); i++) r.c[i] = addq(r.c[i], s.c[i], a.q);
  r.normalize();
  return r;
}

PolyFq operator-(const PolyFq& a) {
  PolyFq r = a;
  for (auto& x : r.c) x = negq(x, a.q);
  return r;
}

PolyFq operator-(const PolyFq& a, const PolyFq& b) { return a + (-b); }

PolyFq operator*(const PolyFq& a, const PolyFq& b) {
  assert(a.q == b.q);
  if (a.is_zero() || b.is_zero()) return PolyFq::zero(a.q);
  const uint32_t q = a.q;
  std::vector<uint32_t> r(a.c.size() + b.c.size() - 1, 0);
  if (q < 65536 && a.c.size() < (uint64_t(1) << 31)) {
    for (size_t k = 0; k < r.size(); k++) {
      uint64_t acc = 0;
      size_t lo = k >= b.c.size() - 1 ? k - (b.c.size() - 1) : 0;
      size_t hi = std::min(k, a.c.size() - 1);
      for (size_t i = lo; i <= hi; i++) acc += (uint64_t)a.c[i] * b.c[k - i];
      r[k] = uint32_t(acc % q);
    }
  } else {
    for (size_t i = 0; i < a.c.size(); i++)
      for (size_t j = 0; j < b.c.size(); j++) r[i + j] = addq(r[i + j], mulq(a.c[i], b.c[j], q), q);
  }
  return PolyFq(q, std::move(r));
}

PolyFq operator*(uint32_t s, const PolyFq& a) {
  PolyFq r = a;
  s %= a.q;
  for (auto& x : r.c) x = mulq(x, s, a.q);
  r.normalize();
  return r;
}

std::pair<PolyFq, PolyFq> divrem(const PolyFq& a, const PolyFq& b) {
  assert(a.q == b.q && !b.is_zero());
  const uint32_t q = a.q;
  if (a.degree() < b.degree()) return {PolyFq::zero(q), a};
  std::vector<uint32_t> rem = a.c;
  int dq = a.degree() - b.degree();
  std::vector<uint32_t> quo(dq + 1, 0);
  uint32_t linv = invq(b.lead(), q);
  for (int k = dq; k >= 0; k--) {
    uint32_t coef = mulq(rem[k + b.degree()], linv, q);
    quo[k] = coef;
    if (!coef) continue;
    for (size_t i = 0; i < b.c.size(); i++)
      rem[k + i] = subq(rem[k + i], mulq(coef, b.c[i], q), q);
  }
  rem.resize(b.degree() > 0 ? b.degree() : 0);
  return {PolyFq(q, std::move(quo)), PolyFq(q, std::move(rem))};
}

PolyFq operator%(const PolyFq& a, const PolyFq& b) { return divrem(a, b).second; }

PolyFq shift(const PolyFq& a, int k) {
  assert(k >= 0);
  if (a.is_zero()) return a;
  std::vector<uint32_t> v(a.c.size() + k, 0);
  std::copy(a.c.begin(), a.c.end(), v.begin() + k);
  return PolyFq(a.q, std::move(v));
}

PolyFq derivative(const PolyFq& a) {
  if (a.degree() < 1) return PolyFq::zero(a.q);
  std::vector<uint32_t> v(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); i++) v[i - 1] = uint32_t((uint64_t)a.c[i] * (i % a.q) % a.q);
  return PolyFq(a.q, std::move(v));
}

PolyFq gcd(PolyFq a, PolyFq b) {
  while (!b.is_zero()) {
    PolyFq r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic_scaled();
}

XgcdResult xgcd(const PolyFq& a, const PolyFq& b) {
  const uint32_t q = a.q;
  PolyFq r0 = a, r1 = b;
  PolyFq u0 = PolyFq::one(q), u1 = PolyFq::zero(q);
  PolyFq v0 = PolyFq::zero(q), v1 = PolyFq::one(q);
  while (!r1.is_zero()) {
    auto [quo, rem] = divrem(r0, r1);
    r0 = std::move(r1); r1 = std::move(rem);
    PolyFq u2 = u0 - quo * u1; u0 = std::move(u1); u1 = std::move(u2);
    PolyFq v2 = v0 - quo * v1; v0 = std::move(v1); v1 = std::move(v2);
  }
  if (!r0.is_zero() && !r0.is_monic()) {
    uint32_t s = invq(r0.lead(), q);
    r0 = s * r0; u0 = s * u0; v0 = s * v0;
  }
  return {r0, u0, v0};
}

PolyFq inv_mod(const PolyFq& a, const PolyFq& m) {
  auto r = xgcd(a % m, m);
  if (!r.g.is_one()) throw std::domain_error("inv_mod: not coprime");
  return r.u % m;
}

PolyFq powmod(PolyFq base, uint64_t e, const PolyFq& m) {
  PolyFq r = PolyFq::one(m.q);
  base = base % m;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return r;
}

int valuation(const PolyFq& f, const PolyFq& P, PolyFq* cofactor) {
  assert(!f.is_zero() && P.degree() >= 1);
  PolyFq cur = f;
  int v = 0;
  while (true) {
    auto [quo, rem] = divrem(cur, P);
    if (!rem.is_zero()) break;
    cur = std::move(quo);
    v++;
  }
  if (cofactor) *cofactor = cur;
  return v;
}

bool is_irreducible(const PolyFq& f0) {
  PolyFq f = f0.monic_scaled();
  int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const uint32_t q = f.q;
  PolyFq t = PolyFq::t(q) % f;
  // x_i = t^{q^i} mod f
  std::vector<PolyFq> x(n + 1);
  x[0] = t;
  for (int i = 1; i <= n; i++) x[i] = powmod(x[i - 1], q, f);
  if (x[n] != t) return false;
  std::vector<int> prime_divs;
  int m = n;
  for (int l = 2; l * l <= m; l++)
    if (m % l == 0) { prime_divs.push_back(l); while (m % l == 0) m /= l; }
  if (m > 1) prime_divs.push_back(m);
  for (int l : prime_divs)
    if (!gcd(x[n / l] - t, f).is_one()) return false;
  return true;
}

uint64_t irreducible_count(uint32_t q, int n) {
  assert(n >= 1);
  auto mobius = [](int m) {
    int r = 1;
    for (int p = 2; p * p <= m; p++) {
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
      }
    }
    if (m > 1) r = -r;
    return r;
  };
  int64_t tot = 0;
  for (int d = 1; d <= n; d++) {
    if (n % d) continue;
    int mu = mobius(d);
    if (mu) tot += mu * int64_t(qpow64(q, n / d));
  }
  assert(tot > 0 && tot % n == 0);
  return uint64_t(tot) / n;
}

PolyFq poly_below_deg(uint32_t q, int n, uint64_t idx) {
  std::vector<uint32_t> v(n);
  for (int i = 0; i < n; i++) { v[i] = uint32_t(idx % q); idx /= q; }
  assert(idx == 0);
  return PolyFq(q, std::move(v));
}

PolyFq monic_by_index(uint32_t q, int n, uint64_t idx) {
  std::vector<uint32_t> v(n + 1, 0);
  for (int i = 0; i < n; i++) { v[i] = uint32_t(idx % q); idx /= q; }
  assert(idx == 0);
  v[n] = 1;
  return PolyFq(q, std::move(v));
}

PolyFq all_leading_by_index(uint32_t q, int n, uint64_t idx) {
  uint64_t qn = qpow64(q, n);
  uint64_t lead = 1 + idx / qn;
  assert(lead < q);
  PolyFq r = monic_by_index(q, n, idx % qn);
  r.c[n] = uint32_t(lead);
  return r;
}

std::vector<PolyFq> irreducibles_rabin(uint32_t q, int n) {
  std::vector<PolyFq> out;
  uint64_t qn = qpow64(q, n);
  for (uint64_t i = 0; i < qn; i++) {
    PolyFq f = monic_by_index(q, n, i);
    if (is_irreducible(f)) out.push_back(std::move(f));
  }
  return out;
}

// ---- factorization ----

namespace {

// q = p prime, so the p-th root just resamples coefficients at multiples of p
PolyFq pth_root(const PolyFq& f) {
  std::vector<uint32_t> v;
  for (size_t i = 0; i < f.c.size(); i += f.q) v.push_back(f.c[i]);
  return PolyFq(f.q, std::move(v));
}

void sff(const PolyFq& f, int mult, std::vector<std::pair<PolyFq, int>>& out) {
  if (f.degree() < 1) return;
  PolyFq fp = derivative(f);
  if (fp.is_zero()) { sff(pth_root(f), mult * int(f.q), out); return; }
  PolyFq c = gcd(f, fp);
  PolyFq w = divrem(f, c).first;
  int i = 1;
  while (!w.is_one()) {
    PolyFq y = gcd(w, c);
    PolyFq z = divrem(w, y).first;
    if (z.degree() >= 1) out.push_back({z, mult * i});
    i++;
    w = std::move(y);
    c = divrem(c, w).first;
  }
  if (!c.is_one()) sff(pth_root(c), mult * int(f.q), out);
}

// f squarefree monic; returns (product of primes of degree d, d) pairs
std::vector<std::pair<PolyFq, int>> ddf(PolyFq f) {
  std::vector<std::pair<PolyFq, int>> out;
  const uint32_t q = f.q;
  PolyFq t = PolyFq::t(q);
  PolyFq h = t % f;
  int d = 0;
  while (f.degree() >= 2 * (d + 1)) {
    d++;
    h = powmod(h, q, f);
    PolyFq g = gcd(h - t, f);
    if (!g.is_one()) {
      out.push_back({g, d});
      f = divrem(f, g).first;
      h = h % f;
    }
  }
  if (f.degree() >= 1) out.push_back({f, f.degree()});
  return out;
}

// f = product of distinct primes all of degree d; Cantor-Zassenhaus split
void edf(const PolyFq& f, int d, std::mt19937_64& rng, std::vector<PolyFq>& out) {
  if (f.degree() == d) { out.push_back(f.monic_scaled()); return; }
  const uint32_t q = f.q;
  uint64_t e = (qpow64(q, d) - 1) / 2;
  while (true) {
    std::vector<uint32_t> v(f.degree());
    for (auto& x : v) x = uint32_t(rng() % q);
    PolyFq a(q, std::move(v));
    if (a.degree() < 1) continue;
    PolyFq g0 = gcd(a, f);
    if (!g0.is_one()) {
      edf(g0, d, rng, out);
      edf(divrem(f, g0).first, d, rng, out);
      return;
    }
    PolyFq b = powmod(a, e, f) - PolyFq::one(q);
    PolyFq g = gcd(b, f);
    if (!g.is_one() && g.degree() < f.degree()) {
      edf(g, d, rng, out);
      edf(divrem(f, g).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<FactorExp> factorize(const PolyFq& f0) {
  assert(f0.degree() >= 0);
  std::vector<FactorExp> out;
  PolyFq f = f0.monic_scaled();
  if (f.degree() < 1) return out;
  std::vector<std::pair<PolyFq, int>> parts;
  sff(f, 1, parts);
  std::mt19937_64 rng(0x66726b5ull ^ (PolyHash{}(f) * 0x9e3779b97f4a7c15ull));
  for (auto& [sq, mult] : parts) {
    for (auto& [prod, d] : ddf(sq)) {
      std::vector<PolyFq> primes;
      edf(prod, d, rng, primes);
      for (auto& p : primes) out.push_back({std::move(p), mult});
    }
  }
  std::sort(out.begin(), out.end(), [](const FactorExp& a, const FactorExp& b) { return a.p < b.p; });
  return out;
}

std::vector<uint32_t> laurent_tail(const PolyFq& A, const PolyFq& H, int kmax) {
  assert(!H.is_zero() && kmax >= 0);
  std::vector<uint32_t> out(kmax, 0);
  if (A.is_zero()) return out;
  const uint32_t q = A.q;
  int dA = A.degree(), dH = H.degree();
  // A/H = u^{dH-dA} * Arev(u)/Hrev(u), u = 1/t; coefficient of u^k is the t^{-k} coefficient
  int nterms = kmax - (dH - dA) + 1;  // series terms of Arev/Hrev needed
  if (nterms <= 0) return out;
  std::vector<uint32_t> arev(nterms, 0), hrev(nterms, 0);
  for (int i = 0; i <= dA && i < nterms; i++) arev[i] = A.c[dA - i];
  for (int i = 0; i <= dH && i < nterms; i++) hrev[i] = H.c[dH - i];
  uint32_t h0inv = invq(hrev[0], q);
  std::vector<uint32_t> s(nterms, 0);  // series quotient
  for (int i = 0; i < nterms; i++) {
    uint64_t sum = 0;
    for (int j = 1; j <= i; j++) sum = (sum + (uint64_t)hrev[j] * s[i - j]) % q;
    s[i] = mulq(subq(arev[i], uint32_t(sum), q), h0inv, q);
  }
  for (int k = 1; k <= kmax; k++) {
    int j = k - (dH - dA);
    if (j >= 0 && j < nterms) out[k - 1] = s[j];
  }
  return out;
}

// ---- prime cache files ----

int PrimeCache::max_complete_degree() const {
  int m = 0;
  for (int d = 1; d < (int)by_degree.size(); d++) {
    if (by_degree[d].size() == irreducible_count(q, d)) m = d;
    else break;
  }
  return m;
}

std::string prime_cache_path(const std::string& dir, uint32_t q) {
  return dir + "/ffrank-primes-q" + std::to_string(q) + ".txt";
}

bool save_prime_cache(const PrimeCache& cache, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return false;
  out << "ffrank-primes v1 q=" << cache.q << "\n";
  for (size_t d = 1; d < cache.by_degree.size(); d++)
    for (const auto& p : cache.by_degree[d]) out << p.to_string() << "\n";
  return bool(out);
}

std::optional<PrimeCache> load_prime_cache(uint32_t q, const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header) || header != "ffrank-primes v1 q=" + std::to_string(q)) {
    fprintf(stderr, "prime cache %s: bad header, ignoring\n", path.c_str());
    return std::nullopt;
  }
  PrimeCache cache;
  cache.q = q;
  std::string line;
  int last_deg = 0;
  uint64_t last_idx = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    PolyFq p;
    try { p = PolyFq::parse(q, line); } catch (...) {
      fprintf(stderr, "prime cache %s: unparsable line, ignoring file\n", path.c_str());
      return std::nullopt;
    }
    int d = p.degree();
    uint64_t idx = p.dense_index();
    if (d < 1 || !p.is_monic() || d < last_deg || (d == last_deg && idx <= last_idx)) {
      fprintf(stderr, "prime cache %s: order violation, ignoring file\n", path.c_str());
      return std::nullopt;
    }
    if ((int)cache.by_degree.size() <= d) cache.by_degree.resize(d + 1);
    cache.by_degree[d].push_back(std::move(p));
    last_deg = d;
    last_idx = idx;
  }
  // spot-check a few entries per degree; counts are validated by max_complete_degree
  for (size_t d = 1; d < cache.by_degree.size(); d++) {
    const auto& v = cache.by_degree[d];
    for (size_t i = 0; i < v.size(); i += std::max<size_t>(1, v.size() / 3)) {
      if (!is_irreducible(v[i])) {
        fprintf(stderr, "prime cache %s: reducible entry, ignoring file\n", path.c_str());
        return std::nullopt;
      }
    }
  }
  return cache;
}

}  // namespace ffrank
