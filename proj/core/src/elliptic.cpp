#include "ffrank/elliptic.hpp"

#include "ffrank/characters.hpp"
#include "ffrank/gf_table.hpp"
#include "ffrank/roots.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ffrank {

namespace {

PolyFq scaled(uint32_t c, const PolyFq& f) {
  return PolyFq::constant(f.q, c % f.q) * f;
}

int val_or_max(const PolyFq& f, const PolyFq& P) {
  return f.is_zero() ? INT_MAX : valuation(f, P);
}

// classification core; P is trusted to be monic irreducible
ReductionDatum classify(uint32_t q, PolyFq Am, PolyFq Bm, const PolyFq& P) {
  ReductionDatum d;
  d.place = P;
  PolyFq P4 = P * P * P * P;
  PolyFq P6 = P4 * P * P;
  while (val_or_max(Am, P) >= 4 && val_or_max(Bm, P) >= 6) {
    Am = divrem(Am, P4).first;
    Bm = divrem(Bm, P6).first;
    d.minimal_steps++;
  }
  PolyFq delta = ec_discriminant(Am, Bm);
  if (valuation(delta, P) == 0) {
    d.type = RedType::good;
    d.fP = 0;
    d.aP = trace_aP(q, Am, Bm, P);
  } else if (val_or_max(Am, P) == 0) {
    // node: double root x0 = -3B/2A of the reduced cubic, tangents split by
    // whether 3 x0 is a square in the residue field
    PolyFq x0 = scaled(q - 3, Bm % P) * inv_mod(scaled(2, Am % P), P) % P;
    int sym = quad_symbol(scaled(3, x0) % P, P);
    d.type = sym == 1 ? RedType::split_mult : RedType::nonsplit_mult;
    d.aP = sym;
    d.fP = 1;
  } else {
    d.type = RedType::additive;
    d.aP = 0;
    d.fP = 2;
  }
  return d;
}

// flip t -> 1/s with the minimal twist making both coefficient polys regular
void flip_to_infinity(const PolyFq& A, const PolyFq& B, PolyFq& Ai, PolyFq& Bi) {
  int ka = A.is_zero() ? 0 : (A.degree() + 3) / 4;
  int kb = B.is_zero() ? 0 : (B.degree() + 5) / 6;
  int k = std::max(ka, kb);
  std::vector<uint32_t> a(4 * k + 1, 0), b(6 * k + 1, 0);
  for (int j = 0; j <= std::max(A.degree(), 0); j++)
    if (j <= A.degree()) a[4 * k - j] = A.coeff(j);
  for (int j = 0; j <= std::max(B.degree(), 0); j++)
    if (j <= B.degree()) b[6 * k - j] = B.coeff(j);
  Ai = PolyFq(A.q, std::move(a));
  Bi = PolyFq(B.q, std::move(b));
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// in-place series division by the local polynomial factor:
// good   1 - aP u^d + q^d u^{2d}
// bad    1 - aP u^d
void divide_local(std::vector<int64_t>& s, int d, int64_t aP, int64_t qd, bool good) {
  int D = int(s.size()) - 1;
  for (int j = d; j <= D; j++) {
    s[j] += aP * s[j - d];
    if (good && j >= 2 * d) s[j] -= qd * s[j - 2 * d];
  }
}

struct SpecialKey {
  int deg;
  uint64_t idx;
  bool operator<(const SpecialKey& o) const {
    return deg != o.deg ? deg < o.deg : idx < o.idx;
  }
};

std::map<SpecialKey, const ReductionDatum*> special_map(const EllipticSurface& E) {
  std::map<SpecialKey, const ReductionDatum*> m;
  for (const auto& d : E.finite_special)
    m[{d.place.degree(), d.place.dense_index()}] = &d;
  return m;
}

}  // namespace

struct TraceCache {
  std::mutex mu;
  std::map<int, std::vector<int64_t>> by_degree;
};

const char* red_type_name(RedType t) {
  switch (t) {
    case RedType::good: return "good";
    case RedType::split_mult: return "split-multiplicative";
    case RedType::nonsplit_mult: return "nonsplit-multiplicative";
    case RedType::additive: return "additive";
  }
  return "?";
}

PolyFq ec_discriminant(const PolyFq& A, const PolyFq& B) {
  uint32_t q = A.q;
  PolyFq d = scaled((q - 16 % q) % q, scaled(4, A * A * A) + scaled(27, B * B));
  if (d.is_zero()) throw std::domain_error("ec_discriminant: singular (A, B)");
  return d;
}

ReductionDatum reduction_type(uint32_t q, const PolyFq& A, const PolyFq& B,
                              const PolyFq& P) {
  if (!P.is_monic() || !is_irreducible(P))
    throw std::invalid_argument("reduction_type: P must be monic irreducible");
  return classify(q, A, B, P);
}

ReductionDatum infinity_reduction(uint32_t q, const PolyFq& A, const PolyFq& B) {
  PolyFq Ai, Bi;
  flip_to_infinity(A, B, Ai, Bi);
  ReductionDatum d = classify(q, Ai, Bi, PolyFq::t(q));
  d.at_infinity = true;
  return d;
}

int64_t trace_aP(uint32_t q, const PolyFq& A, const PolyFq& B, const PolyFq& P) {
  PolyFq Am = A, Bm = B;
  PolyFq P4 = P * P * P * P;
  PolyFq P6 = P4 * P * P;
  while (val_or_max(Am, P) >= 4 && val_or_max(Bm, P) >= 6) {
    Am = divrem(Am, P4).first;
    Bm = divrem(Bm, P6).first;
  }
  if (valuation(ec_discriminant(Am, Bm), P) != 0)
    throw std::invalid_argument("trace_aP: bad reduction at P");

  int d = P.degree();
  int64_t a;
  if (d * std::log2(double(q)) <= 22.0) {
    const GFTable& F = gf_table(q, d);
    // any root of P gives the residue field F_q[t]/(P) inside the table field
    uint32_t th = F.theta_root(P);
    uint32_t ath = 0, bth = 0;
    for (int j = Am.degree(); j >= 0; j--) ath = F.add(F.mul(ath, th), Am.coeff(j));
    for (int j = Bm.degree(); j >= 0; j--) bth = F.add(F.mul(bth, th), Bm.coeff(j));
    int64_t s = 0;
    for (uint32_t x = 0, n = uint32_t(F.size()); x < n; x++)
      s += F.chi(F.add(F.cube(x), F.add(F.mul(ath, x), bth)));
    a = -s;
  } else {
    // far past table scale: residue-ring arithmetic, correct but slow
    PolyFq Ar = Am % P, Br = Bm % P;
    int64_t s = 0;
    for (uint64_t i = 0, n = qpow64(q, d); i < n; i++) {
      PolyFq x = poly_below_deg(q, d, i);
      s += quad_symbol((x * x % P * x + Ar * x + Br) % P, P);
    }
    a = -s;
  }
  if (a * a > int64_t(4 * qpow64(q, d)))
    throw std::logic_error("trace_aP: Hasse bound violated");
  return a;
}

EllipticSurface::EllipticSurface(uint32_t qq, PolyFq AA, PolyFq BB)
    : q(qq), A(std::move(AA)), B(std::move(BB)) {
  if (q < 5) throw std::invalid_argument("EllipticSurface: q must be >= 5 (tame)");
  delta = ec_discriminant(A, B);
  M_fin = PolyFq::one(q);
  A_fin = PolyFq::one(q);
  for (const auto& [P, e] : factorize(delta.monic_scaled())) {
    ReductionDatum d = classify(q, A, B, P);
    finite_special.push_back(d);
    if (d.fP == 0) continue;
    finite_bad.push_back(d);
    (d.fP == 1 ? M_fin : A_fin) = (d.fP == 1 ? M_fin : A_fin) * P;
  }
  infinity = infinity_reduction(q, A, B);
  deg_M = std::max(M_fin.degree(), 0) + (infinity.fP == 1 ? 1 : 0);
  deg_A = std::max(A_fin.degree(), 0) + (infinity.fP == 2 ? 1 : 0);
  deg_N = deg_M + 2 * deg_A;
  trace_cache_ = std::make_shared<TraceCache>();
}

const std::vector<int64_t>& EllipticSurface::good_traces(int d) const {
  if (d * std::log2(double(q)) > 22.0)
    throw std::invalid_argument("good_traces: degree beyond configured prime tables");
  std::lock_guard<std::mutex> lk(trace_cache_->mu);
  auto& tr = trace_cache_->by_degree[d];
  if (!tr.empty()) return tr;

  const GFTable& F = gf_table(q, d);
  const auto& primes = primes_of_degree(q, d);
  const auto& rootdir = F.root_directory();
  const int8_t* chi = F.chi_table().data();
  tr.reserve(primes.size());
  uint64_t qd = qpow64(q, d);
  for (const PolyFq& P : primes) {
    uint32_t th;
    if (d == 1) {
      th = P.coeff(0) ? q - P.coeff(0) : 0;
    } else {
      uint64_t low = 0;
      for (int j = d - 1; j >= 0; j--) low = low * q + P.coeff(j);
      th = rootdir[low];
    }
    uint32_t ath = 0, bth = 0;
    for (int j = A.degree(); j >= 0; j--) ath = F.add(F.mul(ath, th), A.coeff(j));
    for (int j = B.degree(); j >= 0; j--) bth = F.add(F.mul(bth, th), B.coeff(j));
    int64_t s = 0;
    for (uint32_t x = 0, n = uint32_t(F.size()); x < n; x++)
      s += chi[F.add(F.cube(x), F.add(F.mul(ath, x), bth))];
    int64_t a = -s;
    if (a * a > int64_t(4 * qd))
      throw std::logic_error("good_traces: Hasse bound violated");
    tr.push_back(a);
  }
  return tr;
}

namespace {

// series of the full Euler product over places of degree <= depth
std::vector<int64_t> euler_series(const EllipticSurface& E, int depth) {
  std::vector<int64_t> s(depth + 1, 0);
  s[0] = 1;
  auto special = special_map(E);
  for (int d = 1; d <= depth; d++) {
    int64_t qd = int64_t(qpow64(E.q, d));
    const auto& primes = primes_of_degree(E.q, d);
    const auto& traces = E.good_traces(d);
    for (size_t i = 0; i < primes.size(); i++) {
      auto it = special.find({d, primes[i].dense_index()});
      if (it == special.end()) {
        divide_local(s, d, traces[i], qd, true);
      } else if (it->second->type == RedType::good) {
        divide_local(s, d, it->second->aP, qd, true);
      } else if (it->second->aP != 0) {
        divide_local(s, d, it->second->aP, qd, false);
      }
    }
  }
  if (depth >= 1) {
    const ReductionDatum& inf = E.infinity;
    if (inf.type == RedType::good)
      divide_local(s, 1, inf.aP, int64_t(E.q), true);
    else if (inf.aP != 0)
      divide_local(s, 1, inf.aP, int64_t(E.q), false);
  }
  return s;
}

// epsilon, palindrome check, rank, zeros; shared by both construction routes
void finish_l(ECLPolynomial& L) {
  int N = L.N;
  int64_t qN = ipow(int64_t(L.q), N);
  if (L.c[N] != qN && L.c[N] != -qN)
    throw std::logic_error("l_polynomial_ec: |c_N| != q^N, functional equation broken");
  L.epsilon = L.c[N] > 0 || N == 0 ? 1 : -1;
  for (int i = 0; 2 * i <= N; i++)
    if (L.c[N - i] != L.epsilon * ipow(int64_t(L.q), N - 2 * i) * L.c[i])
      throw std::logic_error("l_polynomial_ec: palindrome identity failed");

  // exact synthetic division by (1 - mu u): b_i = c_i + mu b_{i-1}; strips
  // one copy of the inverse root mu when the remainder vanishes
  auto deflate = [](std::vector<int64_t>& red, int64_t mu) {
    if (red.size() < 2) return false;
    std::vector<int64_t> b(red.size() - 1);
    int64_t acc = 0;
    for (size_t i = 0; i + 1 < red.size(); i++) acc = b[i] = red[i] + mu * acc;
    if (red.back() + mu * b[red.size() - 2] != 0) return false;
    red = std::move(b);
    return true;
  };

  // c_0 = 1 makes c primitive, so a zero at u = -/+ 1/q means the integer
  // factor (1 -/+ qu) divides exactly. Stripping both signs here matters:
  // these are the only real zeros possible on |mu| = q, and a floating root
  // finder smears an m-fold one by eps^(1/m) (a triple zero at -q loses six
  // digits). What is left has strictly complex zeros only.
  std::vector<int64_t> red = L.c;
  while (deflate(red, int64_t(L.q))) L.analytic_rank++;
  int neg = 0;
  while (deflate(red, -int64_t(L.q))) neg++;

  L.mu.assign(size_t(L.analytic_rank), std::complex<double>(double(L.q), 0.0));
  L.mu.insert(L.mu.end(), size_t(neg), std::complex<double>(-double(L.q), 0.0));
  if (red.size() > 1) {
    std::vector<std::complex<double>> rev(red.rbegin(), red.rend());
    for (auto z : poly_roots(rev)) L.mu.push_back(z);
  }

  // the coefficients are real, so snap the computed zeros to exact conjugate
  // symmetry; complex sums over them then cancel imaginary parts exactly
  double ctol = 1e-9 * double(L.q);
  std::vector<std::complex<double>> up, down, line;
  for (auto z : L.mu) {
    if (z.imag() > ctol) up.push_back(z);
    else if (z.imag() < -ctol) down.push_back(z);
    else line.emplace_back(z.real(), 0.0);
  }
  std::sort(up.begin(), up.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::sort(down.begin(), down.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() > b.imag();
  });
  if (up.size() != down.size())
    throw std::logic_error("l_polynomial_ec: zero symmetrization failed");
  L.mu = std::move(line);
  for (size_t i = 0; i < up.size(); i++) {
    double re = (up[i].real() + down[i].real()) / 2;
    double im = (up[i].imag() - down[i].imag()) / 2;
    L.mu.emplace_back(re, im);
    L.mu.emplace_back(re, -im);
  }
  std::sort(L.mu.begin(), L.mu.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
}

}  // namespace

ECLPolynomial l_polynomial_ec(const EllipticSurface& E) {
  int N = E.N();
  if (N < 0)
    throw std::domain_error(
        "l_polynomial_ec: deg N_E = " + std::to_string(E.deg_N) +
        " < 4; constant-like curve outside the family, no polynomial L");
  std::vector<int64_t> s = euler_series(E, N + 3);
  for (int j = N + 1; j <= N + 3; j++)
    if (s[j] != 0)
      throw std::logic_error("l_polynomial_ec: Euler series does not terminate at N");
  ECLPolynomial L;
  L.q = E.q;
  L.N = N;
  L.c.assign(s.begin(), s.begin() + N + 1);
  finish_l(L);
  return L;
}

ECLPolynomial l_polynomial_ec_fast(const EllipticSurface& E) {
  int N = E.N();
  if (N < 0)
    throw std::domain_error(
        "l_polynomial_ec_fast: deg N_E = " + std::to_string(E.deg_N) +
        " < 4; constant-like curve outside the family, no polynomial L");
  int depth = N / 2;
  std::vector<int64_t> s = euler_series(E, depth);

  int eps = 0;
  if (N % 2 == 0 && s[depth] != 0) {
    eps = 1;  // middle coefficient fixed by itself: c_m = eps c_m
  } else {
    // deepen one coefficient at a time until some palindrome pair bites;
    // j = 0 always terminates the search since c_0 = 1
    for (int j = depth - (N % 2 == 0 ? 1 : 0); j >= 0; j--) {
      if (s[j] == 0) continue;
      int need = N - j;
      if (int(s.size()) - 1 < need) s = euler_series(E, need);
      int64_t scale = ipow(int64_t(E.q), N - 2 * j) * s[j];
      if (s[need] % scale != 0 || std::abs(s[need] / scale) != 1)
        throw std::logic_error("l_polynomial_ec_fast: functional equation broken");
      eps = int(s[need] / scale);
      break;
    }
  }

  ECLPolynomial L;
  L.q = E.q;
  L.N = N;
  L.c.assign(size_t(N) + 1, 0);
  int have = int(s.size()) - 1;
  for (int i = 0; i <= std::min(N, have); i++) L.c[i] = s[i];
  for (int i = have + 1; i <= N; i++)
    L.c[i] = eps * ipow(int64_t(E.q), 2 * i - N) * L.c[N - i];
  finish_l(L);
  return L;
}

int analytic_rank_of(const std::vector<int64_t>& c, uint32_t q) {
  ECLPolynomial L;
  L.q = q;
  L.N = int(c.size()) - 1;
  L.c = c;
  finish_l(L);
  return L.analytic_rank;
}

std::vector<int64_t> newton_power_sums(const ECLPolynomial& Lp, int n_max) {
  // p_j = sum mu_i^j by Newton's identity on the exact integer coefficients;
  // summing floating zeros loses half the mantissa at repeated mu
  std::vector<int64_t> p(size_t(n_max) + 1, 0);
  for (int j = 1; j <= n_max; j++) {
    int64_t acc = j <= Lp.N ? -int64_t(j) * Lp.c[j] : 0;
    for (int i = 1; i < j && i <= Lp.N; i++) acc -= Lp.c[i] * p[j - i];
    p[j] = acc;
  }
  return p;
}

PowerSumTriple zero_power_sums(const EllipticSurface& E, const ECLPolynomial& Lp,
                               int n) {
  if (n <= 0) throw std::invalid_argument("zero_power_sums: n must be positive");
  if (n * std::log2(double(E.q)) > 22.0)
    throw std::invalid_argument("zero_power_sums: n beyond configured prime tables");

  PowerSumTriple out;
  double qn = std::pow(double(E.q), double(n));
  out.lhs = double(newton_power_sums(Lp, n)[n]) / n / qn;

  auto special = special_map(E);
  double full = 0.0, k1 = 0.0;
  for (int k = 1; k <= n; k++) {
    if (n % k) continue;
    int m = n / k;
    int64_t qm = int64_t(qpow64(E.q, m));
    const auto& primes = primes_of_degree(E.q, m);
    const auto& traces = E.good_traces(m);
    for (size_t i = 0; i < primes.size(); i++) {
      auto it = special.find({m, primes[i].dense_index()});
      bool good = it == special.end() || it->second->type == RedType::good;
      int64_t aP = it == special.end() ? traces[i] : it->second->aP;
      if (good) {
        // alpha^k + conj recursion: s_0 = 2, s_1 = aP
        int64_t s0 = 2, s1 = aP, sk = k == 0 ? 2 : s1;
        for (int j = 2; j <= k; j++) {
          sk = aP * s1 - qm * s0;
          s0 = s1;
          s1 = sk;
        }
        full += double(sk) / k;
        if (k == 1 && m == n) k1 += double(aP);
      } else {
        full += double(ipow(aP, k)) / k;
      }
    }
    // the place at infinity sits among the degree-1 places
    if (m == 1) {
      const ReductionDatum& inf = E.infinity;
      if (inf.type == RedType::good) {
        int64_t s0 = 2, s1 = inf.aP, sk = k == 0 ? 2 : s1;
        for (int j = 2; j <= k; j++) {
          sk = inf.aP * s1 - int64_t(E.q) * s0;
          s0 = s1;
          s1 = sk;
        }
        full += double(sk) / k;
        if (k == 1 && n == 1) k1 += double(inf.aP);
      } else {
        full += double(ipow(inf.aP, k)) / k;
      }
    }
  }
  out.rhs_full = -full / qn;
  out.rhs_k1_half = -k1 / qn + (n % 2 == 0 ? 0.5 : 0.0);
  return out;
}

std::string curve_json(const EllipticSurface& E, const ECLPolynomial& Lp, int indent) {
  nlohmann::ordered_json j;
  j["q"] = E.q;
  j["A"] = E.A.to_string();
  j["B"] = E.B.to_string();
  j["degN_E"] = E.deg_N;
  j["places"] = nlohmann::ordered_json::array();
  for (const auto& d : E.finite_bad)
    j["places"].push_back({{"place", d.place.to_string()},
                           {"type", red_type_name(d.type)},
                           {"aP", d.aP},
                           {"fP", d.fP}});
  j["places"].push_back({{"place", "inf"},
                         {"type", red_type_name(E.infinity.type)},
                         {"aP", E.infinity.aP},
                         {"fP", E.infinity.fP}});
  j["L"] = Lp.c;
  j["epsilon"] = Lp.epsilon;
  j["analytic_rank"] = Lp.analytic_rank;
  return j.dump(indent);
}

}  // namespace ffrank
