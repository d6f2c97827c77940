#include "ffrank/dirichlet_l.hpp"

#include "ffrank/gf_table.hpp"
#include "ffrank/roots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ffrank {

namespace {

constexpr double kTol = 1e-9;

// integer multiplicities of M-th roots of unity; one complex rounding at the end
struct ExpBuckets {
  uint32_t M;
  std::vector<int64_t> b;
  explicit ExpBuckets(uint32_t m) : M(m), b(m, 0) {}
  void add(const CharValue& v, uint64_t pw = 1, int64_t w = 1) {
    if (v.zero) return;
    b[uint32_t((uint64_t)v.k % v.m * (M / v.m) % M * pw % M)] += w;
  }
  cplx value() const {
    cplx s = 0.0;
    for (uint32_t k = 0; k < M; k++)
      if (b[k]) s += double(b[k]) * std::polar(1.0, 2.0 * M_PI * k / M);
    return s;
  }
};

const std::vector<PolyFq>& primes_deg(uint32_t q, int d) {
  // field-table directory when it fits, Rabin enumeration past the table cap
  if (d * std::log2(double(q)) <= 22.0) return primes_of_degree(q, d);
  static std::mutex mu;
  static std::map<std::pair<uint32_t, int>, std::vector<PolyFq>> slow;
  std::lock_guard<std::mutex> lk(mu);
  auto& v = slow[{q, d}];
  if (v.empty()) v = irreducibles_rabin(q, d);
  return v;
}

// Per-modulus caches shared by every character mod h. Tail coefficients
// (n >= deg h) group the monic enumeration by residue class with integer
// counts; the Euler product reuses each prime's residue mod h instead of
// reducing it again for every character. Map nodes are stable, so references
// handed out under the lock stay valid.
struct ModulusSums {
  std::map<int, std::vector<std::pair<PolyFq, int64_t>>> tail_classes;
  std::map<int, std::vector<PolyFq>> prime_residues;
};

std::mutex g_sums_mu;
std::map<std::pair<uint64_t, uint64_t>, ModulusSums> g_sums;

const std::vector<std::pair<PolyFq, int64_t>>& tail_classes(uint32_t q, const PolyFq& h,
                                                            int n) {
  std::lock_guard<std::mutex> lk(g_sums_mu);
  auto& cls = g_sums[{q, h.dense_index()}].tail_classes[n];
  if (cls.empty()) {
    std::map<uint64_t, int64_t> counts;
    for (uint64_t i = 0, e = qpow64(q, n); i < e; i++)
      counts[(monic_by_index(q, n, i) % h).dense_index()]++;
    for (const auto& [idx, cnt] : counts)
      cls.emplace_back(poly_below_deg(q, h.degree(), idx), cnt);
  }
  return cls;
}

const std::vector<PolyFq>& prime_residues(uint32_t q, const PolyFq& h, int d) {
  std::lock_guard<std::mutex> lk(g_sums_mu);
  auto& res = g_sums[{q, h.dense_index()}].prime_residues[d];
  if (res.empty())
    for (const PolyFq& P : primes_deg(q, d)) res.push_back(P % h);
  return res;
}

// in place divide by (1 - u): prefix sums, caller guarantees L(1) ~ 0
std::vector<cplx> divide_one_minus_u(const std::vector<cplx>& c) {
  std::vector<cplx> out(c.size() > 1 ? c.size() - 1 : 0);
  cplx acc = 0.0;
  for (size_t i = 0; i + 1 < c.size(); i++) {
    acc += c[i];
    out[i] = acc;
  }
  return out;
}

}  // namespace

cplx DirichletLPoly::eval(cplx u) const {
  cplx v = 0.0;
  for (size_t i = coeffs.size(); i-- > 0;) v = v * u + coeffs[i];
  return v;
}

cplx char_sum_range(const DirichletGroup& G, const DirichletChar& chi, int k,
                    SumDomain dom) {
  ExpBuckets buckets(G.value_modulus());
  uint64_t count = dom == SumDomain::monic ? qpow64(G.q(), k)
                                           : (G.q() - 1) * qpow64(G.q(), k);
  for (uint64_t i = 0; i < count; i++) {
    PolyFq f = dom == SumDomain::monic ? monic_by_index(G.q(), k, i)
                                       : all_leading_by_index(G.q(), k, i);
    buckets.add(G.value(chi, f));
  }
  return buckets.value();
}

DirichletLPoly l_polynomial_char(const DirichletGroup& G, const DirichletChar& chi) {
  if (G.is_principal(chi))
    throw std::invalid_argument("l_polynomial_char: principal character");
  int degh = G.modulus().degree();
  int D = degh + 2;  // three degrees past the last possible nonzero coefficient

  std::vector<cplx> direct(D + 1);
  for (int n = 0; n < degh; n++) direct[n] = char_sum_range(G, chi, n, SumDomain::monic);
  for (int n = degh; n <= D; n++) {
    // same monic sum, grouped by residue class with enumerated counts
    ExpBuckets buckets(G.value_modulus());
    for (const auto& [r, cnt] : tail_classes(G.q(), G.modulus(), n))
      buckets.add(G.value(chi, r), 1, cnt);
    direct[n] = buckets.value();
  }

  for (int n = degh; n <= D; n++)
    if (std::abs(direct[n]) > kTol)
      throw std::logic_error("l_polynomial_char: coefficient past deg h - 1 not zero");

  // Euler product over primes of degree <= D must reproduce the same series
  std::vector<cplx> euler(D + 1, 0.0);
  euler[0] = 1.0;
  for (int d = 1; d <= D; d++)
    for (const PolyFq& r : prime_residues(G.q(), G.modulus(), d)) {
      CharValue v = G.value(chi, r);
      if (v.zero) continue;
      cplx z = v.to_complex();
      for (int j = d; j <= D; j++) euler[j] += z * euler[j - d];
    }
  for (int n = 0; n <= D; n++)
    if (std::abs(euler[n] - direct[n]) > kTol)
      throw std::logic_error("l_polynomial_char: Euler product mismatch");

  DirichletLPoly Lp;
  Lp.chi = chi;
  Lp.q = G.q();
  Lp.modulus = G.modulus();
  Lp.primitive = G.is_primitive(chi);
  Lp.lambda = G.is_even(chi) ? 1 : 0;
  Lp.coeffs.assign(direct.begin(), direct.begin() + degh);

  std::vector<cplx> work = Lp.coeffs;
  while (int(work.size()) > 1) {
    cplx at1 = std::accumulate(work.begin(), work.end(), cplx(0.0));
    if (std::abs(at1) > kTol) break;
    work = divide_one_minus_u(work);
    Lp.vanish_order++;
  }
  if (Lp.lambda == 1 && Lp.vanish_order < 1)
    throw std::logic_error("l_polynomial_char: even character but L(1) != 0");
  Lp.lambda_mismatch = Lp.vanish_order != Lp.lambda;

  Lp.lstar = Lp.coeffs;
  for (int i = 0; i < Lp.lambda; i++) Lp.lstar = divide_one_minus_u(Lp.lstar);
  while (Lp.lstar.size() > 1 && std::abs(Lp.lstar.back()) < kTol) Lp.lstar.pop_back();

  if (Lp.lstar.size() > 1) {
    std::vector<cplx> rev(Lp.lstar.rbegin(), Lp.lstar.rend());
    Lp.inv_roots = poly_roots(rev);
    std::sort(Lp.inv_roots.begin(), Lp.inv_roots.end(), [](cplx a, cplx b) {
      double ta = std::arg(a), tb = std::arg(b);
      return ta != tb ? ta < tb : std::abs(a) < std::abs(b);
    });
  }

  double sq = std::sqrt(double(Lp.q));
  double gate = 0.5 * (1.0 + sq);
  for (const cplx& a : Lp.inv_roots) {
    double m = std::abs(a);
    if (Lp.primitive || m > gate) {
      if (std::abs(m - sq) > 1e-6 * sq)
        throw std::logic_error("l_polynomial_char: inverse root off the sqrt(q) circle");
      Lp.rh_inv_roots.push_back(a);
      if (Lp.primitive) Lp.theta.push_back(std::arg(a));
    } else {
      if (std::abs(m - 1.0) > 1e-6)
        throw std::logic_error("l_polynomial_char: Euler-factor root off the unit circle");
      Lp.euler_inv_roots.push_back(a);
    }
  }
  return Lp;
}

ThetaTracePair theta_traces(const DirichletGroup& G, const DirichletLPoly& Lp, int n) {
  if (!Lp.primitive)
    throw std::invalid_argument("theta_traces: character is not primitive");
  if (n <= 0) throw std::invalid_argument("theta_traces: n must be positive");

  ThetaTracePair out;
  out.trace = 0.0;
  for (double th : Lp.theta) out.trace += std::polar(1.0, n * th);

  ExpBuckets buckets(G.value_modulus());
  for (int d = 1; d <= n; d++) {
    if (n % d) continue;
    uint64_t pw = uint64_t(n / d);
    for (const PolyFq& P : primes_deg(G.q(), d)) buckets.add(G.value(Lp.chi, P), pw, d);
  }
  double qn2 = std::pow(double(G.q()), 0.5 * n);
  out.vonmangoldt_side = Lp.lambda / qn2 + buckets.value() / qn2;
  return out;
}

cplx prime_char_sum(const DirichletGroup& G, const DirichletChar& chi, int n) {
  if (n <= 0) throw std::invalid_argument("prime_char_sum: n must be positive");
  ExpBuckets buckets(G.value_modulus());
  for (const PolyFq& P : primes_deg(G.q(), n)) buckets.add(G.value(chi, P));
  return buckets.value() / std::pow(double(G.q()), 0.5 * n);
}

LindelofReport lindelof_check(const DirichletLPoly& Lp, int samples) {
  LindelofReport rep;
  double r = 1.0 / std::sqrt(double(Lp.q));
  for (int j = 0; j < samples; j++) {
    double m = std::abs(Lp.eval(std::polar(r, 2.0 * M_PI * j / samples)));
    rep.max_abs = std::max(rep.max_abs, m);
  }
  int degh = Lp.modulus.degree();
  rep.bound = std::pow(16.0 * std::pow(double(Lp.q), 0.01), double(degh));
  rep.ok = rep.max_abs <= rep.bound + 1e-12;
  return rep;
}

std::vector<DirichletLPoly> l_family(const DirichletGroup& G, unsigned threads) {
  std::vector<DirichletChar> chars = G.characters();
  size_t n = chars.empty() ? 0 : chars.size() - 1;  // drop the principal head
  std::vector<DirichletLPoly> out(n);
  if (n == 0) return out;

  unsigned T = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  T = std::min<unsigned>(T, unsigned(n));
  std::vector<std::exception_ptr> errs(T);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < T; w++)
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += T) out[i] = l_polynomial_char(G, chars[i + 1]);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string l_family_csv(const DirichletGroup& G, const std::vector<DirichletLPoly>& fam) {
  std::ostringstream os;
  os.precision(12);
  int degh = G.modulus().degree();
  os << "char_index,conductor,lambda,vanish_order";
  for (int n = 0; n < degh; n++) os << ",c" << n << "_re,c" << n << "_im";
  os << ",root_moduli,max_abs_on_circle\n";
  for (size_t i = 0; i < fam.size(); i++) {
    const DirichletLPoly& Lp = fam[i];
    os << (i + 1) << ",\"" << G.conductor(Lp.chi).to_string() << "\"," << Lp.lambda
       << "," << Lp.vanish_order;
    for (int n = 0; n < degh; n++)
      os << "," << Lp.coeffs[n].real() << "," << Lp.coeffs[n].imag();
    os << ",\"";
    for (size_t j = 0; j < Lp.inv_roots.size(); j++)
      os << (j ? " " : "") << std::abs(Lp.inv_roots[j]);
    os << "\"," << lindelof_check(Lp).max_abs << "\n";
  }
  return os.str();
}

}  // namespace ffrank
