// Acceptance gate. Ten end-to-end criteria, one [PASS]/[FAIL] line each,
// nonzero exit on any failure. Checks recompute their targets independently
// of the code path under test wherever feasible: the Gauss brute below runs
// on raw field tables, the palindrome and rank checks reread the integer
// coefficients, the Fejer domination is resummed per curve from the zeros.
//
// Run with no arguments for the full gate, or pass criterion numbers to run
// a subset (development convenience, ctest always runs the full set).

#include "ffrank/characters.hpp"
#include "ffrank/dirichlet_l.hpp"
#include "ffrank/elliptic.hpp"
#include "ffrank/fourier.hpp"
#include "ffrank/fq_poly.hpp"
#include "ffrank/gf_table.hpp"
#include "ffrank/roots.hpp"
#include "ffrank/survey.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace ffrank;

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

PolyFq monic_of(uint32_t q, int d, uint64_t idx) {
  std::vector<uint32_t> cs(size_t(d) + 1, 0);
  for (int j = 0; j < d; j++) {
    cs[size_t(j)] = uint32_t(idx % q);
    idx /= q;
  }
  cs[size_t(d)] = 1;
  return PolyFq(q, cs);
}

int64_t ipow64(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// ---------------------------------------------------------------- criterion 1
// Quadratic Gauss sums against the closed form, every monic irreducible P of
// degree <= 3 at q = 5 and q = 13, every residue V mod P. The brute force
// here deliberately bypasses the character machinery: multiplication runs in
// the splitting field via log tables, the additive phase is a linear form in
// the residue digits, and the quadratic character is the field norm sign.
double gauss_brute_sweep(uint32_t q, int d, uint64_t& cases, double& xworst) {
  const auto& Ps = primes_of_degree(q, d);
  const GFTable& F = gf_table(q, d);
  uint64_t n = qpow64(q, d);
  std::vector<cplx> omega(q);
  for (uint32_t e = 0; e < q; e++)
    omega[e] = std::polar(1.0, 2.0 * M_PI * double(e) / double(q));

  std::vector<uint32_t> m(n), minv(n), lam(size_t(d), 0u);
  std::vector<cplx> psi_res(n), psi_f(n);
  std::vector<int8_t> sgn(n);
  double worst = 0.0;

  for (const PolyFq& P : Ps) {
    // residue index -> field index, by Horner at a root of P
    uint32_t th = F.theta_root(P);
    for (uint64_t idx = 0; idx < n; idx++) {
      uint32_t digs[8];
      uint64_t rest = idx;
      for (int j = 0; j < d; j++) {
        digs[j] = uint32_t(rest % q);
        rest /= q;
      }
      uint32_t acc = 0;
      for (int j = d - 1; j >= 0; j--) acc = F.add(F.mul(acc, th), digs[j]);
      m[idx] = acc;
      minv[acc] = idx;
    }
    // e(W/P) is a linear form in the digits of W
    for (int j = 0; j < d; j++)
      lam[size_t(j)] = hayes_exponent(PolyFq::monomial(q, unsigned(j)), P);
    for (uint64_t idx = 0; idx < n; idx++) {
      uint64_t rest = idx;
      uint32_t e = 0;
      for (int j = 0; j < d; j++) {
        e = (e + uint32_t(rest % q) * lam[size_t(j)]) % q;
        rest /= q;
      }
      psi_res[idx] = omega[e];
    }
    for (uint64_t f = 0; f < n; f++) psi_f[f] = psi_res[minv[f]];
    // (W/P) = chi(image of W), the field's quadratic character
    for (uint64_t w = 0; w < n; w++) sgn[w] = int8_t(F.chi(m[w]));

    DirichletGroup G(q, P);
    DirichletChar quad = G.quadratic_character();
    bool crosscheck = q == 5 && d <= 2;

    for (uint64_t V = 0; V < n; V++) {
      uint32_t mV = m[V];
      double re = 0.0, im = 0.0;
      for (uint64_t W = 1; W < n; W++) {
        int s = sgn[W];
        if (!s) continue;
        const cplx& p = psi_f[F.mul(mV, m[W])];
        re += double(s) * p.real();
        im += double(s) * p.imag();
      }
      cplx brute(re, im);
      PolyFq Vp = poly_below_deg(q, d, V);
      worst = std::max(worst, std::abs(brute - gauss_sum_prime_closed(Vp, P)));
      if (crosscheck)
        xworst = std::max(xworst, std::abs(brute - gauss_sum(G, quad, Vp)));
      cases++;
    }
  }
  return worst;
}

bool crit_gauss(std::string& detail) {
  uint64_t cases = 0;
  double worst = 0.0, xworst = 0.0;
  for (uint32_t q : {5u, 13u})
    for (int d = 1; d <= 3; d++)
      worst = std::max(worst, gauss_brute_sweep(q, d, cases, xworst));
  detail = fmt("q=5,13 deg P<=3 all V: max |brute-closed| %.2e, kernel-vs-library %.2e, %llu sums",
               worst, xworst, (unsigned long long)cases);
  return worst <= 1e-9 && xworst <= 1e-9;
}

// ---------------------------------------------------------------- criterion 2
// Both summation identities on random periodic functions, q = 5 and 7,
// 100 functions per (deg f, m) cell, deg f <= 4, 1 <= m <= 4.
bool crit_poisson(std::string& detail) {
  std::mt19937_64 rng(20260823);
  double worst = 0.0;
  uint64_t cases = 0;
  for (uint32_t q : {5u, 7u})
    for (int df = 1; df <= 4; df++)
      for (int m = 1; m <= 4; m++)
        for (int rep = 0; rep < 100; rep++) {
          PolyFq f = monic_of(q, df, rng() % qpow64(q, df));
          PeriodicFn F = PeriodicFn::random(q, f, rng());
          TwoSides a = poisson_monic(F, m);
          TwoSides b = poisson_all(F, m);
          worst = std::max(worst, std::abs(a.lhs - a.rhs));
          worst = std::max(worst, std::abs(b.lhs - b.rhs));
          cases += 2;
        }
  detail = fmt("q=5,7 deg f<=4 m<=4, 100 fns/cell: max |lhs-rhs| %.2e, %llu identities",
               worst, (unsigned long long)cases);
  return worst <= 1e-9;
}

// ---------------------------------------------------------------- criterion 3
// Elliptic family transform, brute against the closed form, every (alpha,
// beta) mod P for P = t, t+1, t^2+2 at q = 5.
bool crit_ec_fourier(std::string& detail) {
  const uint32_t q = 5;
  double worst = 0.0;
  uint64_t cases = 0;
  std::vector<PolyFq> Ps = {PolyFq::parse(q, "0,1"), PolyFq::parse(q, "1,1"),
                            PolyFq::parse(q, "2,0,1")};
  for (const PolyFq& P : Ps) {
    uint64_t n = qpow64(q, P.degree());
    for (uint64_t a = 0; a < n; a++)
      for (uint64_t b = 0; b < n; b++) {
        PolyFq al = poly_below_deg(q, P.degree(), a);
        PolyFq be = poly_below_deg(q, P.degree(), b);
        worst = std::max(worst, std::abs(ec_fourier_brute(al, be, P) -
                                         ec_fourier_closed(al, be, P)));
        cases++;
      }
  }
  detail = fmt("P = t, t+1, t^2+2 at q=5, all (alpha,beta): max diff %.2e, %llu pairs",
               worst, (unsigned long long)cases);
  return worst <= 1e-9;
}

// ---------------------------------------------------------------- criterion 4
// Riemann hypothesis for Dirichlet L: every primitive non-principal character
// to modulus of degree <= 4, q = 5 and 7, all inverse-root magnitudes on the
// sqrt(q) circle within 1e-6 of q^{-1/2} in zero coordinates. Moduli of
// degree <= 3 additionally go through the fully checked construction (tail
// and Euler product verification) plus the n <= 6 trace identity; degree-4
// moduli use the coefficient sums directly, spot-validated against the full
// construction and deflated at the structural zero u = 1 for even characters.
bool crit_dirichlet_rh(std::string& detail) {
  double root_dev = 0.0, trace_dev = 0.0, spot_dev = 0.0;
  uint64_t prim_full = 0, prim_slim = 0, traces = 0, parity_flaws = 0;

  for (uint32_t q : {5u, 7u}) {
    double rsq = 1.0 / std::sqrt(double(q));
    for (int dh = 1; dh <= 3; dh++) {
      uint64_t nh = qpow64(q, dh);
      for (uint64_t hi = 0; hi < nh; hi++) {
        DirichletGroup G(q, monic_of(q, dh, hi));
        auto fam = l_family(G, 1);
        for (const DirichletLPoly& Lp : fam) {
          if (!Lp.primitive) continue;
          prim_full++;
          for (const cplx& r : Lp.inv_roots)
            root_dev = std::max(root_dev, std::abs(1.0 / std::abs(r) - rsq));
          for (int n = 1; n <= 6; n++) {
            ThetaTracePair tt = theta_traces(G, Lp, n);
            trace_dev = std::max(trace_dev, std::abs(-tt.trace - tt.vonmangoldt_side));
            traces++;
          }
        }
      }
    }
    // degree-4 moduli: L has degree <= 3, all four coefficients are plain
    // character sums, no tail work needed
    uint64_t nh = qpow64(q, 4);
    uint64_t spot_left = 25;
    for (uint64_t hi = 0; hi < nh; hi++) {
      DirichletGroup G(q, monic_of(q, 4, hi));
      auto cs = G.characters();
      for (size_t i = 1; i < cs.size(); i++) {
        if (!G.is_primitive(cs[i])) continue;
        prim_slim++;
        std::vector<cplx> c(4);
        for (int k = 0; k < 4; k++)
          c[k] = char_sum_range(G, cs[i], k, SumDomain::monic);
        if (spot_left) {
          spot_left--;
          DirichletLPoly Lp = l_polynomial_char(G, cs[i]);
          for (int k = 0; k < 4; k++)
            spot_dev = std::max(spot_dev, std::abs(c[size_t(k)] - Lp.coeffs[size_t(k)]));
        }
        // strip (1 - u)^vanish while L(1) cancels, then the rest of the
        // zeros must sit on the critical circle
        std::vector<cplx> work = c;
        int vanish = 0;
        while (work.size() > 1) {
          cplx at1 = std::accumulate(work.begin(), work.end(), cplx(0.0));
          if (std::abs(at1) > 1e-6) break;
          std::vector<cplx> b(work.size() - 1);
          cplx acc = 0.0;
          for (size_t j = 0; j + 1 < work.size(); j++) {
            acc += work[j];
            b[j] = acc;
          }
          work = std::move(b);
          vanish++;
        }
        if (G.is_even(cs[i]) != (vanish >= 1)) parity_flaws++;
        for (const cplx& u : poly_roots(work))
          root_dev = std::max(root_dev, std::abs(std::abs(u) - rsq));
      }
    }
  }
  detail = fmt("q=5,7 deg h<=4: %llu+%llu primitive chars, max zero dev %.2e, "
               "trace id %.2e over %llu, spot dev %.2e, parity flaws %llu",
               (unsigned long long)prim_full, (unsigned long long)prim_slim, root_dev,
               trace_dev, (unsigned long long)traces, spot_dev,
               (unsigned long long)parity_flaws);
  return root_dev <= 1e-6 && trace_dev <= 1e-9 && spot_dev <= 1e-9 && parity_flaws == 0;
}

// ---------------------------------------------------------------- criterion 5
// Exact integer structure of the elliptic L-polynomial over the full degree-4
// and degree-5 coefficient families at q = 5: c_0 = 1, degree matches the
// conductor, |c_N| = q^N, palindrome with sign epsilon, all in int64 with no
// tolerance. The full product route is used, so the vanishing of the three
// coefficients past N is enforced in integer arithmetic inside the builder.
bool crit_exactness(std::string& detail) {
  uint64_t curves = 0, flagged = 0, flaws = 0;
  for (int d : {4, 5}) {
    FamilySpec s;
    s.q = 5;
    s.d = d;
    for (const auto& [A, B] : enumerate_family(s)) {
      EllipticSurface E(5, A, B);
      if (E.N() < 0) {
        flagged++;
        continue;
      }
      ECLPolynomial Lp = l_polynomial_ec(E);
      curves++;
      bool ok = Lp.c.size() == size_t(Lp.N) + 1 && Lp.c[0] == 1 &&
                Lp.N == E.deg_N - 4 &&
                std::abs(Lp.c[size_t(Lp.N)]) == ipow64(5, Lp.N);
      for (int i = 0; ok && 2 * i <= Lp.N; i++)
        ok = Lp.c[size_t(Lp.N - i)] ==
             int64_t(Lp.epsilon) * ipow64(5, Lp.N - 2 * i) * Lp.c[size_t(i)];
      if (!ok) flaws++;
    }
  }
  detail = fmt("deg-4 and deg-5 families at q=5: %llu curves exact (c0, deg, lead, "
               "palindrome), %llu flaws, %llu without L",
               (unsigned long long)curves, (unsigned long long)flaws,
               (unsigned long long)flagged);
  return flaws == 0 && curves > 0;
}

// ---------------------------------------------------------------- criterion 6
// Explicit formula: zero-side power sums equal the all-places prime side for
// n <= 6 on 100 sampled curves per degree d = 4, 5, 6.
bool crit_explicit_formula(std::string& detail) {
  double worst = 0.0;
  uint64_t cases = 0;
  for (int d : {4, 5, 6}) {
    FamilySpec s;
    s.q = 5;
    s.d = d;
    s.exhaustive = false;
    s.sample_count = 100;
    s.seed = uint64_t(900 + d);
    for (const auto& [A, B] : enumerate_family(s)) {
      EllipticSurface E(5, A, B);
      if (E.N() < 0) continue;
      ECLPolynomial Lp = l_polynomial_ec_fast(E);
      for (int n = 1; n <= 6; n++) {
        PowerSumTriple ps = zero_power_sums(E, Lp, n);
        worst = std::max(worst, std::abs(ps.lhs - ps.rhs_full));
        cases++;
      }
    }
  }
  detail = fmt("100 curves per d=4,5,6, n<=6: max |zeros - primes| %.2e, %llu identities",
               worst, (unsigned long long)cases);
  return worst <= 1e-9;
}

// ---------------------------------------------------------------- criterion 7
// Rank never beats the Fejer bound: per curve r_E <= sum_i T(mu_i/q) + 1e-9,
// resummed here from the zeros for every curve of the exhaustive families
// d <= 5; inside the survey module the same inequality is enforced per curve
// (a completed d = 6 report attests it for 49980 more curves). On aggregates,
// avg rank <= avg Fejer on every report.
bool crit_rank_fejer(std::string& detail) {
  uint64_t curves = 0, flaws = 0, reports = 0;
  double margin = 1e300;
  for (int d : {2, 3, 4, 5}) {
    FamilySpec s;
    s.q = 5;
    s.d = d;
    int v = std::max(1, 7 * d / 9);
    for (const auto& [A, B] : enumerate_family(s)) {
      EllipticSurface E(5, A, B);
      if (E.N() < 0) continue;
      ECLPolynomial Lp = l_polynomial_ec_fast(E);
      double F = 0.0;
      for (const cplx& mu : Lp.mu) F += fejer_T(mu / 5.0, v);
      if (double(Lp.analytic_rank) > F + 1e-9) flaws++;
      curves++;
    }
  }
  for (int d = 2; d <= 6; d++) {
    FamilySpec s;
    s.q = 5;
    s.d = d;
    SurveyReport rep = rank_bound_survey(s);
    margin = std::min(margin, rep.avg_fejer - rep.avg_rank);
    if (rep.avg_rank > rep.avg_fejer + 1e-12) flaws++;
    reports++;
  }
  detail = fmt("%llu curves r<=F per curve, %llu reports avg r<=avg F (min margin %.3f), "
               "%llu flaws",
               (unsigned long long)curves, (unsigned long long)reports, margin,
               (unsigned long long)flaws);
  return flaws == 0;
}

// ---------------------------------------------------------------- criterion 8
// Mixed character sum under its square-root envelope for every (n, k, l) with
// n, k, l >= 1 and q^{n+k+2l} within the term budget, both twists a = 1, 2.
bool crit_mixed(std::string& detail) {
  const uint32_t q = 5;
  double worst_ratio = 0.0;
  uint64_t cases = 0, flaws = 0;
  for (int n = 1; n <= 8; n++)
    for (int k = 1; k <= 8; k++)
      for (int l = 1; l <= 4; l++) {
        if (n + k + 2 * l > 7) continue;  // 5^8 > 200000
        for (uint32_t a : {1u, 2u}) {
          MixedSum ms = mixed_char_sum(q, n, k, l, a);
          double ratio = std::abs(ms.value) / ms.bound;
          worst_ratio = std::max(worst_ratio, ratio);
          if (std::abs(ms.value) > ms.bound) flaws++;
          cases++;
        }
      }
  detail = fmt("q=5, a=1,2, all n,k,l>=1 with q^(n+k+2l)<=200000: %llu sums, "
               "worst |S|/bound %.4f, %llu over",
               (unsigned long long)cases, worst_ratio, (unsigned long long)flaws);
  return flaws == 0 && cases > 0;
}

// ---------------------------------------------------------------- criterion 9
// Second power-sum trend across the exhaustive families d = 4, 5, 6: the
// family average of (1/2) sum_i (mu_i/q)^2 is recorded per degree. Finiteness
// and exact realness (imaginary part below 1e-9 after conjugate pairing) are
// asserted; the limiting value itself is a trend, not a tight target.
bool crit_power_trend(std::string& detail) {
  double vals[3] = {0, 0, 0};
  bool ok = true;
  int i = 0;
  for (int d : {4, 5, 6}) {
    FamilySpec s;
    s.q = 5;
    s.d = d;
    auto [norm, raw] = average_power_sum(s, 2);  // throws if imag survives
    vals[i++] = norm;
    ok = ok && std::isfinite(norm) && std::isfinite(raw);
  }
  detail = fmt("avg (1/2) sum (mu/q)^2 at d=4,5,6: %.6f / %.6f / %.6f (trend recorded)",
               vals[0], vals[1], vals[2]);
  return ok;
}

// --------------------------------------------------------------- criterion 10
// Determinism: identical surveys byte-for-byte once the wall-clock column is
// stripped, across repetition and across thread counts, exhaustive and
// sampled.
std::string strip_elapsed_csv(const std::string& csv) {
  size_t nl = csv.find('\n');
  size_t comma = csv.rfind(',');
  return csv.substr(0, nl) + csv.substr(nl, comma - nl);
}

bool crit_determinism(std::string& detail) {
  FamilySpec ex;
  ex.q = 5;
  ex.d = 4;
  std::string a = strip_elapsed_csv(survey_csv(rank_bound_survey(ex, 0, 1)));
  std::string b = strip_elapsed_csv(survey_csv(rank_bound_survey(ex, 0, 4)));
  std::string c = strip_elapsed_csv(survey_csv(rank_bound_survey(ex, 0, 1)));
  FamilySpec sm;
  sm.q = 5;
  sm.d = 6;
  sm.exhaustive = false;
  sm.sample_count = 500;
  sm.seed = 7;
  std::string d1 = strip_elapsed_csv(survey_csv(rank_bound_survey(sm, 0, 1)));
  std::string d2 = strip_elapsed_csv(survey_csv(rank_bound_survey(sm, 0, 4)));
  bool ok = a == b && b == c && d1 == d2;
  detail = fmt("exhaustive d=4 x3 (threads 1/4/1) and sampled d=6 seed 7 x2 "
               "(threads 1/4): %s after stripping elapsed-ms",
               ok ? "byte-identical" : "MISMATCH");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  struct Crit {
    int id;
    const char* name;
    bool (*run)(std::string&);
  };
  const Crit crits[] = {
      {1, "gauss sum closed form", crit_gauss},
      {2, "poisson summation", crit_poisson},
      {3, "elliptic family transform", crit_ec_fourier},
      {4, "dirichlet RH and trace identity", crit_dirichlet_rh},
      {5, "integer L-polynomial structure", crit_exactness},
      {6, "elliptic explicit formula", crit_explicit_formula},
      {7, "rank below fejer bound", crit_rank_fejer},
      {8, "mixed sum envelope", crit_mixed},
      {9, "power-sum trend", crit_power_trend},
      {10, "survey determinism", crit_determinism},
  };

  std::set<int> only;
  for (int i = 1; i < argc; i++) only.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  clk::time_point start = clk::now();
  for (const Crit& c : crits) {
    if (!only.empty() && !only.count(c.id)) continue;
    clk::time_point t0 = clk::now();
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception& e) {
      detail = fmt("threw: %s", e.what());
    }
    ran++;
    if (!pass) failed++;
    printf("[%s] %2d %-34s %s (%.1fs)\n", pass ? "PASS" : "FAIL", c.id, c.name,
           detail.c_str(), seconds_since(t0));
    fflush(stdout);
  }
  printf("acceptance: %d/%d passed (%.1fs total)\n", ran - failed, ran,
         seconds_since(start));
  return failed ? 1 : 0;
}
