#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffrank/fq_poly.hpp"

#include <cstdio>
#include <filesystem>
#include <set>

using namespace ffrank;

TEST_CASE("string round trip and arithmetic basics") {
  const uint32_t q = 5;
  PolyFq f = PolyFq::parse(q, "1,3,1");
  CHECK(f.degree() == 2);
  CHECK(f.to_string() == "1,3,1");
  CHECK(f.eval(2) == 1);  // 1 + 6 + 4 = 11 = 1 mod 5
  CHECK(PolyFq::zero(q).to_string() == "0");
  CHECK(PolyFq::parse(q, "0").is_zero());
  CHECK(PolyFq::parse(q, " 2 , 3 ") == PolyFq(q, {2, 3}));
  CHECK(PolyFq::parse(q, "-1") == PolyFq::constant(q, 4));
  CHECK_THROWS(PolyFq::parse(q, "1,x"));
  CHECK_THROWS(PolyFq::parse(q, ""));

  PolyFq a = PolyFq::parse(q, "1,1");   // t+1
  PolyFq b = PolyFq::parse(q, "4,1");   // t+4
  CHECK((a * b).to_string() == "4,0,1");  // t^2 + 4
  CHECK((a + b) == PolyFq(q, {0, 2}));
  CHECK((a - a).is_zero());
  CHECK(PolyFq::zero(q).degree() == kNegInfDeg);
  CHECK(kNegInfDeg < -1000000);
}

TEST_CASE("divrem, gcd, xgcd, inverse over enumerated pairs") {
  const uint32_t q = 5;
  for (uint64_t i = 0; i < qpow64(q, 3); i += 7) {
    PolyFq a = poly_below_deg(q, 3, i);
    for (uint64_t j = 0; j < qpow64(q, 2); j += 3) {
      PolyFq b = poly_below_deg(q, 2, j);
      if (b.is_zero()) continue;
      auto [quo, rem] = divrem(a, b);
      CHECK(quo * b + rem == a);
      CHECK(rem.degree() < b.degree());
      auto r = xgcd(a, b);
      CHECK(r.u * a + r.v * b == r.g);
      if (!a.is_zero()) CHECK(r.g.is_monic());
      CHECK(gcd(a, b) == r.g);
    }
  }
  // frozen: inverse of t mod t+1 is 4
  CHECK(inv_mod(PolyFq::t(5), PolyFq::parse(5, "1,1")) == PolyFq::constant(5, 4));
  PolyFq m = PolyFq::parse(5, "1,0,0,1");  // t^3+1 = (t+1)(t^2-t+1)
  PolyFq u = PolyFq::parse(5, "2,1");
  CHECK((inv_mod(u, m) * u) % m == PolyFq::one(5));
}

TEST_CASE("valuation and shift") {
  const uint32_t q = 5;
  PolyFq p1 = PolyFq::parse(q, "1,1");
  PolyFq p2 = PolyFq::parse(q, "2,1");
  PolyFq f = p1 * p1 * p1 * p2;
  PolyFq co;
  CHECK(valuation(f, p1, &co) == 3);
  CHECK(co == p2);
  CHECK(valuation(f, p2) == 1);
  CHECK(valuation(f, PolyFq::parse(q, "3,1")) == 0);
  CHECK(shift(PolyFq::one(q), 3) == PolyFq::monomial(q, 3));
}

static bool reducible_brute(const PolyFq& f) {
  int n = f.degree();
  for (int d = 1; 2 * d <= n; d++)
    for (uint64_t i = 0; i < qpow64(f.q, d); i++)
      if ((f % monic_by_index(f.q, d, i)).is_zero()) return true;
  return false;
}

TEST_CASE("irreducibility matches trial division and necklace counts") {
  for (uint32_t q : {5u, 7u}) {
    for (int n = 1; n <= 3; n++) {
      for (uint64_t i = 0; i < qpow64(q, n); i++) {
        PolyFq f = monic_by_index(q, n, i);
        CHECK(is_irreducible(f) == !reducible_brute(f));
      }
    }
  }
  // (1/n) sum mu(d) q^{n/d}
  CHECK(irreducible_count(5, 1) == 5);
  CHECK(irreducible_count(5, 2) == 10);
  CHECK(irreducible_count(5, 3) == 40);
  CHECK(irreducible_count(5, 4) == 150);
  CHECK(irreducible_count(5, 5) == 624);
  CHECK(irreducible_count(5, 6) == 2580);
  CHECK(irreducible_count(7, 3) == 112);
  CHECK(irreducible_count(7, 4) == 588);
  CHECK(irreducible_count(13, 2) == 78);
  CHECK(irreducible_count(13, 3) == 728);
  for (int n = 1; n <= 5; n++) {
    auto v = irreducibles_rabin(5, n);
    CHECK(v.size() == irreducible_count(5, n));
    CHECK(std::is_sorted(v.begin(), v.end()));
  }
  CHECK(irreducibles_rabin(13, 2).size() == 78);
}

TEST_CASE("enumeration indexing") {
  const uint32_t q = 7;
  std::set<std::string> seen;
  for (uint64_t i = 0; i < qpow64(q, 2); i++) {
    PolyFq f = monic_by_index(q, 2, i);
    CHECK(f.is_monic());
    CHECK(f.degree() == 2);
    seen.insert(f.to_string());
  }
  CHECK(seen.size() == 49);
  seen.clear();
  for (uint64_t i = 0; i < (q - 1) * qpow64(q, 2); i++) {
    PolyFq f = all_leading_by_index(q, 2, i);
    CHECK(f.degree() == 2);
    seen.insert(f.to_string());
  }
  CHECK(seen.size() == 6 * 49);
  // operator< agrees with (degree, dense index)
  PolyFq x = monic_by_index(q, 2, 11), y = monic_by_index(q, 2, 12);
  CHECK(x < y);
  CHECK(poly_below_deg(q, 2, 48) < x);
}

TEST_CASE("factorization recovers known products") {
  const uint32_t q = 5;
  PolyFq p1 = PolyFq::parse(q, "1,1");
  PolyFq p2 = PolyFq::parse(q, "2,0,1");  // t^2+2 irreducible mod 5
  PolyFq p3 = PolyFq::parse(q, "3,1");
  REQUIRE(is_irreducible(p2));
  PolyFq f = 3 * (p1 * p1 * p2 * p3);
  auto fac = factorize(f);
  REQUIRE(fac.size() == 3);
  CHECK(fac[0].p == p1); CHECK(fac[0].e == 2);
  CHECK(fac[1].p == p3); CHECK(fac[1].e == 1);
  CHECK(fac[2].p == p2); CHECK(fac[2].e == 1);

  // t^5 - t = product of all linear monics; (t+1)^5 = t^5 + 1 hits the p-th root path
  auto lin = factorize(PolyFq::parse(q, "0,4,0,0,0,1"));
  CHECK(lin.size() == 5);
  for (auto& fe : lin) { CHECK(fe.e == 1); CHECK(fe.p.degree() == 1); }
  auto pth = factorize(PolyFq::parse(q, "1,0,0,0,0,1"));
  REQUIRE(pth.size() == 1);
  CHECK(pth[0].p == p1);
  CHECK(pth[0].e == 5);

  // t^25 - t = all primes of degree 1 and 2
  std::vector<uint32_t> big(26, 0);
  big[1] = 4; big[25] = 1;
  auto fac2 = factorize(PolyFq(q, big));
  size_t d1 = 0, d2 = 0;
  for (auto& fe : fac2) {
    CHECK(fe.e == 1);
    if (fe.p.degree() == 1) d1++; else if (fe.p.degree() == 2) d2++;
  }
  CHECK(d1 == 5);
  CHECK(d2 == 10);
  // deterministic across calls
  auto fac3 = factorize(PolyFq(q, big));
  REQUIRE(fac2.size() == fac3.size());
  for (size_t i = 0; i < fac2.size(); i++) CHECK(fac2[i].p == fac3[i].p);
}

TEST_CASE("laurent tail at infinity") {
  const uint32_t q = 5;
  // 1/(t+1) = t^-1 - t^-2 + t^-3 - ...
  auto tail = laurent_tail(PolyFq::one(q), PolyFq::parse(q, "1,1"), 4);
  CHECK(tail == std::vector<uint32_t>({1, 4, 1, 4}));
  // deg A <= n-1, H monic deg n: coefficient of t^-1 is the top coefficient of A
  PolyFq H = PolyFq::parse(q, "1,2,0,1");
  for (uint64_t i = 0; i < qpow64(q, 3); i += 11) {
    PolyFq A = poly_below_deg(q, 3, i);
    CHECK(laurent_tail(A, H, 1)[0] == A.coeff(2));
  }
  // polynomial part is discarded: (G*H + R)/H has the same tail as R/H
  PolyFq G = PolyFq::parse(q, "2,3,1");
  PolyFq R = PolyFq::parse(q, "4,0,2");
  CHECK(laurent_tail(G * H + R, H, 6) == laurent_tail(R, H, 6));
  // unit scaling of H
  PolyFq A2 = PolyFq::parse(q, "1,4,2");
  CHECK(laurent_tail(A2, 3 * H, 5) == laurent_tail(invq(3, q) * A2, H, 5));
  CHECK(laurent_tail(PolyFq::zero(q), H, 3) == std::vector<uint32_t>({0, 0, 0}));
}

TEST_CASE("prime cache round trip and corruption handling") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "ffrank_test_cache";
  fs::create_directories(dir);
  PrimeCache cache;
  cache.q = 5;
  cache.by_degree.resize(4);
  for (int d = 1; d <= 3; d++) cache.by_degree[d] = irreducibles_rabin(5, d);
  std::string path = prime_cache_path(dir.string(), 5);
  REQUIRE(save_prime_cache(cache, path));
  auto loaded = load_prime_cache(5, path);
  REQUIRE(loaded.has_value());
  CHECK(loaded->max_complete_degree() == 3);
  CHECK(loaded->by_degree[3] == cache.by_degree[3]);

  // wrong q in header
  CHECK(!load_prime_cache(7, path).has_value());

  // truncated final degree: still usable up to degree 2
  cache.by_degree[3].pop_back();
  REQUIRE(save_prime_cache(cache, path));
  auto partial = load_prime_cache(5, path);
  REQUIRE(partial.has_value());
  CHECK(partial->max_complete_degree() == 2);

  // scrambled order rejected
  std::swap(cache.by_degree[2][0], cache.by_degree[2][1]);
  REQUIRE(save_prime_cache(cache, path));
  CHECK(!load_prime_cache(5, path).has_value());
  fs::remove_all(dir);
}
