#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffrank/gf_table.hpp"

using namespace ffrank;

static uint32_t eval_in_field(const GFTable& F, const PolyFq& P, uint32_t x) {
  uint32_t acc = 0;
  for (int i = P.degree(); i >= 0; i--) acc = F.add(F.mul(acc, x), P.coeff(i) % F.q());
  return acc;
}

TEST_CASE("field arithmetic against the quotient ring") {
  const GFTable& F = gf_table(5, 2);
  CHECK(F.size() == 25);
  CHECK(F.modulus().degree() == 2);
  for (uint32_t a = 0; a < 25; a++) {
    PolyFq pa = F.element_poly(a);
    CHECK(F.embed(pa) == a);
    CHECK(F.neg(a) == F.embed(-pa));
    CHECK(F.cube(a) == F.mul(F.mul(a, a), a));
    for (uint32_t b = 0; b < 25; b++) {
      CHECK(F.add(a, b) == F.embed(pa + F.element_poly(b)));
      CHECK(F.mul(a, b) == F.embed(pa * F.element_poly(b) % F.modulus()));
    }
    if (a) {
      CHECK(F.mul(a, F.inv(a)) == 1);
      CHECK(F.pow(a, 24) == 1);
      // quadratic character: +1 iff even power of the generator iff a^{12} = 1
      int brute = F.pow(a, 12) == 1 ? 1 : -1;
      CHECK(F.chi(a) == brute);
    }
  }
  CHECK(F.chi(0) == 0);
  CHECK(F.pow(0, 0) == 1);
  CHECK(F.pow(0, 7) == 0);
  // frobenius is additive and fixes scalars
  for (uint32_t a = 0; a < 25; a++) {
    for (uint32_t b = 0; b < 25; b++) CHECK(F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b)));
  }
  for (uint32_t s = 0; s < 5; s++) CHECK(F.frob(s) == s);
}

TEST_CASE("degree one field is F_q itself") {
  const GFTable& F = gf_table(7, 1);
  CHECK(F.size() == 7);
  for (uint32_t a = 0; a < 7; a++)
    for (uint32_t b = 0; b < 7; b++) {
      CHECK(F.add(a, b) == addq(a, b, 7));
      CHECK(F.mul(a, b) == mulq(a, b, 7));
    }
  // legendre symbols mod 7: squares are 1,2,4
  CHECK(F.chi(1) == 1); CHECK(F.chi(2) == 1); CHECK(F.chi(4) == 1);
  CHECK(F.chi(3) == -1); CHECK(F.chi(5) == -1); CHECK(F.chi(6) == -1);
  CHECK(F.theta_root(PolyFq::parse(7, "3,1")) == 4);  // root of t+3
}

TEST_CASE("minimal polynomials and the root directory") {
  const GFTable& F = gf_table(5, 3);
  CHECK(F.min_poly(F.embed(PolyFq::t(5))) == F.modulus());
  for (uint32_t s = 0; s < 5; s++) {
    PolyFq mp = F.min_poly(s);
    CHECK(mp.degree() == 1);
    CHECK(mp.coeff(0) == negq(s, 5));
  }
  for (const PolyFq& P : primes_of_degree(5, 3)) {
    uint32_t r = F.theta_root(P);
    CHECK(eval_in_field(F, P, r) == 0);
    CHECK(F.min_poly(r) == P);
  }
}

TEST_CASE("fast prime lists match the Rabin reference") {
  for (int d = 1; d <= 5; d++) {
    auto fast = primes_of_degree(5, d);
    CHECK(fast == irreducibles_rabin(5, d));
  }
  for (int d = 1; d <= 3; d++) CHECK(primes_of_degree(7, d) == irreducibles_rabin(7, d));
  CHECK(primes_of_degree(13, 2) == irreducibles_rabin(13, 2));
  CHECK(primes_of_degree(5, 6).size() == 2580);
}

TEST_CASE("seeding the registry from a disk cache") {
  PrimeCache cache;
  cache.q = 13;
  cache.by_degree.resize(2);
  cache.by_degree[1] = irreducibles_rabin(13, 1);
  seed_primes_from_cache(cache);
  CHECK(primes_of_degree(13, 1).size() == 13);
}
