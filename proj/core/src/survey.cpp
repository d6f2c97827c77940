#include "ffrank/survey.hpp"

#include "ffrank/gf_table.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ffrank {

namespace {

bool singular_pair(const PolyFq& A, const PolyFq& B) {
  return (PolyFq::constant(A.q, 4) * A * A * A +
          PolyFq::constant(A.q, 27) * B * B).is_zero();
}

PolyFq poly_from_box_index(uint32_t q, int deg, uint64_t idx) {
  std::vector<uint32_t> c(size_t(deg) + 1);
  uint64_t low = idx % qpow64(q, deg);
  for (int j = 0; j < deg; j++) {
    c[j] = uint32_t(low % q);
    low /= q;
  }
  c[deg] = 1 + uint32_t(idx / qpow64(q, deg));
  return PolyFq(q, std::move(c));
}

PolyFq draw_exact_deg(uint32_t q, int deg, std::mt19937_64& rng) {
  std::vector<uint32_t> c(size_t(deg) + 1);
  for (int j = 0; j < deg; j++) c[j] = uint32_t(rng() % q);
  c[deg] = 1 + uint32_t(rng() % (q - 1));
  return PolyFq(q, std::move(c));
}

// q^{-n} sum of a_P over good places of degree n, infinity among degree 1
double prime_sum_n(const EllipticSurface& E, int n) {
  const auto& primes = primes_of_degree(E.q, n);
  const auto& traces = E.good_traces(n);
  int64_t s = 0;
  for (size_t i = 0; i < primes.size(); i++) {
    const ReductionDatum* sp = nullptr;
    for (const auto& d : E.finite_special)
      if (d.place.degree() == n && d.place == primes[i]) {
        sp = &d;
        break;
      }
    if (!sp)
      s += traces[i];
    else if (sp->type == RedType::good)
      s += sp->aP;
  }
  if (n == 1 && E.infinity.type == RedType::good) s += E.infinity.aP;
  return double(s) / std::pow(double(E.q), n);
}

struct Accum {
  uint64_t curves = 0, flagged = 0;
  double degN = 0, rank = 0, rank2 = 0, fejer = 0, l0 = 0;
  double psn[4] = {0, 0, 0, 0}, psr[4] = {0, 0, 0, 0};
  double prime1 = 0;
  std::map<int, uint64_t> hist;
  std::vector<std::string> records;
};

}  // namespace

uint64_t family_box_size(const FamilySpec& spec) {
  return uint64_t(spec.q - 1) * (spec.q - 1) *
         qpow64(spec.q, spec.deg_a() + spec.deg_b());
}

std::vector<std::pair<PolyFq, PolyFq>> enumerate_family(const FamilySpec& spec,
                                                        uint64_t budget) {
  if (spec.q < 5) throw std::invalid_argument("enumerate_family: q must be >= 5");
  if (spec.d < 0) throw std::invalid_argument("enumerate_family: d must be >= 0");
  std::vector<std::pair<PolyFq, PolyFq>> out;
  if (spec.exhaustive) {
    if (family_box_size(spec) > budget)
      throw std::invalid_argument(
          "enumerate_family: box of " + std::to_string(family_box_size(spec)) +
          " pairs exceeds the budget " + std::to_string(budget) +
          "; use sample mode");
    uint64_t na = uint64_t(spec.q - 1) * qpow64(spec.q, spec.deg_a());
    uint64_t nb = uint64_t(spec.q - 1) * qpow64(spec.q, spec.deg_b());
    out.reserve(na * nb);
    for (uint64_t i = 0; i < na; i++) {
      PolyFq A = poly_from_box_index(spec.q, spec.deg_a(), i);
      for (uint64_t j = 0; j < nb; j++) {
        PolyFq B = poly_from_box_index(spec.q, spec.deg_b(), j);
        if (!singular_pair(A, B)) out.emplace_back(A, std::move(B));
      }
    }
  } else {
    std::mt19937_64 rng(spec.seed);
    out.reserve(spec.sample_count);
    while (out.size() < spec.sample_count) {
      PolyFq A = draw_exact_deg(spec.q, spec.deg_a(), rng);
      PolyFq B = draw_exact_deg(spec.q, spec.deg_b(), rng);
      if (!singular_pair(A, B)) out.emplace_back(std::move(A), std::move(B));
    }
  }
  return out;
}

double fejer_T(std::complex<double> z, int v) {
  if (v < 1) throw std::invalid_argument("fejer_T: v must be >= 1");
  if (std::abs(std::abs(z) - 1.0) > 1e-6)
    throw std::invalid_argument("fejer_T: z must lie on the unit circle");
  std::complex<double> acc = 1.0, zp = 1.0, zn = 1.0;
  for (int l = 1; l < v; l++) {
    zp *= z;
    zn /= z;
    acc += (1.0 - double(l) / v) * (zp + zn);
  }
  return acc.real() / v;
}

double prime_sum_envelope(const FamilySpec& spec, uint64_t n_curves) {
  double delta = 0.01;
  return std::pow(double(spec.q), 5.0 * spec.d / 6.0 - (delta / 2.0) * spec.d) /
         double(n_curves ? n_curves : 1);
}

double averaged_prime_sum(const FamilySpec& spec, int n, uint64_t budget) {
  auto fam = enumerate_family(spec, budget);
  double s = 0;
  uint64_t counted = 0;
  for (const auto& [A, B] : fam) {
    EllipticSurface E(spec.q, A, B);
    if (E.N() < 0) continue;
    s += prime_sum_n(E, n);
    counted++;
  }
  return counted ? s / double(counted) : 0.0;
}

std::pair<double, double> average_power_sum(const FamilySpec& spec, int n,
                                            uint64_t budget) {
  auto fam = enumerate_family(spec, budget);
  std::complex<double> raw = 0.0;
  uint64_t counted = 0;
  for (const auto& [A, B] : fam) {
    EllipticSurface E(spec.q, A, B);
    if (E.N() < 0) continue;
    ECLPolynomial Lp = l_polynomial_ec_fast(E);
    for (auto m : Lp.mu) {
      std::complex<double> z = m / double(spec.q), zp = 1.0;
      for (int j = 0; j < n; j++) zp *= z;
      raw += zp;
    }
    counted++;
  }
  if (counted) raw /= double(counted);
  if (std::abs(raw.imag()) > 1e-9)
    throw std::logic_error("average_power_sum: conjugate pairing failed");
  return {raw.real() / n, raw.real()};
}

SurveyReport rank_bound_survey(const FamilySpec& spec, int v, int threads,
                               uint64_t budget, bool keep_curves) {
  if (spec.d < 2)
    throw std::invalid_argument("rank_bound_survey: d must be >= 2 (constant curves)");
  auto t0 = std::chrono::steady_clock::now();
  if (v <= 0) v = std::max(1, 7 * spec.d / 9);

  auto fam = enumerate_family(spec, budget);
  uint64_t n_singular =
      spec.exhaustive ? family_box_size(spec) - fam.size() : 0;

  const size_t kBlock = 256;
  size_t n_blocks = (fam.size() + kBlock - 1) / kBlock;
  std::vector<Accum> partials(n_blocks);

  unsigned T = threads > 0 ? unsigned(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errs(T);

  auto work = [&](unsigned w) {
    try {
      for (size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
        Accum& a = partials[b];
        size_t lo = b * kBlock, hi = std::min(lo + kBlock, fam.size());
        for (size_t i = lo; i < hi; i++) {
          EllipticSurface E(spec.q, fam[i].first, fam[i].second);
          if (E.N() < 0) {
            a.flagged++;
            continue;
          }
          ECLPolynomial Lp = l_polynomial_ec_fast(E);
          double F = 0;
          for (auto m : Lp.mu) F += fejer_T(m / double(spec.q), v);
          if (double(Lp.analytic_rank) > F + 1e-9)
            throw std::logic_error("rank_bound_survey: r_E > F_E, Fejer side broken");
          a.curves++;
          a.degN += E.deg_N;
          a.rank += Lp.analytic_rank;
          a.rank2 += double(Lp.analytic_rank) * Lp.analytic_rank;
          a.fejer += F;
          a.l0 += double(Lp.N) / v;
          auto p = newton_power_sums(Lp, 4);
          for (int n = 1; n <= 4; n++) {
            double r = double(p[n]) / std::pow(double(spec.q), n);
            a.psr[n - 1] += r;
            a.psn[n - 1] += r / n;
          }
          a.prime1 += prime_sum_n(E, 1);
          a.hist[Lp.analytic_rank]++;
          if (keep_curves) a.records.push_back(curve_json(E, Lp, -1));
        }
      }
    } catch (...) {
      errs[w] = std::current_exception();
    }
  };

  if (T <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < T; w++) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  // merge in fixed block order so the result is thread-count independent
  Accum tot;
  for (auto& a : partials) {
    tot.curves += a.curves;
    tot.flagged += a.flagged;
    tot.degN += a.degN;
    tot.rank += a.rank;
    tot.rank2 += a.rank2;
    tot.fejer += a.fejer;
    tot.l0 += a.l0;
    for (int n = 0; n < 4; n++) {
      tot.psn[n] += a.psn[n];
      tot.psr[n] += a.psr[n];
    }
    tot.prime1 += a.prime1;
    for (const auto& [r, c] : a.hist) tot.hist[r] += c;
    for (auto& s : a.records) tot.records.push_back(std::move(s));
  }

  SurveyReport rep;
  rep.spec = spec;
  rep.v = v;
  rep.n_curves = tot.curves;
  rep.n_singular = n_singular;
  rep.n_flagged = tot.flagged;
  rep.rank_hist = std::move(tot.hist);
  rep.curve_records = std::move(tot.records);
  if (tot.curves) {
    double n = double(tot.curves);
    rep.avg_degN = tot.degN / n;
    rep.avg_rank = tot.rank / n;
    rep.avg_fejer = tot.fejer / n;
    rep.fejer_l0 = tot.l0 / n;
    rep.fejer_rest = rep.avg_fejer - rep.fejer_l0;
    for (int i = 0; i < 4; i++) {
      rep.avg_ps_norm[i] = tot.psn[i] / n;
      rep.avg_ps_raw[i] = tot.psr[i] / n;
    }
    rep.avg_prime_sum_n1 = tot.prime1 / n;
    rep.prime_envelope_n1 = prime_sum_envelope(spec, tot.curves);
    rep.ref_bound = (rep.avg_degN - 4.0) / v + 0.5;
    if (tot.curves >= 2) {
      double var = (tot.rank2 - n * rep.avg_rank * rep.avg_rank) / (n - 1.0);
      rep.se_rank = std::sqrt(std::max(0.0, var) / n);
    }
  }
  rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return rep;
}

std::string survey_csv(const SurveyReport& rep) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "q,d,mode,seed,n_curves,avg_degN,avg_rank,avg_fejer,v";
  for (int n = 1; n <= 4; n++) os << ",avg_powsum_norm_n" << n;
  for (int n = 1; n <= 4; n++) os << ",avg_powsum_raw_n" << n;
  os << ",ref_bound,ref_25_14,elapsed_ms\n";
  os << rep.spec.q << ',' << rep.spec.d << ','
     << (rep.spec.exhaustive ? "exhaustive" : "sample") << ',' << rep.spec.seed
     << ',' << rep.n_curves << ',' << rep.avg_degN << ',' << rep.avg_rank << ','
     << rep.avg_fejer << ',' << rep.v;
  for (int i = 0; i < 4; i++) os << ',' << rep.avg_ps_norm[i];
  for (int i = 0; i < 4; i++) os << ',' << rep.avg_ps_raw[i];
  os << ',' << rep.ref_bound << ',' << rep.ref_25_14 << ',' << rep.elapsed_ms
     << '\n';
  return os.str();
}

std::string survey_json(const SurveyReport& rep) {
  nlohmann::ordered_json j;
  j["q"] = rep.spec.q;
  j["d"] = rep.spec.d;
  j["mode"] = rep.spec.exhaustive ? "exhaustive" : "sample";
  j["seed"] = rep.spec.seed;
  j["v"] = rep.v;
  j["n_curves"] = rep.n_curves;
  j["n_singular"] = rep.n_singular;
  j["n_flagged"] = rep.n_flagged;
  j["avg_degN"] = rep.avg_degN;
  j["avg_rank"] = rep.avg_rank;
  j["se_rank"] = rep.se_rank;
  j["avg_fejer"] = rep.avg_fejer;
  j["fejer_l0"] = rep.fejer_l0;
  j["fejer_rest"] = rep.fejer_rest;
  j["avg_powsum_norm"] = rep.avg_ps_norm;
  j["avg_powsum_raw"] = rep.avg_ps_raw;
  j["avg_prime_sum_n1"] = rep.avg_prime_sum_n1;
  j["prime_envelope_n1"] = rep.prime_envelope_n1;
  j["ref_bound"] = rep.ref_bound;
  j["ref_25_14"] = rep.ref_25_14;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [r, c] : rep.rank_hist) h[std::to_string(r)] = c;
  j["rank_hist"] = h;
  j["elapsed_ms"] = rep.elapsed_ms;
  return j.dump(2);
}

}  // namespace ffrank
