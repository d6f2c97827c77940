#pragma once

#include "ffrank/elliptic.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ffrank {

// the height-ordered coefficient family: deg A = floor(d/3), deg B = floor(d/2)
// exactly, nonzero leading coefficients, nonsingular pairs only
struct FamilySpec {
  uint32_t q = 5;
  int d = 4;
  bool exhaustive = true;
  uint64_t sample_count = 0;  // sample mode
  uint64_t seed = 0;          // sample mode
  int deg_a() const { return d / 3; }
  int deg_b() const { return d / 2; }
};

inline constexpr uint64_t kDefaultFamilyBudget = 200000;

// pairs before singular exclusion: (q-1)^2 q^{deg_a + deg_b}
uint64_t family_box_size(const FamilySpec& spec);

// exhaustive mode walks the box in a fixed order skipping singular pairs, so
// the output size is the exact family count; sample mode redraws singulars
std::vector<std::pair<PolyFq, PolyFq>> enumerate_family(
    const FamilySpec& spec, uint64_t budget = kDefaultFamilyBudget);

// (1/v) sum_{|l| < v} (1 - |l|/v) z^l, real and nonnegative on the unit circle
double fejer_T(std::complex<double> z, int v);

// family average of q^{-n} sum_{P good, deg P = n} a_P; the place at infinity
// counts among the degree-1 places
double averaged_prime_sum(const FamilySpec& spec, int n,
                          uint64_t budget = kDefaultFamilyBudget);

// context-only reference envelope q^{5d/6 - (delta/2) d} / n_curves, delta = 0.01
double prime_sum_envelope(const FamilySpec& spec, uint64_t n_curves);

// family averages of (1/n) sum_i (mu_i/q)^n and sum_i (mu_i/q)^n, real parts;
// throws if the imaginary part survives the conjugate pairing
std::pair<double, double> average_power_sum(const FamilySpec& spec, int n,
                                            uint64_t budget = kDefaultFamilyBudget);

struct SurveyReport {
  FamilySpec spec;
  int v = 1;
  uint64_t n_curves = 0;    // curves aggregated (family minus flagged)
  uint64_t n_singular = 0;  // skipped (exhaustive) or redrawn (sample)
  uint64_t n_flagged = 0;   // deg N_E < 4, no L-polynomial, excluded
  double avg_degN = 0.0;
  double avg_rank = 0.0;
  double avg_fejer = 0.0;                   // avg of F_E = sum_i T(mu_i/q)
  double avg_ps_norm[4] = {0, 0, 0, 0};     // (1/n) sum (mu/q)^n, n = 1..4
  double avg_ps_raw[4] = {0, 0, 0, 0};      //       sum (mu/q)^n, n = 1..4
  double fejer_l0 = 0.0;                    // l = 0 block: avg(deg N_E - 4)/v
  double fejer_rest = 0.0;                  // avg_fejer - fejer_l0
  double avg_prime_sum_n1 = 0.0;
  double prime_envelope_n1 = 0.0;
  double se_rank = 0.0;                     // standard error of the rank mean
  double ref_bound = 0.0;                   // avg(deg N_E - 4)/v + 1/2
  double ref_25_14 = 25.0 / 14.0;
  std::map<int, uint64_t> rank_hist;
  std::vector<std::string> curve_records;   // one-line JSON records on request
  int64_t elapsed_ms = 0;
};

// the finite-scale rank pipeline: per curve the analytic rank r_E and the
// Fejer sum F_E = sum_i T(mu_i/q); r_E <= F_E is enforced per curve.
// v <= 0 picks the default max(1, 7d/9); threads = 0 uses the hardware count;
// results are bitwise independent of the thread count
SurveyReport rank_bound_survey(const FamilySpec& spec, int v = 0, int threads = 0,
                               uint64_t budget = kDefaultFamilyBudget,
                               bool keep_curves = false);

// header plus one data row, fixed column set
std::string survey_csv(const SurveyReport& rep);
std::string survey_json(const SurveyReport& rep);

}  // namespace ffrank
