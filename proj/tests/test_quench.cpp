#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>

#include "nhdqpt/errors.hpp"
#include "nhdqpt/quench.hpp"
#include "oracles.hpp"

using namespace nhdqpt;
using std::numbers::pi;

namespace {

ChiralTwoBandModel random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(-2.0, 2.0), pos(0.05, 2.0);
  switch (rng() % 3) {
    case 0: return build_lkc({p(rng), p(rng), p(rng), p(rng)});
    case 1: return build_nnn_lkc({p(rng), p(rng), p(rng), p(rng), p(rng), p(rng)});
    default: return build_nrssh({p(rng), pos(rng), pos(rng)});
  }
}

double min_distance_to_critical(const CriticalSet& cs, double t) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.momenta.size(); ++i) {
    for (int n = 1; n <= 64; ++n) d = std::min(d, std::abs(t - cs.time(i, n)));
  }
  return d;
}

}  // namespace

TEST_CASE("return amplitude examples") {
  const auto m = build_lkc({1, 1, 0, 0.3});
  CHECK(return_amplitude(m, 0.7, 0.0) == Complex(1.0, 0.0));
  CHECK(std::abs(return_amplitude(m, pi / 2, pi / (2 * std::sqrt(0.91)))) < 1e-10);

  // k = 0: E = 1 - 0.3i, |G| ~ e^{|Im E| t}/2 for large t
  const double g5 = std::abs(return_amplitude(m, 0.0, 5.0));
  CHECK(g5 == doctest::Approx(std::abs(std::cos(Complex(1, -0.3) * 5.0))));
  CHECK(g5 / (0.5 * std::exp(0.3 * 5.0)) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("return amplitude against half trace of the matrix exponential") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> kd(-pi, pi), td(0.0, 6.0);
  double worst = 0.0, branch = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto m = random_model(rng);
    const double k = kd(rng);
    double t = td(rng);
    const Complex e = dispersion(m, k);
    if (std::abs(e.imag()) * t > 10.0) t = 10.0 / std::abs(e.imag());
    const Complex g = return_amplitude(m, k, t);
    const Complex ref = 0.5 * oracle::expm(-kI * t * hamiltonian(m, k)).trace();
    worst = std::max(worst, std::abs(g - ref) / std::max(1.0, std::abs(ref)));
    branch = std::max(branch, std::abs(std::cos(-e * t) - g) / std::max(1.0, std::abs(g)));
  }
  CHECK(worst <= 1e-10);
  CHECK(branch <= 1e-12);
}

TEST_CASE("critical sets of the figure parameter sets") {
  SUBCASE("LKC") {
    const auto cs = critical_set(build_lkc({1, 1, 0, 0.3}));
    REQUIRE(cs.momenta.size() == 2);
    CHECK(cs.momenta[0].k == doctest::Approx(-pi / 2));
    CHECK(cs.momenta[1].k == doctest::Approx(pi / 2));
    CHECK(cs.momenta[0].period == doctest::Approx(3.2932839).epsilon(1e-7));
    CHECK(cs.time(0, 1) == doctest::Approx(1.6466420).epsilon(1e-7));
    CHECK(cs.distinct_periods().size() == 1);
    CHECK(critical_set(build_lkc({1, 1, 0, 1.3})).empty());
  }
  SUBCASE("NNN-LKC v = 1.4 keeps only the k0+ pair") {
    const auto m = build_nnn_lkc({1, 1.5, 1, 1.5, 0.5, 1.4});
    const auto cs = critical_set(m);
    REQUIRE(cs.momenta.size() == 2);
    const double kp = std::acos((-1 + std::sqrt(13.0)) / 6);
    CHECK(kp == doctest::Approx(1.1215813).epsilon(1e-7));
    CHECK(std::abs(cs.momenta[1].k) == doctest::Approx(kp));
    const double km = std::acos((-1 - std::sqrt(13.0)) / 6);
    CHECK(std::abs(m.h_on(PauliAxis::y, km)) == doctest::Approx(0.8351).epsilon(1e-4));
    CHECK(critical_set(build_nnn_lkc({1, 1.5, 1, 1.5, 0.5, 0.4})).distinct_periods().size() == 2);
    CHECK(critical_set(build_nnn_lkc({1, 1.5, 1, 1.5, 0.5, 2.4})).empty());
  }
  SUBCASE("NRSSH") {
    const auto cs = critical_set(build_nrssh({0.5, 0.8, 0.2}));
    REQUIRE(cs.momenta.size() == 2);
    CHECK(cs.momenta[0].k == doctest::Approx(-pi));
    CHECK(cs.momenta[1].k == 0.0);
    CHECK(cs.time(1, 1) == doctest::Approx(1.2228633).epsilon(1e-7));
    CHECK(cs.time(0, 1) == doctest::Approx(7.02481).epsilon(1e-5));
    const auto half = critical_set(build_nrssh({0.5, 0.4, 0.5}));
    REQUIRE(half.momenta.size() == 1);
    CHECK(half.momenta[0].k == 0.0);
    CHECK(critical_set(build_nrssh({0.5, 0.2, 0.8})).empty());
  }
  SUBCASE("unobservable candidates at the norm-balance equality") {
    // NRSSH with J1 + J2 = gamma: E(0) = 0, t_n diverges
    const auto cs = critical_set(build_nrssh({0.5, 0.5, 1.0}));
    REQUIRE(cs.unobservable.size() == 1);
    CHECK(cs.unobservable[0] == 0.0);
  }
}

TEST_CASE("critical set properties") {
  std::mt19937_64 rng(5);
  double subset = 0.0, ladder = 0.0, closed_vs_scan = 0.0;
  for (int i = 0; i < 300; ++i) {
    const auto m = random_model(rng);
    const auto cs = critical_set(m);
    for (std::size_t j = 0; j < cs.momenta.size(); ++j) {
      const auto r = gap_residual(m, cs.momenta[j].k);
      subset = std::max(subset, std::abs(r.orthogonality));
      CHECK(r.norm_balance > 0.0);
      CHECK(cs.momenta[j].energy == doctest::Approx(dispersion(m, cs.momenta[j].k).real()));
      for (int n = 1; n < 8; ++n) {
        ladder = std::max(ladder, std::abs(cs.time(j, n + 1) - cs.time(j, n) - cs.momenta[j].period));
      }
    }
    const auto alt = critical_set_from_candidates(m);
    REQUIRE(alt.momenta.size() == cs.momenta.size());
    for (std::size_t j = 0; j < cs.momenta.size(); ++j) {
      closed_vs_scan = std::max(closed_vs_scan, std::abs(alt.momenta[j].period - cs.momenta[j].period));
    }
  }
  CHECK(subset <= 1e-10);
  CHECK(ladder <= 1e-12);
  CHECK(closed_vs_scan <= 1e-9);
}

TEST_CASE("times in window") {
  const auto cs = critical_set(build_lkc({1, 1, 0, 0.3}));
  const auto ts = cs.times_in_window(0.0, 10.0);
  const double t1 = pi / (2 * std::sqrt(0.91));
  REQUIRE(ts.size() == 3);  // +-k_c share a ladder
  CHECK(ts[0] == doctest::Approx(t1));
  CHECK(ts[1] == doctest::Approx(3 * t1));
  CHECK(ts[2] == doctest::Approx(5 * t1));
}

TEST_CASE("rate function") {
  const auto m = build_lkc({1, 1, 0, 0.3});
  CHECK(rate_function(m, 0.0) == 0.0);

  auto energy = [&](double k) { return dispersion(m, k); };
  for (double t : {0.4, 1.2, 2.5, 7.0}) {
    CHECK(rate_function(m, t, 4096) == doctest::Approx(oracle::rate(energy, t, 4096)).epsilon(1e-10));
  }

  // convergence away from critical times
  const auto cs = critical_set(m);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> td(0.0, 10.0);
  int checked = 0;
  while (checked < 20) {
    const double t = td(rng);
    if (min_distance_to_critical(cs, t) < 0.05) continue;
    CHECK(std::abs(rate_function(m, t, 2049) - rate_function(m, t, 8193)) <= 1e-4);
    ++checked;
  }

  // n_k = 66 puts a midpoint on k_c = pi/2, where G(t_1) vanishes
  const double t1 = pi / (2 * std::sqrt(0.91));
  CHECK(std::isinf(rate_function(m, t1, 66)));
  CHECK(std::isfinite(rate_function(m, t1 + 1e-3, 8192)));

  // large |Im E| t stays finite
  CHECK(std::isfinite(rate_function(build_lkc({1, 1, 0, 1.3}), 400.0)));
}

TEST_CASE("quench trace") {
  const auto m = build_nrssh({0.5, 0.8, 0.2});
  const auto a = quench_trace(m, 0.0, 2.0, 0.01, 1024, 1);
  const auto b = quench_trace(m, 0.0, 2.0, 0.01, 1024, 5);
  REQUIRE(a.times.size() == 201);
  CHECK(a.times.back() == doctest::Approx(2.0));
  CHECK(a.n_k == 1024);
  for (std::size_t i = 0; i < a.rate.size(); ++i) {
    CHECK(std::memcmp(&a.rate[i], &b.rate[i], sizeof(double)) == 0);
    CHECK(std::isfinite(a.rate[i]));
  }
  CHECK_THROWS_AS(quench_trace(m, 0.0, 1.0, 0.0), ParameterError);
}

TEST_CASE("cusp detection") {
  SUBCASE("LKC topological") {
    const auto m = build_lkc({1, 1, 0, 0.3});
    const auto tr = quench_trace(m, 0.0, 10.0, 1e-3, 8192, 8);
    const auto cusps = detect_cusps(tr);
    const auto expected = critical_set(m).times_in_window(0.0, 10.0);
    REQUIRE(cusps.size() == expected.size());
    for (std::size_t i = 0; i < cusps.size(); ++i) CHECK(std::abs(cusps[i] - expected[i]) <= 2e-3);
  }
  SUBCASE("LKC trivial") {
    const auto tr = quench_trace(build_lkc({1, 1, 0, 1.3}), 0.0, 12.0, 1e-3, 8192, 8);
    CHECK(detect_cusps(tr).empty());
  }
  SUBCASE("NRSSH anomalous row shows both ladders") {
    const auto m = build_nrssh({0.5, 0.2, 0.1});
    const auto cs = critical_set(m);
    const auto tr = quench_trace(m, 0.0, 12.0, 1e-3, 8192, 8);
    const auto cusps = detect_cusps(tr);
    const auto expected = cs.times_in_window(0.0, 12.0);
    REQUIRE(cusps.size() == expected.size());
    bool zero = false, edge = false;
    for (std::size_t i = 0; i < cusps.size(); ++i) {
      CHECK(std::abs(cusps[i] - expected[i]) <= 2e-3);
      for (std::size_t j = 0; j < cs.momenta.size(); ++j) {
        for (int n = 1; n <= 8; ++n) {
          if (std::abs(cusps[i] - cs.time(j, n)) <= 2e-3) (cs.momenta[j].k == 0.0 ? zero : edge) = true;
        }
      }
    }
    CHECK(zero);
    CHECK(edge);
  }
  SUBCASE("degenerate traces") {
    QuenchTrace flat;
    for (int i = 0; i < 100; ++i) {
      flat.times.push_back(0.1 * i);
      flat.rate.push_back(0.25);
    }
    CHECK(detect_cusps(flat).empty());
    QuenchTrace tiny{{0.0, 1.0}, {0.0, 0.0}, 64};
    CHECK_THROWS_AS(detect_cusps(tiny), ParameterError);
  }
  SUBCASE("synthetic kink") {
    QuenchTrace kink;
    for (int i = 0; i <= 2000; ++i) {
      const double t = 1e-3 * i;
      kink.times.push_back(t);
      kink.rate.push_back(std::sin(t) + std::abs(t - 1.2345));
    }
    const auto c = detect_cusps(kink);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == doctest::Approx(1.2345).epsilon(1e-3));
  }
}

TEST_CASE("correspondence report") {
  SUBCASE("LKC") {
    const auto r = dqpt_report(build_lkc({1, 1, 0, 0.3}));
    CHECK(r.consistent);
    CHECK(r.row.w == 1.0);
    CHECK(r.row.geometric_picture == "Two EPs are encircled by h(k)");
    CHECK(r.row.critical_structure.find("DQPTs at t_n(k_c)") == 0);
    const auto t = dqpt_report(build_lkc({1, 1, 0, 1.3}));
    CHECK(t.consistent);
    CHECK(t.row.critical_structure == "No k_c and t_n, no DQPTs");
    CHECK_THROWS_AS(dqpt_report(build_lkc({1, 1, 0, 1.0})), GaplessError);
  }
  SUBCASE("NNN-LKC") {
    const double ws[] = {2, 1, 0};
    const double vs[] = {0.4, 1.4, 2.4};
    for (int i = 0; i < 3; ++i) {
      const auto r = dqpt_report(build_nnn_lkc({1, 1.5, 1, 1.5, 0.5, vs[i]}));
      CHECK(r.consistent);
      CHECK(r.row.w == ws[i]);
      CHECK(r.row.periods == 2 - i);
    }
    CHECK(dqpt_report(build_nnn_lkc({1, 1.5, 1, 1.5, 0.5, 2.4})).row.geometric_picture ==
          "No EPs are encircled by h(k)");
    // J2 = Delta2 = 0 is the plain LKC: one k_0 pair from cos k_0 = -u/J1
    const auto plain = dqpt_report(build_nnn_lkc({1, 0, 1, 0, 0.2, 0.4}));
    CHECK(plain.consistent);
    CHECK(plain.row.w == 1.0);
    REQUIRE(plain.row.momenta.size() == 1);
    CHECK(plain.row.momenta[0] == doctest::Approx(std::acos(-0.2)));
  }
  SUBCASE("NRSSH rows") {
    const auto half = dqpt_report(build_nrssh({0.5, 0.4, 0.5}));
    CHECK(half.consistent);
    CHECK(half.row.w == 0.5);
    CHECK(half.row.geometric_picture == "One EP is encircled by h(k)");
    CHECK(half.row.critical_structure == "DQPTs at t_n^0 for all n, k_c = 0");

    const auto edge = dqpt_report(build_nrssh({-0.5, 0.4, 0.5}));
    CHECK(edge.consistent);
    CHECK(edge.row.w == 0.5);
    CHECK(edge.row.momenta == std::vector<double>{pi});

    const auto anomalous = dqpt_report(build_nrssh({0.5, 0.2, 0.1}));
    CHECK(anomalous.consistent);
    CHECK(anomalous.row.w == 0.0);
    CHECK(anomalous.critical.momenta.size() == 2);
    CHECK(anomalous.row.condition == "|J1 +- J2| > gamma");

    CHECK(dqpt_report(build_nrssh({0.5, 0.8, 0.2})).row.w == 1.0);
    CHECK(dqpt_report(build_nrssh({0.5, 0.2, 0.8})).row.periods == 0);
    CHECK_THROWS_AS(dqpt_report(build_nrssh({0.5, 0.5, 1.0})), GaplessError);
  }
  SUBCASE("generic models are rejected") {
    const ChiralTwoBandModel gen(PauliAxis::x, PauliAxis::y, {{1.0}, {}}, {}, {}, {});
    CHECK_THROWS_AS(dqpt_report(gen), UnsupportedModelError);
  }
}
