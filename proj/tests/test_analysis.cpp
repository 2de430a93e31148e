#include <cmath>
#include <limits>

#include "doctest.h"

#include "dcg/analysis.hpp"
#include "dcg/coherent.hpp"
#include "test_helpers.hpp"

using dcg::cplx;

TEST_CASE("coherent states minimize the total uncertainty at j") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double j : {0.5, 2.0, 16.0, 64.0}) {
    CAPTURE(j);
    const dcg::SpinRep rep = dcg::build_spin_rep(j);
    for (int trial = 0; trial < 5; ++trial) {
      const dcg::CoherentParam p = dcg::make_coherent_param(
          cplx(dist(gen), dist(gen)), cplx(dist(gen), dist(gen)));
      const dcg::PureState psi = dcg::coherent_amplitudes(rep, p);
      CHECK(std::abs(dcg::total_uncertainty(psi, rep) - j) <= 1e-8);
      CHECK(std::abs(dcg::generalized_purity(psi, rep, true) - 1.0) <= 1e-10);
      CHECK(dcg::purity_loss_rate(psi, rep, 0.25) ==
            doctest::Approx(-4.0 * 0.25 * j).epsilon(1e-10));
    }
  }
}

TEST_CASE("the m = 0 basis state maximizes the total uncertainty") {
  const dcg::SpinRep rep = dcg::build_spin_rep(8.0);
  dcg::PureState psi;
  psi.amp.assign(rep.dim, cplx(0.0, 0.0));
  psi.amp[8] = cplx(1.0, 0.0);  // m = 0
  CHECK(dcg::total_uncertainty(psi, rep) ==
        doctest::Approx(rep.casimir_value).epsilon(1e-12));
  CHECK(dcg::generalized_purity(psi, rep, true) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("uncertainty plus raw purity is the Casimir value") {
  for (double j : {0.5, 1.0, 3.5, 8.0}) {
    CAPTURE(j);
    const dcg::SpinRep rep = dcg::build_spin_rep(j);
    for (unsigned s = 0; s < 25; ++s) {
      const dcg::PureState psi = testutil::random_state(rep.dim, 1000 + s);
      const double delta = dcg::total_uncertainty(psi, rep);
      const double p_raw = dcg::generalized_purity(psi, rep, false);
      CHECK(std::abs(delta + p_raw - rep.casimir_value) <= 1e-10);
      CHECK(dcg::generalized_purity(psi, rep, true) ==
            doctest::Approx(p_raw / (j * j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("diagnostics reject unnormalized states") {
  const dcg::SpinRep rep = dcg::build_spin_rep(1.0);
  dcg::PureState bad;
  bad.amp.assign(rep.dim, cplx(1.0, 0.0));
  CHECK_THROWS_AS(dcg::total_uncertainty(bad, rep), std::invalid_argument);
  CHECK_THROWS_AS(dcg::generalized_purity(bad, rep, true), std::invalid_argument);
}

TEST_CASE("two-mode condensate classicality ratio") {
  const dcg::BecClassicality bec = dcg::classicality_ratio_bec(128, 2);
  CHECK(bec.casimir == doctest::Approx(4160.0).epsilon(1e-14));
  CHECK(bec.delta_min == doctest::Approx(64.0).epsilon(1e-14));
  CHECK(bec.adjoint_casimir == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(bec.ratio == doctest::Approx(2.0 / 130.0).epsilon(1e-14));

  // n = 2 and N = 2j reduce to the spin result 1/(j+1).
  CHECK(bec.ratio == doctest::Approx(1.0 / 65.0).epsilon(1e-14));

  // Ratio falls with atom number: macroscopic condensates are classical.
  CHECK(dcg::classicality_ratio_bec(1000000, 2).ratio < 1e-5);

  CHECK_THROWS_AS(dcg::classicality_ratio_bec(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(dcg::classicality_ratio_bec(10, 1), std::invalid_argument);
}

TEST_CASE("single-system classicality ratio stays order one") {
  CHECK(dcg::classicality_ratio_local(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(dcg::classicality_ratio_local(5) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(dcg::classicality_ratio_local(1), std::invalid_argument);
}

TEST_CASE("timescale report for the figure-1 parameters") {
  const double j = 64.0;
  const double gamma = 0.05 / 64.0;
  const dcg::TimescaleReport r = dcg::timescale_report(j, {15.0}, gamma);

  CHECK(r.decoherence_time == doctest::Approx(1.0 / (gamma * 64.0 * 65.0)).epsilon(1e-12));
  CHECK(r.decoherence_time == doctest::Approx(0.3076923).epsilon(1e-6));
  REQUIRE(r.oscillation_times.size() == 1);
  CHECK(r.oscillation_times[0] == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  CHECK(r.relaxation_time == doctest::Approx(640.0).epsilon(1e-12));

  // Decoherence is ~4.6x too slow for the chain at these parameters.
  CHECK(r.link1_factor == doctest::Approx((1.0 / 15.0) / 0.30769230769).epsilon(1e-6));
  CHECK(r.link1_factor < 1.0);
  CHECK(r.link2_factor == doctest::Approx(9600.0).epsilon(1e-12));
  CHECK_FALSE(r.chain_satisfied);
}

TEST_CASE("timescale chain holds for slow driving") {
  // omega = 0.1: decoherence 0.31 << oscillation 10 << relaxation 640.
  const dcg::TimescaleReport r =
      dcg::timescale_report(64.0, {0.1}, 0.05 / 64.0);
  CHECK(r.link1_factor >= 10.0);
  CHECK(r.link2_factor >= 10.0);
  CHECK(r.chain_satisfied);

  // Tighter separation demand flips the verdict.
  const dcg::TimescaleReport strict =
      dcg::timescale_report(64.0, {0.1}, 0.05 / 64.0, 40.0);
  CHECK_FALSE(strict.chain_satisfied);
}

TEST_CASE("spin one-half can never satisfy the chain") {
  // c_H = 3/4 < c_adj = 2, so decoherence cannot be faster than relaxation.
  const dcg::TimescaleReport r = dcg::timescale_report(0.5, {1.0}, 0.1);
  CHECK(r.decoherence_time > r.relaxation_time);
  CHECK_FALSE(r.chain_satisfied);
}

TEST_CASE("closed system reports infinite bath times") {
  const dcg::TimescaleReport r = dcg::timescale_report(8.0, {2.0}, 0.0);
  CHECK(std::isinf(r.decoherence_time));
  CHECK(std::isinf(r.relaxation_time));
  CHECK_FALSE(r.chain_satisfied);
}

TEST_CASE("timescale report input validation") {
  CHECK_THROWS_AS(dcg::timescale_report(8.0, {}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dcg::timescale_report(8.0, {-1.0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dcg::timescale_report(8.0, {1.0}, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("realization bound for a coherent state") {
  const dcg::SpinRep rep = dcg::build_spin_rep(8.0);
  const dcg::PureState psi =
      dcg::coherent_amplitudes(rep, dcg::coherent_from_tau(cplx(0.0, 0.0)));
  const dcg::RealizationBound b = dcg::realization_bound(0.1, rep, psi);

  // At the south pole D = (j/2, j/2, 0), so n = (400, 400, 0) at eps = 0.1.
  CHECK(b.per_observable_n[0] == doctest::Approx(400.0).epsilon(1e-10));
  CHECK(b.per_observable_n[1] == doctest::Approx(400.0).epsilon(1e-10));
  CHECK(std::abs(b.per_observable_n[2]) <= 1e-8);
  CHECK(b.sum_identity_check <= 1e-10);
  CHECK(b.n_st_bound == doctest::Approx(1200.0).epsilon(1e-10));
}

TEST_CASE("realization bound for the maximally spread state") {
  const dcg::SpinRep rep = dcg::build_spin_rep(8.0);
  dcg::PureState psi;
  psi.amp.assign(rep.dim, cplx(0.0, 0.0));
  psi.amp[8] = cplx(1.0, 0.0);
  const dcg::RealizationBound b = dcg::realization_bound(0.1, rep, psi);

  // D = (36, 36, 0): <Jz^2> = 0 exactly at m = 0.
  CHECK(b.per_observable_n[0] == doctest::Approx(3600.0).epsilon(1e-10));
  CHECK(b.per_observable_n[1] == doctest::Approx(3600.0).epsilon(1e-10));
  CHECK(std::abs(b.per_observable_n[2]) <= 1e-8);
  CHECK(b.n_st_bound == doctest::Approx(10800.0).epsilon(1e-10));

  CHECK_THROWS_AS(dcg::realization_bound(0.0, rep, psi), std::invalid_argument);
}

TEST_CASE("realization bound identity holds on random states") {
  const dcg::SpinRep rep = dcg::build_spin_rep(3.0);
  for (unsigned s = 0; s < 20; ++s) {
    const dcg::PureState psi = testutil::random_state(rep.dim, 2000 + s);
    const dcg::RealizationBound b = dcg::realization_bound(0.05, rep, psi);
    CHECK(b.sum_identity_check <= 1e-10);
    const double n_max = std::max({b.per_observable_n[0], b.per_observable_n[1],
                                   b.per_observable_n[2]});
    CHECK(b.n_st_bound == doctest::Approx(3.0 * n_max).epsilon(1e-12));
  }
}

TEST_CASE("GCS parameter counting stays below the generic bound") {
  const dcg::GcsParameterCount c = dcg::gcs_parameter_count(1e6);
  CHECK(c.m == doctest::Approx(4e6).epsilon(1e-12));
  CHECK(c.bound == doctest::Approx(5e6).epsilon(1e-12));
  CHECK(c.m < c.bound);
  CHECK_THROWS_AS(dcg::gcs_parameter_count(-1.0), std::invalid_argument);
}
