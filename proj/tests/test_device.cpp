#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spinqec/device.hpp"

using namespace spinqec;
using Terms = std::vector<std::pair<PauliString, double>>;

TEST(Exchange, FullExpression) {
  DeviceParams p;
  p.t_l1 = p.t_l2 = p.t_r1 = p.t_r2 = 1e9;
  p.delta_l = p.delta_m = p.delta_r = 1e10;
  EXPECT_NEAR(mediated_exchange_full(p), -4e6, 1e-6);
  // Conjugating every phase leaves J unchanged.
  const std::complex<double> ph = std::polar(1.0, 0.37);
  p.t_l1 *= ph;
  p.t_r2 *= std::conj(ph) * ph * ph;
  const double j = mediated_exchange_full(p);
  DeviceParams q = p;
  q.t_l1 = std::conj(p.t_l1);
  q.t_l2 = std::conj(p.t_l2);
  q.t_r1 = std::conj(p.t_r1);
  q.t_r2 = std::conj(p.t_r2);
  EXPECT_NEAR(mediated_exchange_full(q), j, 1e-9);
  p.t_l2 = 0;
  EXPECT_EQ(mediated_exchange_full(p), 0.0);
  p.delta_m = 0;
  EXPECT_THROW(mediated_exchange_full(p), std::domain_error);
}

TEST(Exchange, EstimateAndResiduals) {
  const double j_on = mediated_exchange_estimate(1e9, 1e10, 1e10);
  const double j_off = mediated_exchange_estimate(1e9, 1e12, 1e10);
  EXPECT_NEAR(j_on, 1e6, 1e-6);
  EXPECT_NEAR(j_off, 100, 1e-10);
  EXPECT_NEAR(j_off / j_on, 1e-4, 1e-16);
  EXPECT_NEAR(residual_exchange_ratio(1e10, 1e12, ExchangeKind::mediated), 1e-4, 1e-16);
  EXPECT_NEAR(residual_exchange_ratio(1e10, 1e12, ExchangeKind::direct), 1e-2, 1e-16);
  EXPECT_EQ(residual_exchange_ratio(3e9, 3e9, ExchangeKind::mediated), 1.0);
  EXPECT_EQ(residual_exchange_ratio(3e9, 3e9, ExchangeKind::direct), 1.0);
  EXPECT_THROW(mediated_exchange_estimate(1e9, 0, 1e10), std::invalid_argument);
  EXPECT_THROW(residual_exchange_ratio(1e10, 0, ExchangeKind::direct), std::invalid_argument);
}

TEST(Exchange, Regime) {
  EXPECT_EQ(classify_regime(1e5, 1e7), GateRegime::sqrtswap);
  EXPECT_EQ(classify_regime(1e9, 1e6), GateRegime::s_gate);
  EXPECT_EQ(classify_regime(1e6, 1e6), GateRegime::intermediate);
}

TEST(Fluctuation, ClosedFormExamples) {
  const auto u = fluctuation_channel(gates::swap(), 0.1);
  ASSERT_EQ(u.terms.size(), 2u);
  EXPECT_NEAR(u.terms[0].second, 0.99, 1e-15);
  EXPECT_NEAR(u.terms[1].second, 0.01, 1e-15);
  EXPECT_TRUE(dense_equal_up_to_phase(u.terms[1].first, gates::swap(), 1e-12));

  const auto zz = fluctuation_channel(Terms{{PauliString::from_string("ZZ"), 1.0}}, 0.05);
  ASSERT_EQ(zz.terms.size(), 2u);
  EXPECT_NEAR(zz.terms[0].second, 0.9975, 1e-15);
  EXPECT_EQ(zz.terms[1].first.letters(), "ZZ");
  EXPECT_NEAR(zz.terms[1].second, 0.0025, 1e-15);

  const auto none = fluctuation_channel(Terms{{PauliString::from_string("ZZ"), 1.0}}, 0.0);
  double id = 0;
  for (const auto& [p, w] : none.terms)
    if (p.is_identity()) id += w;
  EXPECT_EQ(id, 1.0);

  EXPECT_THROW(fluctuation_channel(Terms{{PauliString::from_string("ZZ"), 0.9}}, 0.1), std::invalid_argument);
  EXPECT_THROW(fluctuation_channel(Terms{{PauliString::from_string("ZZ"), 1.0}}, 0.6), std::invalid_argument);
  EXPECT_THROW(fluctuation_channel(gates::swap(), -0.1), std::invalid_argument);
}

// The twirled channel agrees with the exact +-eps mixture up to O(eps^4).
TEST(Fluctuation, MatchesMixtureOracle) {
  const double s3 = 1 / std::sqrt(3.0);
  struct Case {
    const char* name;
    std::vector<std::pair<PauliString, double>> terms;
  };
  const std::vector<Case> cases = {
      {"ZZ", {{PauliString::from_string("ZZ"), 1.0}}},
      {"SWAP",
       {{PauliString::from_string("II"), 0.5},
        {PauliString::from_string("XX"), 0.5},
        {PauliString::from_string("YY"), 0.5},
        {PauliString::from_string("ZZ"), 0.5}}},
      {"Heisenberg",
       {{PauliString::from_string("XX"), s3}, {PauliString::from_string("YY"), s3}, {PauliString::from_string("ZZ"), s3}}},
      {"XI+ZZ", {{PauliString::from_string("XI"), 0.6}, {PauliString::from_string("ZZ"), 0.8}}},
  };
  for (const auto& c : cases) {
    oracle::Mat h = oracle::Mat::Zero(4, 4);
    for (const auto& [p, a] : c.terms) h += a * oracle::pauli_dense(p);
    for (double eps : {0.01, 0.05, 0.1}) {
      const auto ref = oracle::mixture_twirl(h, 2, eps);
      const auto ch = fluctuation_channel(c.terms, eps);
      EXPECT_NEAR(ch.total(), 1.0, 1e-12);
      std::map<std::pair<std::uint64_t, std::uint64_t>, double> got;
      for (const auto& [p, w] : ch.terms) got[{p.x_bits(), p.z_bits()}] += w;
      for (std::uint64_t x = 0; x < 4; ++x)
        for (std::uint64_t z = 0; z < 4; ++z) {
          const double a = got.count({x, z}) ? got[{x, z}] : 0.0;
          const double b = ref.count({x, z}) ? ref.at({x, z}) : 0.0;
          EXPECT_LE(std::abs(a - b), std::pow(eps, 4)) << c.name << " eps=" << eps << " x=" << x << " z=" << z;
        }
    }
  }
}

TEST(Fluctuation, TwirlOfUnitaryChannel) {
  const auto tw = pauli_twirl(fluctuation_channel(gates::swap(), 0.1));
  EXPECT_NEAR(tw.total(), 1.0, 1e-12);
  for (const auto& [p, w] : tw.terms) EXPECT_NEAR(w, p.is_identity() ? 1 - 0.75 * 0.01 : 0.0025, 1e-12) << p.str();
}

TEST(GateErrors, Pair) {
  const auto a = gate_error_pair(0.005);
  EXPECT_DOUBLE_EQ(a.p_s, 0.005);
  EXPECT_DOUBLE_EQ(a.p_sw, 0.0025);
  const auto b = gate_error_pair(0.0086);
  EXPECT_DOUBLE_EQ(b.p_s, 0.0086);
  EXPECT_DOUBLE_EQ(b.p_sw, 0.0043);
  EXPECT_EQ(gate_error_pair(0).p_sw, 0.0);
  EXPECT_THROW(gate_error_pair(1.5), std::invalid_argument);
}

TEST(Leakage, PerturbativeMatchesExactEvolution) {
  const double u = 2 * std::numbers::pi * 1e10;
  for (int i = 1; i <= 20; ++i) {
    const double r = 0.01 * i;  // r = 2t / U
    const double t = r * u / 2;
    for (int k = 0; k <= 64; ++k) {
      const double el = (2 * std::numbers::pi / u) * k / 64.0;
      EXPECT_LE(std::abs(leakage_oscillation(t, u, el) - oracle::exact_leakage(t, u, el)), 5 * r * r * r)
          << "r=" << r << " k=" << k;
    }
  }
  EXPECT_EQ(leakage_oscillation(1e8, 1e10, 0), 0.0);
  EXPECT_NEAR(leakage_oscillation(0.1 * 1e10, 1e10, std::numbers::pi / 1e10), 0.16, 1e-12);
  EXPECT_THROW(leakage_oscillation(0.2 * 1e10, 1e10, 1e-9), std::domain_error);
}

TEST(Budget, CycleTimesAndDephasing) {
  TimingParams fast;
  fast.t_j = 1e-6;
  EXPECT_NEAR(cycle_time(GateFlavour::s_gate, fast), 8e-6, 1e-18);
  TimingParams slow;
  slow.t_j = 1e-6;
  slow.t_z = 0.25e-6;
  slow.t_h = 1e-6;
  EXPECT_NEAR(cycle_time(GateFlavour::sqrtswap, slow), 12e-6, 1e-18);
  EXPECT_NEAR(dephasing_per_cycle(12e-6, 28e-3), 2.142857e-4, 1e-9);
  EXPECT_NEAR(dephasing_per_cycle(8e-6, 3e-3), 1.333e-3, 1e-6);
  EXPECT_EQ(dephasing_per_cycle(0, 1e-3), 0.0);
  EXPECT_THROW(dephasing_per_cycle(1e-6, 0), std::invalid_argument);
  slow.t_z = -1;
  EXPECT_THROW(cycle_time(GateFlavour::sqrtswap, slow), std::invalid_argument);
}
