#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "iqcc/errors.hpp"
#include "iqcc/integrals.hpp"
#include "iqcc/jordan_wigner.hpp"
#include "iqcc/qcc.hpp"
#include "test_support.hpp"

namespace iqcc {
namespace {

using testing::basis_vector;
using testing::dense_qcc_energy;
using testing::kron_sum;
using testing::kron_word;

constexpr double kPi = std::numbers::pi;

PauliWord w(const char* text, int n) { return PauliWord::parse(text, n); }

PauliSum h2_hamiltonian() { return jordan_wigner(read_fcidump(testing::fixture("h2.fcidump"))); }

/// Im <0|H T|0> from dense matrices.
double dense_omega_signed(const PauliSum& h, const PauliWord& t, const ReferenceState& ref) {
  const auto v = basis_vector(ref);
  return (v.adjoint() * kron_sum(h) * kron_word(t) * v)(0, 0).imag();
}

double dense_d(const PauliSum& h, const PauliWord& t, const ReferenceState& ref) {
  const auto v = basis_vector(ref);
  const auto hm = kron_sum(h);
  const auto tm = kron_word(t);
  return (v.adjoint() * (tm * hm * tm - hm) * v)(0, 0).real();
}

double sinusoid(double omega_signed, double d, double t) { return omega_signed * std::sin(t) + 0.5 * d * (1 - std::cos(t)); }

TEST(Generator, CanonicalForm) {
  EXPECT_EQ(derive_canonical_generator(w("X0", 8)), w("Y0", 8));
  EXPECT_EQ(derive_canonical_generator(w("X2 X5 X7", 8)), w("Y2 X5 X7", 8));
  EXPECT_EQ(derive_canonical_generator(w("X3", 8)), w("Y3", 8));
  EXPECT_THROW(derive_canonical_generator(w("X0 Z1", 8)), InvalidGeneratorError);
  EXPECT_THROW(derive_canonical_generator(PauliWord::identity(8)), InvalidGeneratorError);
}

TEST(Omega, Examples) {
  const ReferenceState ref(2, 0b01);
  const auto zero = ising_decompose(PauliSum(2, {{w("X0", 2), 0.0}, {w("Z1", 2), 1.0}}));
  EXPECT_TRUE(zero.blocks.empty());

  const auto single = ising_decompose(PauliSum(2, {{w("X0", 2), 0.4}}));
  const auto om = compute_omega(single, 0, ref);
  EXPECT_DOUBLE_EQ(om.omega, 0.4);
  EXPECT_DOUBLE_EQ(std::abs(om.omega_signed), 0.4);
  EXPECT_NEAR(om.omega_signed, dense_omega_signed(single.recompose(), w("Y0", 2), ref), 1e-15);

  // A block whose iz factor vanishes on the reference.
  const auto cancelling = ising_decompose(PauliSum(2, {{w("X0", 2), 0.3}, {w("X0 Z1", 2), 0.3}}));
  const auto om2 = compute_omega(cancelling, 0, ReferenceState(2, 0b10));
  EXPECT_EQ(om2.omega, 0.0);
  EXPECT_EQ(om2.omega_signed, 0.0);
  EXPECT_THROW(compute_omega(cancelling, 3, ref), InvalidArgumentError);
}

TEST(Omega, H2DoubleExcitationMatchesDense) {
  const auto h = h2_hamiltonian();
  const auto ref = reference_state(2, 4);
  const auto d = ising_decompose(h);
  bool found = false;
  for (std::size_t k = 0; k < d.blocks.size(); ++k) {
    const auto gen = derive_canonical_generator(d.blocks[k].x_string);
    const auto om = compute_omega(d, k, ref);
    const double dense = dense_omega_signed(h, gen, ref);
    EXPECT_NEAR(om.omega_signed, dense, 1e-12);
    EXPECT_NEAR(om.omega, std::abs(dense), 1e-12);
    if (d.blocks[k].x_string == w("X0 X1 X2 X3", 4)) {
      found = true;
      EXPECT_GT(om.omega, 0.01);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Omega, RandomInstancesMatchDense) {
  testing::Random rng(40);
  for (int k = 0; k < 40; ++k) {
    const int n = rng.integer(1, 7);
    const auto h = rng.molecular_like_sum(n, 30);
    const auto ref = rng.reference(n);
    const auto d = ising_decompose(h);
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
      const auto gen = derive_canonical_generator(d.blocks[b].x_string);
      EXPECT_NEAR(compute_omega(d, b, ref).omega_signed, dense_omega_signed(h, gen, ref), 1e-12);
    }
  }
}

TEST(DValue, Examples) {
  const ReferenceState ref(1, 0b1);
  EXPECT_DOUBLE_EQ(compute_d(PauliSum(1, {{w("Z0", 1), 0.7}}), w("Y0", 1), ref), 1.4);
  EXPECT_EQ(compute_d(PauliSum(2, {{w("Z1", 2), 0.7}}), w("Y0", 2), ReferenceState(2, 0b11)), 0.0);
}

TEST(DValue, RandomInstancesMatchDense) {
  testing::Random rng(41);
  for (int k = 0; k < 40; ++k) {
    const int n = rng.integer(1, 6);
    const auto h = rng.hermitian_sum(n, 30);
    const auto ref = rng.reference(n);
    const auto gen = rng.word_with_parity(n, true);
    EXPECT_NEAR(compute_d(h, gen, ref), dense_d(h, gen, ref), 1e-12);
  }
}

TEST(Amplitude, Examples) {
  for (double d : {-1.0, 0.0, 2.5}) {
    const auto e = estimate_amplitude(0.0, d);
    EXPECT_EQ(e.t, 0.0);
    EXPECT_EQ(e.delta_e, 0.0);
  }
  const auto e = estimate_amplitude(0.3, 0.0);
  EXPECT_NEAR(std::abs(e.t), kPi / 2, 1e-15);
  EXPECT_NEAR(e.delta_e, -0.3, 1e-15);
}

TEST(Amplitude, GlobalMinimumOnScan) {
  testing::Random rng(42);
  for (int k = 0; k < 300; ++k) {
    const double om = rng.uniform(-2, 2);
    const double d = rng.uniform(-1, 4);
    const auto e = estimate_amplitude(om, d);
    const double at_t = sinusoid(om, d, e.t);
    EXPECT_NEAR(e.delta_e, at_t, 1e-12);
    EXPECT_LE(e.delta_e, 0.0);
    for (int s = 0; s < 1000; ++s) {
      const double t = -kPi + 2 * kPi * (s + 1) / 1000.0;
      ASSERT_LE(at_t, sinusoid(om, d, t) + 1e-14);
    }
  }
}

TEST(Amplitude, SmallOmegaLargeD) {
  const auto e = estimate_amplitude(1e-9, 10.0);
  EXPECT_LT(e.delta_e, 0.0);
  EXPECT_NEAR(e.delta_e, -1e-18 / 10.0, 1e-30);
  EXPECT_NEAR(e.t, -2e-10, 1e-22);
}

TEST(Ranking, Examples) {
  const auto ref = reference_state(2, 4);
  const auto diag = rank_generators(PauliSum(4, {{w("Z0 Z1", 4), 1.0}, {w("Z3", 4), 0.5}}), ref, 8);
  EXPECT_TRUE(diag.selected.empty());
  EXPECT_TRUE(diag.remainder.empty());
  const auto one = rank_generators(PauliSum(4, {{w("X0 X2", 4), 0.2}, {w("Z0", 4), 1.0}}), ref, 8);
  ASSERT_EQ(one.selected.size(), 1u);
  EXPECT_TRUE(one.remainder.empty());
  EXPECT_EQ(one.selected[0].generator, w("Y0 X2", 4));
  EXPECT_THROW(rank_generators(PauliSum(4), ref, 0), InvalidArgumentError);
  EXPECT_THROW(rank_generators(PauliSum(4), ref, 17), InvalidArgumentError);
}

TEST(Ranking, H2TopGeneratorIsDoubleExcitation) {
  const auto h = h2_hamiltonian();
  const auto ref = reference_state(2, 4);
  const auto ranking = rank_generators(h, ref, 1);
  ASSERT_EQ(ranking.selected.size(), 1u);
  EXPECT_EQ(ranking.selected[0].source_x_string, w("X0 X1 X2 X3", 4));
  EXPECT_EQ(ranking.selected[0].generator, w("Y0 X1 X2 X3", 4));

  // Each generator's delta_e is its exact single-generator lowering on a dense t-scan.
  const auto hm = kron_sum(h);
  const double e0 = reference_energy(h, ref);
  std::vector<RankedGenerator> all = ranking.selected;
  all.insert(all.end(), ranking.remainder.begin(), ranking.remainder.end());
  for (const auto& g : all) {
    double best = e0;
    for (int s = 0; s < 4000; ++s) best = std::min(best, dense_qcc_energy(hm, {g.generator}, {-kPi + 2 * kPi * s / 4000.0}, ref));
    EXPECT_NEAR(g.delta_e, best - e0, 1e-6);
    EXPECT_LE(g.importance, ranking.selected[0].importance);
  }
}

TEST(Ranking, Invariants) {
  testing::Random rng(43);
  for (int k = 0; k < 20; ++k) {
    const int n = rng.integer(2, 8);
    const auto h = rng.molecular_like_sum(n, 40);
    const auto ref = rng.reference(n);
    const auto ranking = rank_generators(h, ref, 4);
    std::vector<RankedGenerator> all = ranking.selected;
    all.insert(all.end(), ranking.remainder.begin(), ranking.remainder.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& g = all[i];
      EXPECT_LE(g.delta_e, 0.0);
      EXPECT_EQ(g.delta_e == 0.0, g.omega == 0.0);
      EXPECT_EQ(g.omega, std::abs(g.omega_signed));
      EXPECT_EQ(g.importance, std::abs(g.t_estimate));
      EXPECT_EQ(g.generator, derive_canonical_generator(g.source_x_string));
      if (i > 0) {
        EXPECT_GE(all[i - 1].importance, g.importance);
      }
    }
    if (!ranking.selected.empty()) {
      const auto& top = ranking.selected[0];
      const Ansatz a{{{top.generator, top.t_estimate}}};
      EXPECT_NEAR(qcc_energy(h, a, ref), reference_energy(h, ref) + top.delta_e, 1e-12);
    }
  }
}

TEST(Ranking, DeterministicAcrossThreadCounts) {
  testing::Random rng(44);
  const auto h = rng.molecular_like_sum(12, 20000);
  const auto ref = rng.reference(12);
  setenv("IQCC_THREADS", "1", 1);
  const auto a = rank_generators(h, ref, 8);
  setenv("IQCC_THREADS", "4", 1);
  const auto b = rank_generators(h, ref, 8);
  unsetenv("IQCC_THREADS");
  ASSERT_EQ(a.selected.size(), b.selected.size());
  ASSERT_EQ(a.remainder.size(), b.remainder.size());
  for (std::size_t i = 0; i < a.selected.size(); ++i) {
    EXPECT_EQ(a.selected[i].generator, b.selected[i].generator);
    EXPECT_EQ(a.selected[i].t_estimate, b.selected[i].t_estimate);
  }
  for (std::size_t i = 0; i < a.remainder.size(); ++i) EXPECT_EQ(a.remainder[i].generator, b.remainder[i].generator);
}

TEST(QccEnergy, ZeroAmplitudesGiveReferenceEnergy) {
  const auto h = h2_hamiltonian();
  const auto ref = reference_state(2, 4);
  const Ansatz a{{{w("Y0 X1 X2 X3", 4), 0.0}, {w("Y0 X2", 4), 0.0}}};
  EXPECT_NEAR(qcc_energy(h, a, ref), reference_energy(h, ref), 1e-14);
}

TEST(QccEnergy, SingleGeneratorClosedForm) {
  testing::Random rng(45);
  for (int k = 0; k < 30; ++k) {
    const int n = rng.integer(1, 7);
    const auto h = rng.molecular_like_sum(n, 30);
    const auto ref = rng.reference(n);
    const auto gen = rng.word_with_parity(n, true);
    const double t = rng.uniform(-kPi, kPi);
    const double expected = reference_energy(h, ref) + sinusoid(dense_omega_signed(h, gen, ref), dense_d(h, gen, ref), t);
    EXPECT_NEAR(qcc_energy(h, Ansatz{{{gen, t}}}, ref), expected, 1e-12);
  }
}

TEST(QccEnergy, MatchesDenseStateVector) {
  testing::Random rng(46);
  for (int k = 0; k < 20; ++k) {
    const int n = 6;
    const auto h = rng.molecular_like_sum(n, 60);
    const auto ref = rng.reference(n);
    std::vector<PauliWord> gens;
    std::vector<double> t;
    Ansatz a;
    for (int j = 0; j < 3; ++j) {
      gens.push_back(rng.word_with_parity(n, true));
      t.push_back(rng.uniform(-kPi, kPi));
      a.steps.push_back({gens.back(), t.back()});
    }
    EXPECT_NEAR(qcc_energy(h, a, ref), dense_qcc_energy(kron_sum(h), gens, t, ref), 1e-10);
  }
}

TEST(QccGradient, AtZeroEqualsOmegaSigned) {
  const auto h = h2_hamiltonian();
  const auto ref = reference_state(2, 4);
  const auto ranking = rank_generators(h, ref, 4);
  Ansatz a;
  for (const auto& g : ranking.selected) a.steps.push_back({g.generator, 0.0});
  const auto grad = qcc_gradient(h, a, ref);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(grad[j], ranking.selected[j].omega_signed, 1e-12);
}

TEST(QccGradient, CommutingGeneratorHasZeroComponent) {
  // Y0 Y1 Y2 commutes with Z0Z1, X0X1 and Y0Y1.
  const PauliSum h(3, {{w("Z0 Z1", 3), 0.4}, {w("X0 X1", 3), 0.2}, {w("Y0 Y1", 3), -0.3}});
  const auto ref = ReferenceState(3, 0b011);
  testing::Random rng(47);
  for (int k = 0; k < 10; ++k) {
    const Ansatz a{{{w("Y0 Y1 Y2", 3), rng.uniform(-3, 3)}, {w("Y2", 3), rng.uniform(-3, 3)}}};
    EXPECT_NEAR(qcc_gradient(h, a, ref)[0], 0.0, 1e-15);
  }
}

TEST(QccGradient, FiniteDifferences) {
  testing::Random rng(48);
  int checked = 0;
  for (int k = 0; k < 40; ++k) {
    const int n = rng.integer(2, 8);
    const int l = rng.integer(1, 4);
    const auto h = rng.molecular_like_sum(n, 40);
    const auto ref = rng.reference(n);
    std::vector<PauliWord> gens;
    for (int j = 0; j < l; ++j) gens.push_back(rng.word_with_parity(n, true));
    const QccObjective obj(h, gens, ref);
    std::vector<double> t(l);
    for (auto& v : t) v = rng.uniform(-kPi, kPi);
    std::vector<double> g(l);
    obj.energy_and_gradient(t, g);
    for (int j = 0; j < l; ++j) {
      const double step = 1e-5;
      auto tp = t;
      auto tm = t;
      tp[j] += step;
      tm[j] -= step;
      const double fd = (obj.energy(tp) - obj.energy(tm)) / (2 * step);
      EXPECT_NEAR(g[j], fd, 1e-6 * std::max(1.0, std::abs(fd)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(QccObjective, Validation) {
  const auto h = h2_hamiltonian();
  const auto ref = reference_state(2, 4);
  EXPECT_THROW(QccObjective(h, {w("X0", 4)}, ref), InvalidGeneratorError);
  EXPECT_THROW(QccObjective(h, std::vector<PauliWord>(17, w("Y0", 4)), ref), CapacityError);
  EXPECT_THROW(QccObjective(h, {w("Y0", 5)}, ref), DimensionError);
  const QccObjective obj(h, {w("Y0 X1 X2 X3", 4)}, ref);
  std::vector<double> g(1);
  EXPECT_THROW(obj.energy(std::vector<double>{0.1, 0.2}), DimensionError);
}

}  // namespace
}  // namespace iqcc
