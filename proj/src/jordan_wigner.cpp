#include "iqcc/jordan_wigner.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "iqcc/errors.hpp"

namespace iqcc {

namespace {

using Complex = std::complex<double>;

constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

struct ComplexTerm {
  PauliWord word;
  Complex coeff;
};

/// a+_j = Z_{<j} (X_j - i Y_j) / 2,  a_j = Z_{<j} (X_j + i Y_j) / 2.
std::array<ComplexTerm, 2> ladder_terms(int n_qubits, const Ladder& op) {
  const PauliWord::Mask bit = PauliWord::Mask{1} << op.qubit;
  const PauliWord::Mask string = bit - 1;
  const auto x = PauliWord::from_masks_unchecked(n_qubits, bit, string);
  const auto y = PauliWord::from_masks_unchecked(n_qubits, bit, string | bit);
  return {ComplexTerm{x, 0.5}, ComplexTerm{y, op.dagger ? Complex(0, -0.5) : Complex(0, 0.5)}};
}

}  // namespace

void FermionAccumulator::add_product(double coeff, std::span<const Ladder> ops) {
  if (coeff == 0.0) return;
  for (const auto& op : ops) {
    if (op.qubit < 0 || op.qubit >= n_) throw DimensionError("ladder operator outside the register");
  }
  std::vector<ComplexTerm> current{{PauliWord::identity(n_), Complex(coeff, 0)}};
  for (const auto& op : ops) {
    const auto factors = ladder_terms(n_, op);
    std::vector<ComplexTerm> next;
    next.reserve(current.size() * 2);
    for (const auto& a : current) {
      for (const auto& b : factors) {
        const auto p = multiply_unchecked(a.word, b.word);
        next.push_back({p.word, a.coeff * b.coeff * kIPowers[p.phase.exponent()]});
      }
    }
    current = std::move(next);
  }
  for (const auto& t : current) acc_[t.word] += t.coeff;
}

void FermionAccumulator::add_constant(double value) { acc_[PauliWord::identity(n_)] += value; }

PauliSum FermionAccumulator::to_real_sum(double drop_below, double imag_tolerance) const {
  PauliSumBuilder builder(n_, acc_.size());
  for (const auto& [word, c] : acc_) {
    if (std::abs(c.imag()) > imag_tolerance) {
      throw NumericError("fermionic operator maps to a non-real coefficient on " + word.to_string());
    }
    if (std::abs(c.real()) > drop_below) builder.add(word, c.real());
  }
  return std::move(builder).build();
}

PauliSum jordan_wigner(const MolecularIntegrals& mi) {
  if (mi.n_spatial > kMaxQubits / 2) throw CapacityError("at most 32 spatial orbitals fit the qubit register");
  const int n_spatial = mi.n_spatial;
  const int n_qubits = 2 * n_spatial;
  FermionAccumulator acc(n_qubits);
  acc.add_constant(mi.core_energy);
  for (int p = 0; p < n_spatial; ++p) {
    for (int q = 0; q < n_spatial; ++q) {
      const double h = mi.h1(p, q);
      if (h == 0.0) continue;
      for (int sigma = 0; sigma < 2; ++sigma) {
        const std::array<Ladder, 2> ops{Ladder{2 * p + sigma, true}, Ladder{2 * q + sigma, false}};
        acc.add_product(h, ops);
      }
    }
  }
  for (int p = 0; p < n_spatial; ++p) {
    for (int q = 0; q < n_spatial; ++q) {
      for (int r = 0; r < n_spatial; ++r) {
        for (int s = 0; s < n_spatial; ++s) {
          const double g = mi.g2(p, q, r, s);
          if (g == 0.0) continue;
          for (int sigma = 0; sigma < 2; ++sigma) {
            for (int tau = 0; tau < 2; ++tau) {
              const int ps = 2 * p + sigma;
              const int qs = 2 * q + sigma;
              const int rt = 2 * r + tau;
              const int st = 2 * s + tau;
              if (ps == rt || qs == st) continue;  // a+_i a+_i = a_i a_i = 0
              const std::array<Ladder, 4> ops{Ladder{ps, true}, Ladder{rt, true}, Ladder{st, false},
                                              Ladder{qs, false}};
              acc.add_product(0.5 * g, ops);
            }
          }
        }
      }
    }
  }
  return acc.to_real_sum();
}

ReferenceState reference_state(int n_electrons, int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw DimensionError("qubit count outside [0, 64]");
  if (n_electrons < 0 || n_electrons > n_qubits) {
    throw InvalidArgumentError("electron count " + std::to_string(n_electrons) + " outside [0, " +
                               std::to_string(n_qubits) + "]");
  }
  const auto occ = n_electrons == 64 ? ~PauliWord::Mask{0} : (PauliWord::Mask{1} << n_electrons) - 1;
  return ReferenceState(n_qubits, occ);
}

ReferenceState reference_state_for_spin(int n_electrons, int ms2, int n_qubits) {
  if (n_qubits % 2 != 0) throw InvalidArgumentError("spin-resolved reference needs an even qubit count");
  if ((n_electrons + ms2) % 2 != 0 || std::abs(ms2) > n_electrons) {
    throw InvalidArgumentError("2 S_z = " + std::to_string(ms2) + " incompatible with " +
                               std::to_string(n_electrons) + " electrons");
  }
  const int n_alpha = (n_electrons + ms2) / 2;
  const int n_beta = (n_electrons - ms2) / 2;
  if (n_alpha > n_qubits / 2 || n_beta > n_qubits / 2) {
    throw InvalidArgumentError("too many electrons of one spin for " + std::to_string(n_qubits / 2) + " orbitals");
  }
  PauliWord::Mask occ = 0;
  for (int p = 0; p < n_alpha; ++p) occ |= PauliWord::Mask{1} << (2 * p);
  for (int p = 0; p < n_beta; ++p) occ |= PauliWord::Mask{1} << (2 * p + 1);
  return ReferenceState(n_qubits, occ);
}

SpinOperators spin_operators(int n_qubits) {
  if (n_qubits % 2 != 0 || n_qubits < 0) throw InvalidArgumentError("spin operators need an even qubit count");
  const int n_spatial = n_qubits / 2;

  FermionAccumulator sz(n_qubits);
  for (int p = 0; p < n_spatial; ++p) {
    const std::array<Ladder, 2> na{Ladder{2 * p, true}, Ladder{2 * p, false}};
    const std::array<Ladder, 2> nb{Ladder{2 * p + 1, true}, Ladder{2 * p + 1, false}};
    sz.add_product(0.5, na);
    sz.add_product(-0.5, nb);
  }

  FermionAccumulator s2(n_qubits);
  for (int p = 0; p < n_spatial; ++p) {
    // S_z
    const std::array<Ladder, 2> na{Ladder{2 * p, true}, Ladder{2 * p, false}};
    const std::array<Ladder, 2> nb{Ladder{2 * p + 1, true}, Ladder{2 * p + 1, false}};
    s2.add_product(0.5, na);
    s2.add_product(-0.5, nb);
    for (int q = 0; q < n_spatial; ++q) {
      // S_- S_+ = sum_pq a+_{p beta} a_{p alpha} a+_{q alpha} a_{q beta}
      const std::array<Ladder, 4> flip{Ladder{2 * p + 1, true}, Ladder{2 * p, false}, Ladder{2 * q, true},
                                       Ladder{2 * q + 1, false}};
      s2.add_product(1.0, flip);
      // S_z^2 = 1/4 sum_pq (n_pa - n_pb)(n_qa - n_qb)
      for (int sp = 0; sp < 2; ++sp) {
        for (int sq = 0; sq < 2; ++sq) {
          const double sign = (sp == sq) ? 0.25 : -0.25;
          const std::array<Ladder, 4> nn{Ladder{2 * p + sp, true}, Ladder{2 * p + sp, false},
                                         Ladder{2 * q + sq, true}, Ladder{2 * q + sq, false}};
          s2.add_product(sign, nn);
        }
      }
    }
  }
  return {s2.to_real_sum(), sz.to_real_sum()};
}

PauliSum penalize(const PauliSum& h, const SpinPenalty& penalty) {
  if (!(penalty.mu >= 0.0)) throw InvalidArgumentError("penalty strength mu must be non-negative");
  if (penalty.mu == 0.0) return h;
  const auto spin = spin_operators(h.n_qubits());
  PauliSumBuilder builder(h.n_qubits(), h.size() + spin.s_squared.size());
  builder.add(h);
  builder.add(spin.s_squared, penalty.mu);
  builder.add(spin.s_z, -penalty.mu * penalty.s * (penalty.s + 1.0));
  return std::move(builder).build();
}

}  // namespace iqcc
