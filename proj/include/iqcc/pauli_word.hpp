#pragma once

// Pauli words over up to 64 qubits in symplectic (x, z) bitmask form.
//
// Convention: a qubit j carries
//   x_j       if only bit j of the x mask is set,
//   z_j       if only bit j of the z mask is set,
//   y_j       if bit j is set in both masks, with y = i * x * z,
//   identity  otherwise.
// A PauliWord value is always the canonical, phase-free operator; products
// carry their power of i separately in a Phase.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace iqcc {

inline constexpr int kMaxQubits = 64;

/// Power of the imaginary unit, i^k with k in {0, 1, 2, 3}.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int exponent) : k_(static_cast<std::uint8_t>(((exponent % 4) + 4) % 4)) {}

  constexpr int exponent() const noexcept { return k_; }
  constexpr bool is_real() const noexcept { return (k_ & 1U) == 0; }
  /// +1 or -1 for real phases (k = 0, 2); +1 or -1 of the imaginary part for k = 1, 3.
  constexpr double sign() const noexcept { return (k_ & 2U) ? -1.0 : 1.0; }

  friend constexpr Phase operator+(Phase a, Phase b) { return Phase(a.k_ + b.k_); }
  friend constexpr bool operator==(Phase, Phase) = default;

 private:
  std::uint8_t k_ = 0;
};

class PauliWord {
 public:
  using Mask = std::uint64_t;

  constexpr PauliWord() = default;
  /// Throws DimensionError when n_qubits is outside [0, 64] or a mask has
  /// bits at or above n_qubits.
  PauliWord(int n_qubits, Mask x_mask, Mask z_mask);

  static PauliWord identity(int n_qubits) { return PauliWord(n_qubits, 0, 0); }
  /// No range checks; masks must already fit in n_qubits.
  static constexpr PauliWord from_masks_unchecked(int n_qubits, Mask x_mask, Mask z_mask) noexcept {
    PauliWord w;
    w.n_ = n_qubits;
    w.x_ = x_mask;
    w.z_ = z_mask;
    return w;
  }
  static PauliWord single(int n_qubits, int qubit, char pauli);

  /// Parses "X0 Z3 Y7" (any index order, each qubit at most once) or "I".
  static PauliWord parse(std::string_view text, int n_qubits);

  constexpr int n_qubits() const noexcept { return n_; }
  constexpr Mask x_mask() const noexcept { return x_; }
  constexpr Mask z_mask() const noexcept { return z_; }

  constexpr int weight() const noexcept { return std::popcount(x_ | z_); }
  constexpr int y_count() const noexcept { return std::popcount(x_ & z_); }
  constexpr bool is_identity() const noexcept { return (x_ | z_) == 0; }
  constexpr bool is_diagonal() const noexcept { return x_ == 0; }
  /// True iff z_mask = 0 and x_mask != 0.
  constexpr bool is_x_string() const noexcept { return z_ == 0 && x_ != 0; }
  /// 'I', 'X', 'Y' or 'Z' on the given qubit.
  char at(int qubit) const;

  /// Qubit indices ascending, e.g. "X0 Z3 Y7"; the identity renders as "I".
  std::string to_string() const;

  friend constexpr bool operator==(const PauliWord&, const PauliWord&) = default;

 private:
  Mask x_ = 0;
  Mask z_ = 0;
  int n_ = 0;
};

struct PhasedWord {
  PauliWord word;
  Phase phase;
};

/// a * b = i^phase * word. Throws DimensionError on mismatched qubit counts.
PhasedWord multiply(const PauliWord& a, const PauliWord& b);

/// Same as multiply without the qubit-count check; for inner loops over
/// words already known to share a register.
inline PhasedWord multiply_unchecked(const PauliWord& a, const PauliWord& b);

/// ab = ba. Throws DimensionError on mismatched qubit counts.
bool commutes(const PauliWord& a, const PauliWord& b);

constexpr bool commutes_unchecked(const PauliWord& a, const PauliWord& b) noexcept {
  return (std::popcount((a.x_mask() & b.z_mask()) ^ (a.z_mask() & b.x_mask())) & 1) == 0;
}

inline int y_count(const PauliWord& w) noexcept { return w.y_count(); }
inline bool is_x_string(const PauliWord& w) noexcept { return w.is_x_string(); }

/// Total order: weight, then x mask, then z mask (qubit count last).
struct WordOrder {
  constexpr bool operator()(const PauliWord& a, const PauliWord& b) const noexcept {
    return compare(a, b) < 0;
  }
  static constexpr std::strong_ordering compare(const PauliWord& a, const PauliWord& b) noexcept {
    if (auto c = a.weight() <=> b.weight(); c != 0) return c;
    if (auto c = a.x_mask() <=> b.x_mask(); c != 0) return c;
    if (auto c = a.z_mask() <=> b.z_mask(); c != 0) return c;
    return a.n_qubits() <=> b.n_qubits();
  }
};

struct PauliWordHash {
  std::size_t operator()(const PauliWord& w) const noexcept {
    // splitmix64 finalizer over both masks
    std::uint64_t h = w.x_mask() * 0x9E3779B97F4A7C15ULL ^ (w.z_mask() + 0x632BE59BD9B4E019ULL);
    h ^= h >> 30;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 27;
    h *= 0x94D049BB133111EBULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

inline PhasedWord multiply_unchecked(const PauliWord& a, const PauliWord& b) {
  // With P = i^{x.z} X^x Z^z per qubit:
  //   a b = i^{|xa&za| + |xb&zb| + 2|za&xb| - |xc&zc|} * c,  c = (xa^xb, za^zb)
  const auto xc = a.x_mask() ^ b.x_mask();
  const auto zc = a.z_mask() ^ b.z_mask();
  const int k = std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask()) +
                2 * std::popcount(a.z_mask() & b.x_mask()) - std::popcount(xc & zc);
  return {PauliWord::from_masks_unchecked(a.n_qubits(), xc, zc), Phase(k)};
}

}  // namespace iqcc
