#include "iqcc/pauli_word.hpp"

#include <cctype>
#include <charconv>

#include "iqcc/errors.hpp"

namespace iqcc {

namespace {

PauliWord::Mask register_mask(int n_qubits) {
  return n_qubits >= 64 ? ~PauliWord::Mask{0} : ((PauliWord::Mask{1} << n_qubits) - 1);
}

void check_same_register(const PauliWord& a, const PauliWord& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("Pauli words over " + std::to_string(a.n_qubits()) + " and " +
                         std::to_string(b.n_qubits()) + " qubits");
  }
}

}  // namespace

PauliWord::PauliWord(int n_qubits, Mask x_mask, Mask z_mask) : x_(x_mask), z_(z_mask), n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw DimensionError("qubit count " + std::to_string(n_qubits) + " outside [0, 64]");
  }
  if (((x_mask | z_mask) & ~register_mask(n_qubits)) != 0) {
    throw DimensionError("Pauli mask exceeds " + std::to_string(n_qubits) + " qubits");
  }
}

PauliWord PauliWord::single(int n_qubits, int qubit, char pauli) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw DimensionError("qubit " + std::to_string(qubit) + " outside a " + std::to_string(n_qubits) +
                         "-qubit register");
  }
  const Mask bit = Mask{1} << qubit;
  switch (std::toupper(static_cast<unsigned char>(pauli))) {
    case 'I': return PauliWord(n_qubits, 0, 0);
    case 'X': return PauliWord(n_qubits, bit, 0);
    case 'Y': return PauliWord(n_qubits, bit, bit);
    case 'Z': return PauliWord(n_qubits, 0, bit);
    default: throw InvalidArgumentError(std::string("unknown Pauli letter '") + pauli + "'");
  }
}

PauliWord PauliWord::parse(std::string_view text, int n_qubits) {
  Mask x = 0;
  Mask z = 0;
  std::size_t pos = 0;
  bool saw_identity = false;
  bool saw_factor = false;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("bad Pauli word \"" + std::string(text) + "\": " + why, 0);
  };
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[pos])));
    ++pos;
    if (letter == 'I' && (pos == text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))) {
      saw_identity = true;
      continue;
    }
    if (letter != 'X' && letter != 'Y' && letter != 'Z') throw fail("unexpected character");
    int qubit = -1;
    const auto* begin = text.data() + pos;
    const auto [end, ec] = std::from_chars(begin, text.data() + text.size(), qubit);
    if (ec != std::errc{} || end == begin) throw fail("missing qubit index");
    pos += static_cast<std::size_t>(end - begin);
    if (qubit < 0 || qubit >= n_qubits) throw fail("qubit index out of range");
    const Mask bit = Mask{1} << qubit;
    if (((x | z) & bit) != 0) throw fail("qubit repeated");
    if (letter != 'Z') x |= bit;
    if (letter != 'X') z |= bit;
    saw_factor = true;
  }
  if (saw_identity && saw_factor) throw fail("identity mixed with factors");
  if (!saw_identity && !saw_factor) throw fail("empty word");
  return PauliWord(n_qubits, x, z);
}

char PauliWord::at(int qubit) const {
  if (qubit < 0 || qubit >= n_) throw DimensionError("qubit index out of range");
  const bool xb = (x_ >> qubit) & 1U;
  const bool zb = (z_ >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliWord::to_string() const {
  if (is_identity()) return "I";
  std::string out;
  for (Mask support = x_ | z_; support != 0; support &= support - 1) {
    const int q = std::countr_zero(support);
    if (!out.empty()) out += ' ';
    out += at(q);
    out += std::to_string(q);
  }
  return out;
}

PhasedWord multiply(const PauliWord& a, const PauliWord& b) {
  check_same_register(a, b);
  return multiply_unchecked(a, b);
}

bool commutes(const PauliWord& a, const PauliWord& b) {
  check_same_register(a, b);
  return commutes_unchecked(a, b);
}

}  // namespace iqcc
