#include "iqcc/integrals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "iqcc/errors.hpp"

namespace iqcc {

namespace {

constexpr double kDuplicateTolerance = 1e-8;

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::optional<int> header_int(const std::string& header, const std::string& key) {
  // Keys are matched as whole words followed by '='.
  for (std::size_t pos = header.find(key); pos != std::string::npos; pos = header.find(key, pos + 1)) {
    const bool word_start = pos == 0 || !std::isalnum(static_cast<unsigned char>(header[pos - 1]));
    std::size_t eq = pos + key.size();
    while (eq < header.size() && std::isspace(static_cast<unsigned char>(header[eq]))) ++eq;
    if (!word_start || eq >= header.size() || header[eq] != '=') continue;
    std::size_t num = eq + 1;
    while (num < header.size() && std::isspace(static_cast<unsigned char>(header[num]))) ++num;
    int value = 0;
    const auto [end, ec] = std::from_chars(header.data() + num, header.data() + header.size(), value);
    if (ec != std::errc{}) return std::nullopt;
    return value;
  }
  return std::nullopt;
}

double parse_value(std::string token, std::size_t line) {
  std::replace_if(token.begin(), token.end(), [](char c) { return c == 'D' || c == 'd'; }, 'E');
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw ParseError("bad value '" + token + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad value '" + token + "'", line);
  }
}

/// First assignment wins; a later one must agree to kDuplicateTolerance.
void assign_once(double& slot, char& seen, double value, std::size_t line) {
  if (seen != 0 && std::abs(slot - value) > kDuplicateTolerance) {
    throw ParseError("conflicting duplicate integral", line);
  }
  if (seen == 0) slot = value;
  seen = 1;
}

}  // namespace

void TwoElectronIntegrals::set_symmetric(int i, int j, int k, int l, double value) {
  auto& self = *this;
  self(i, j, k, l) = value;
  self(j, i, k, l) = value;
  self(i, j, l, k) = value;
  self(j, i, l, k) = value;
  self(k, l, i, j) = value;
  self(l, k, i, j) = value;
  self(k, l, j, i) = value;
  self(l, k, j, i) = value;
}

MolecularIntegrals parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::string header;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string u = upper(line);
    header += ' ' + u;
    const auto first = u.find_first_not_of(" \t\r");
    if (u.find("&END") != std::string::npos || (first != std::string::npos && u[first] == '/')) {
      header_done = true;
      break;
    }
  }
  if (!header_done || header.find("&FCI") == std::string::npos) {
    throw ParseError("missing &FCI ... &END header", line_no);
  }
  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  if (!norb || !nelec) throw ParseError("header lacks NORB or NELEC", line_no);
  if (*norb < 0 || *norb > 32) throw ParseError("NORB outside [0, 32]", line_no);
  if (*nelec < 0 || *nelec > 2 * *norb) throw ParseError("NELEC inconsistent with NORB", line_no);

  MolecularIntegrals mi;
  mi.n_spatial = *norb;
  mi.n_electrons = *nelec;
  mi.ms2 = header_int(header, "MS2").value_or(0);
  if (std::abs(mi.ms2) > mi.n_electrons || (mi.n_electrons + mi.ms2) % 2 != 0) {
    throw ParseError("MS2 inconsistent with NELEC", line_no);
  }
  const int n = mi.n_spatial;
  mi.h1 = Eigen::MatrixXd::Zero(n, n);
  mi.g2 = TwoElectronIntegrals(n);

  std::vector<char> seen_g2(static_cast<std::size_t>(n) * n * n * n, 0);
  std::vector<char> seen_h1(static_cast<std::size_t>(n) * n, 0);
  char seen_core = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream record(line);
    std::string value_token;
    if (!(record >> value_token)) continue;  // blank line
    const double value = parse_value(value_token, line_no);
    int idx[4];
    for (int& v : idx) {
      if (!(record >> v)) throw ParseError("expected four integer indices", line_no);
    }
    std::string extra;
    if (record >> extra) throw ParseError("trailing data after indices", line_no);
    for (int v : idx) {
      if (v < 0 || v > n) throw ParseError("orbital index " + std::to_string(v) + " outside [0, NORB]", line_no);
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      assign_once(mi.core_energy, seen_core, value, line_no);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const int a = std::max(i, j) - 1;
      const int b = std::min(i, j) - 1;
      double slot = mi.h1(a, b);
      assign_once(slot, seen_h1[static_cast<std::size_t>(a) * n + b], value, line_no);
      mi.h1(a, b) = mi.h1(b, a) = slot;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy, not needed
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      // canonical representative of the 8-fold orbit
      std::array<int, 4> key{std::max(i, j) - 1, std::min(i, j) - 1, std::max(k, l) - 1, std::min(k, l) - 1};
      if (std::pair(key[0], key[1]) < std::pair(key[2], key[3])) key = {key[2], key[3], key[0], key[1]};
      const std::size_t flat = ((static_cast<std::size_t>(key[0]) * n + key[1]) * n + key[2]) * n + key[3];
      double slot = mi.g2(key[0], key[1], key[2], key[3]);
      assign_once(slot, seen_g2[flat], value, line_no);
      mi.g2.set_symmetric(key[0], key[1], key[2], key[3], slot);
    } else {
      throw ParseError("index pattern matches no FCIDUMP record type", line_no);
    }
  }
  return mi;
}

MolecularIntegrals read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fcidump(buffer.str());
}

CASWindow CASWindow::from_counts(const MolecularIntegrals& mi, int n_occ_active, int n_virt_active) {
  const int n_occ = (mi.n_electrons + mi.ms2) / 2;
  const int n_docc = (mi.n_electrons - mi.ms2) / 2;
  const int n_frozen = n_occ - n_occ_active;
  if (n_occ_active < 0 || n_virt_active < 0 || n_frozen < 0 || n_frozen > n_docc ||
      n_occ + n_virt_active > mi.n_spatial) {
    throw InvalidArgumentError("CAS window (" + std::to_string(n_occ_active) + " occupied, " +
                               std::to_string(n_virt_active) + " virtual) does not fit " +
                               std::to_string(mi.n_spatial) + " orbitals with " + std::to_string(n_occ) +
                               " occupied");
  }
  CASWindow w;
  w.n_occ_active = n_occ_active;
  w.n_virt_active = n_virt_active;
  for (int p = 0; p < mi.n_spatial; ++p) {
    if (p < n_frozen) {
      w.frozen_occupied.push_back(p);
    } else if (p < n_occ + n_virt_active) {
      w.active.push_back(p);
    } else {
      w.discarded_virtual.push_back(p);
    }
  }
  return w;
}

CASWindow CASWindow::full(const MolecularIntegrals& mi) {
  const int n_occ = (mi.n_electrons + mi.ms2) / 2;
  return from_counts(mi, n_occ, mi.n_spatial - n_occ);
}

MolecularIntegrals select_cas(const MolecularIntegrals& mi, const CASWindow& window) {
  std::vector<int> owner(static_cast<std::size_t>(mi.n_spatial), 0);
  auto claim = [&](const std::vector<int>& set) {
    for (int p : set) {
      if (p < 0 || p >= mi.n_spatial) throw InvalidArgumentError("CAS orbital index out of range");
      if (owner[static_cast<std::size_t>(p)]++ != 0) {
        throw InvalidArgumentError("orbital " + std::to_string(p) + " assigned to more than one CAS subset");
      }
    }
  };
  claim(window.frozen_occupied);
  claim(window.active);
  claim(window.discarded_virtual);
  if (std::any_of(owner.begin(), owner.end(), [](int c) { return c == 0; })) {
    throw InvalidArgumentError("CAS window does not cover every orbital");
  }
  const int n_frozen = static_cast<int>(window.frozen_occupied.size());
  if (2 * n_frozen > mi.n_electrons - std::abs(mi.ms2)) {
    throw InvalidArgumentError("CAS window freezes more electrons than are paired");
  }

  const auto& h = mi.h1;
  const auto& g = mi.g2;
  MolecularIntegrals out;
  out.n_spatial = static_cast<int>(window.active.size());
  out.n_electrons = mi.n_electrons - 2 * n_frozen;
  out.ms2 = mi.ms2;
  out.core_energy = mi.core_energy;
  for (int i : window.frozen_occupied) {
    out.core_energy += 2.0 * h(i, i);
    for (int j : window.frozen_occupied) out.core_energy += 2.0 * g(i, i, j, j) - g(i, j, j, i);
  }
  const int n = out.n_spatial;
  out.h1 = Eigen::MatrixXd::Zero(n, n);
  out.g2 = TwoElectronIntegrals(n);
  for (int a = 0; a < n; ++a) {
    const int p = window.active[static_cast<std::size_t>(a)];
    for (int b = 0; b < n; ++b) {
      const int q = window.active[static_cast<std::size_t>(b)];
      double v = h(p, q);
      for (int i : window.frozen_occupied) v += 2.0 * g(p, q, i, i) - g(p, i, i, q);
      out.h1(a, b) = v;
      for (int c = 0; c < n; ++c) {
        const int r = window.active[static_cast<std::size_t>(c)];
        for (int d = 0; d < n; ++d) {
          out.g2(a, b, c, d) = g(p, q, r, window.active[static_cast<std::size_t>(d)]);
        }
      }
    }
  }
  return out;
}

}  // namespace iqcc
