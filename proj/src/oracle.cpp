#include "iqcc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "iqcc/errors.hpp"

namespace iqcc::oracle {

namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr double kDegeneracy = 1e-8;
constexpr double kSpinTolerance = 1e-6;
// Above this sector dimension ground_state switches from dense to Lanczos.
constexpr std::size_t kDenseGroundStates = 1024;

void check_capacity(int n_qubits, int limit) {
  if (n_qubits > limit) {
    throw CapacityError("oracle supports at most " + std::to_string(limit) + " qubits, got " +
                        std::to_string(n_qubits));
  }
}

int two_ms_of(std::uint64_t b) {
  constexpr std::uint64_t kAlpha = 0x5555555555555555ULL;
  return std::popcount(b & kAlpha) - std::popcount(b & ~kAlpha);
}

/// h restricted to a basis as a sparse matrix. Terms sharing an x mask map
/// a basis state to the same image, so they are summed before insertion.
class SparseAction {
 public:
  SparseAction(const PauliSum& h, const std::vector<std::uint64_t>& basis) {
    std::unordered_map<std::uint64_t, Eigen::Index> index;
    index.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<Eigen::Index>(i));
    std::map<std::uint64_t, std::vector<PauliTerm>> groups;
    for (const auto& t : h.terms()) groups[t.word.x_mask()].push_back(t);

    const auto dim = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<std::complex<double>>> entries;
    entries.reserve(basis.size() * groups.size());
    for (Eigen::Index col = 0; col < dim; ++col) {
      const auto b = basis[static_cast<std::size_t>(col)];
      for (const auto& [x, terms] : groups) {
        const auto it = index.find(b ^ x);
        if (it == index.end()) continue;
        std::complex<double> amp = 0.0;
        std::uint64_t image = 0;
        for (const auto& t : terms) amp += t.coeff * apply_word(t.word, b, image);
        if (amp != 0.0) entries.emplace_back(it->second, col, amp);
      }
    }
    matrix_.resize(dim, dim);
    matrix_.setFromTriplets(entries.begin(), entries.end());
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix_ * v; }

 private:
  Eigen::SparseMatrix<std::complex<double>> matrix_;
};

GroundState dense_ground(const PauliSum& h, std::vector<std::uint64_t> basis) {
  const DenseOperator m = matrix_in_basis(h, basis);
  GroundState out;
  if (h.is_real_hermitian()) {
    const Eigen::MatrixXd real = m.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real);
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    out.energy = solver.eigenvalues()[0];
    out.vector = solver.eigenvectors().col(0).cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<DenseOperator> solver(m);
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    out.energy = solver.eigenvalues()[0];
    out.vector = solver.eigenvectors().col(0);
  }
  out.residual = (m * out.vector - out.energy * out.vector).norm();
  out.basis = std::move(basis);
  return out;
}

/// Lanczos with full reorthogonalization, restarted from the current Ritz
/// vector until the residual meets tolerance.
GroundState lanczos_ground(const PauliSum& h, std::vector<std::uint64_t> basis) {
  if (!h.is_real_hermitian()) throw CapacityError("iterative oracle path supports real Hamiltonians only");
  const SparseAction action(h, basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  constexpr Eigen::Index kKrylov = 120;
  constexpr int kRestarts = 50;

  Eigen::VectorXcd start = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start[i] = 1.0 + 1e-3 * static_cast<double>(i % 17);
  start.normalize();

  GroundState out;
  for (int restart = 0; restart < kRestarts; ++restart) {
    std::vector<Eigen::VectorXcd> q{start};
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(kKrylov, kKrylov);
    Eigen::Index m = 0;
    for (; m < kKrylov; ++m) {
      Eigen::VectorXcd w = action.apply(q[static_cast<std::size_t>(m)]);
      for (Eigen::Index j = 0; j <= m; ++j) {
        const auto overlap = q[static_cast<std::size_t>(j)].dot(w);
        if (j >= m - 1) t(j, m) = t(m, j) = overlap.real();
        w -= overlap * q[static_cast<std::size_t>(j)];
      }
      for (Eigen::Index j = 0; j <= m; ++j) w -= q[static_cast<std::size_t>(j)].dot(w) * q[static_cast<std::size_t>(j)];
      const double beta = w.norm();
      if (m + 1 == kKrylov || beta < 1e-14) {
        ++m;
        break;
      }
      t(m, m + 1) = t(m + 1, m) = beta;
      q.push_back(w / beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t.topLeftCorner(m, m));
    Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(dim);
    for (Eigen::Index j = 0; j < m; ++j) ritz += solver.eigenvectors()(j, 0) * q[static_cast<std::size_t>(j)];
    ritz.normalize();
    out.energy = solver.eigenvalues()[0];
    out.vector = ritz;
    out.residual = (action.apply(ritz) - out.energy * ritz).norm();
    if (out.residual <= kResidualTolerance) break;
    start = ritz;
  }
  out.basis = std::move(basis);
  return out;
}

}  // namespace

std::complex<double> apply_word(const PauliWord& word, std::uint64_t basis_state, std::uint64_t& image) {
  // P = (-i)^m Z(z) X(x) with m the y count.
  image = basis_state ^ word.x_mask();
  const double sign = (std::popcount(word.z_mask() & image) & 1) ? -1.0 : 1.0;
  static constexpr std::complex<double> kMinusIPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return sign * kMinusIPowers[word.y_count() % 4];
}

DenseOperator to_matrix(const PauliSum& h) {
  check_capacity(h.n_qubits(), kMaxDenseQubits);
  const auto dim = Eigen::Index{1} << h.n_qubits();
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      std::uint64_t row = 0;
      const auto amp = apply_word(t.word, static_cast<std::uint64_t>(col), row);
      m(static_cast<Eigen::Index>(row), col) += t.coeff * amp;
    }
  }
  return m;
}

DenseOperator to_matrix(const PauliWord& word) { return to_matrix(PauliSum(word.n_qubits(), {{word, 1.0}})); }

std::vector<std::uint64_t> sector_basis(int n_qubits, const Sector& sector) {
  check_capacity(n_qubits, kMaxQubits);
  std::vector<std::uint64_t> basis;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (sector.n_electrons && std::popcount(b) != *sector.n_electrons) continue;
    if (sector.two_ms && two_ms_of(b) != *sector.two_ms) continue;
    basis.push_back(b);
  }
  return basis;
}

DenseOperator matrix_in_basis(const PauliSum& h, const std::vector<std::uint64_t>& basis) {
  check_capacity(h.n_qubits(), kMaxQubits);
  std::unordered_map<std::uint64_t, Eigen::Index> index;
  index.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<Eigen::Index>(i));
  const auto dim = static_cast<Eigen::Index>(basis.size());
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      std::uint64_t image = 0;
      const auto amp = apply_word(t.word, basis[static_cast<std::size_t>(col)], image);
      if (auto it = index.find(image); it != index.end()) m(it->second, col) += t.coeff * amp;
    }
  }
  return m;
}

GroundState ground_state(const PauliSum& h, const Sector& sector) {
  check_capacity(h.n_qubits(), kMaxQubits);
  auto basis = sector_basis(h.n_qubits(), sector);
  if (basis.empty()) throw EmptySectorError("sector contains no basis states");
  GroundState out = basis.size() <= kDenseGroundStates ? dense_ground(h, std::move(basis))
                                                        : lanczos_ground(h, std::move(basis));
  if (!(out.residual <= kResidualTolerance)) {
    throw NumericError("ground-state residual " + std::to_string(out.residual) + " above tolerance");
  }
  return out;
}

double expectation(const PauliSum& op, const std::vector<std::uint64_t>& basis, const Eigen::VectorXcd& v) {
  const SparseAction action(op, basis);
  return v.dot(action.apply(v)).real();
}

double spin_resolved_spectrum(const PauliSum& h, const PauliSum& s_squared, const PauliSum& s_z,
                              const SpinSector& sector, std::optional<int> n_electrons) {
  check_capacity(h.n_qubits(), kMaxQubits);
  for (const auto& t : s_z.terms()) {
    if (!t.word.is_diagonal()) throw InvalidArgumentError("S_z must be diagonal in the computational basis");
  }
  std::vector<std::uint64_t> basis;
  for (const auto b : sector_basis(h.n_qubits(), Sector{n_electrons, std::nullopt})) {
    const double m = reference_energy(s_z, ReferenceState(h.n_qubits(), b));
    if (std::abs(m - sector.m_s) <= kSpinTolerance) basis.push_back(b);
  }
  if (basis.empty()) throw EmptySectorError("no basis state with the requested M_s");
  if (basis.size() > (std::size_t{1} << kMaxDenseQubits)) throw CapacityError("spin sector too large for the dense oracle");

  const DenseOperator hm = matrix_in_basis(h, basis);
  const DenseOperator s2 = matrix_in_basis(s_squared, basis);
  if ((hm * s2 - s2 * hm).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgumentError("Hamiltonian does not commute with S^2 in the requested sector");
  }
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(hm);
  if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const double target = sector.s * (sector.s + 1.0);
  for (Eigen::Index begin = 0; begin < values.size();) {
    Eigen::Index end = begin + 1;
    while (end < values.size() && values[end] - values[begin] < kDegeneracy) ++end;
    const DenseOperator block = vectors.middleCols(begin, end - begin);
    Eigen::SelfAdjointEigenSolver<DenseOperator> spin(block.adjoint() * s2 * block);
    for (Eigen::Index k = 0; k < spin.eigenvalues().size(); ++k) {
      if (std::abs(spin.eigenvalues()[k] - target) <= kSpinTolerance) return values[begin];
    }
    begin = end;
  }
  throw EmptySectorError("no eigenstate with S = " + std::to_string(sector.s) + ", M_s = " +
                         std::to_string(sector.m_s));
}

}  // namespace iqcc::oracle
