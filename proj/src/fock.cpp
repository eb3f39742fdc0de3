#include "sceig/fock.hpp"

#include "sceig/errors.hpp"

namespace sceig {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_square(const Matrix& m, std::size_t n, const char* what) {
  if (m.rows() != static_cast<Eigen::Index>(n) || m.cols() != static_cast<Eigen::Index>(n))
    throw DimensionMismatch(what, n * n, static_cast<std::size_t>(m.size()));
}

}  // namespace

Matrix density(const Matrix& v) { return 2.0 * v * v.transpose(); }

Matrix HartreeFockPotential::operator()(const Matrix& p) const {
  const std::size_t n = eri_->n();
  require_square(p, n, "density size");
  const RowMatrix pr = p;
  const double* pd = pr.data();
  const double* e = eri_->values().data();
  const std::size_t n2 = n * n;

  RowMatrix coulomb(n, n);
  for (std::size_t uv = 0; uv < n2; ++uv) {
    const double* block = e + uv * n2;
    double sum = 0.0;
    for (std::size_t ls = 0; ls < n2; ++ls) sum += pd[ls] * block[ls];
    coulomb.data()[uv] = sum;
  }

  RowMatrix exchange = RowMatrix::Zero(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    double* row = exchange.data() + u * n;
    for (std::size_t ls = 0; ls < n2; ++ls) {
      const double coef = pd[ls];
      if (coef == 0.0) continue;
      const double* block = e + (u * n2 + ls) * n;
      for (std::size_t v = 0; v < n; ++v) row[v] += coef * block[v];
    }
  }

  Matrix u = coulomb - 0.5 * exchange;
  return 0.5 * (u + u.transpose());
}

Matrix u_eff_hf(const Matrix& p, const Problem& problem) {
  return HartreeFockPotential(problem.eri())(p);
}

Matrix fock(const Matrix& h, const EffectivePotential& potential, const Matrix& p) {
  return h + potential(p);
}

Matrix fock(const Problem& problem, const Matrix& p) {
  return fock(problem.core_hamiltonian(), HartreeFockPotential(problem.eri()), p);
}

double electronic_energy(const Matrix& p, const Matrix& h, const Matrix& f) {
  if (h.rows() != p.rows() || h.cols() != p.cols())
    throw DimensionMismatch("core hamiltonian size", static_cast<std::size_t>(p.size()),
                            static_cast<std::size_t>(h.size()));
  if (f.rows() != p.rows() || f.cols() != p.cols())
    throw DimensionMismatch("fock size", static_cast<std::size_t>(p.size()),
                            static_cast<std::size_t>(f.size()));
  return 0.5 * p.cwiseProduct(h + f).sum();
}

double total_energy(const Problem& problem, const Matrix& v) {
  const Matrix p = density(v);
  return electronic_energy(p, problem.core_hamiltonian(), fock(problem, p)) +
         problem.nuclear_repulsion();
}

Vector rayleigh_quotients(const Matrix& f, const Matrix& v) {
  return (v.transpose() * f * v).diagonal();
}

double residual(const Problem& problem, const Matrix& v) {
  const Matrix f = fock(problem, density(v));
  const Vector lambda = rayleigh_quotients(f, v);
  return (f * v - problem.overlap() * v * lambda.asDiagonal()).norm();
}

std::string_view to_string(Acceleration mode) noexcept {
  switch (mode) {
    case Acceleration::vanilla:
      return "vanilla";
    case Acceleration::damping:
      return "damping";
    case Acceleration::diis:
      return "diis";
  }
  return "unknown";
}

FockState::FockState(Matrix initial, Acceleration mode, double alpha, std::size_t diis_capacity)
    : f_(std::move(initial)), mode_(mode), alpha_(alpha), capacity_(diis_capacity) {}

void FockState::damp(const Matrix& f_new) { f_ = (1.0 - alpha_) * f_ + alpha_ * f_new; }

Matrix diis_error(const Matrix& f, const Matrix& p, const Matrix& s, const Orthogonalizer& x) {
  const Matrix fps = f * p * s;
  return x.to_orthonormal(fps - fps.transpose());
}

void FockState::diis_extrapolate(const Matrix& f_new, const Matrix& p, const Matrix& s,
                                 const Orthogonalizer& x) {
  history_.push_back({f_new, diis_error(f_new, p, s, x)});
  while (history_.size() > capacity_) history_.pop_front();

  const auto m = static_cast<Eigen::Index>(history_.size());
  Matrix b = Matrix::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double bij = history_[static_cast<std::size_t>(i)].error.cwiseProduct(
                                                                  history_[static_cast<std::size_t>(j)].error)
                             .sum();
      b(i, j) = bij;
      b(j, i) = bij;
    }
  // scaling the error block leaves the coefficients unchanged
  const double scale = b.topLeftCorner(m, m).diagonal().maxCoeff();
  if (scale > 0.0) b.topLeftCorner(m, m) /= scale;
  b.row(m).head(m).setConstant(-1.0);
  b.col(m).head(m).setConstant(-1.0);
  Vector rhs = Vector::Zero(m + 1);
  rhs(m) = -1.0;

  const Eigen::FullPivLU<Matrix> lu(b);
  Vector solution;
  if (lu.isInvertible()) solution = lu.solve(rhs);
  if (!lu.isInvertible() || !solution.allFinite()) {
    ++fallbacks_;
    f_ = f_new;
    return;
  }
  coefficients_ = solution.head(m);
  Matrix extrapolated = Matrix::Zero(f_new.rows(), f_new.cols());
  for (Eigen::Index i = 0; i < m; ++i)
    extrapolated += coefficients_(i) * history_[static_cast<std::size_t>(i)].fock;
  f_ = std::move(extrapolated);
}

void FockState::update(const Matrix& f_new, const Matrix& p, const Matrix& s,
                       const Orthogonalizer& x) {
  switch (mode_) {
    case Acceleration::vanilla:
      f_ = f_new;
      break;
    case Acceleration::damping:
      damp(f_new);
      break;
    case Acceleration::diis:
      diis_extrapolate(f_new, p, s, x);
      break;
  }
  f_prime_ = x.to_orthonormal(f_);
}

}  // namespace sceig
