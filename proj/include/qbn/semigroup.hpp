// Copyright 2026 The qbn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Quantum exclusion Markov semigroup on the truncated space: diagonal
// Hamiltonian H_f, admissible generator G = -iH_f - S_w/2, jump operators
// L_jk = sqrt(w(j,k)) C_j A_k, the Lindblad generator and its evolution in
// the Heisenberg and Schrodinger pictures.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint/integrate/integrate_adaptive.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qbn/errors.hpp"
#include "qbn/expm.hpp"
#include "qbn/fock.hpp"
#include "qbn/report.hpp"
#include "qbn/tolerances.hpp"
#include "qbn/weighted_number.hpp"

namespace qbn {

inline constexpr int kMaxModelModes = 12;
inline constexpr int kMaxEvolutionModes = 8;
inline constexpr int kMaxChoiModes = 5;

/// Real energies f(s) of the diagonal Hamiltonian H_f = sum_s f(s)|Z_s><Z_s|.
class HamiltonianTable {
public:
  HamiltonianTable(ModeCount n, Eigen::VectorXd f) : n_(n), f_(std::move(f)) {
    if (f_.size() != n.dimension()) {
      throw ShapeError("Hamiltonian table needs 2^" + std::to_string(n.value()) + " = " +
                       std::to_string(n.dimension()) + " entries, got " + std::to_string(f_.size()));
    }
    if (!f_.allFinite()) throw DomainError("Hamiltonian entries must be finite");
  }

  static HamiltonianTable zero(ModeCount n) { return {n, Eigen::VectorXd::Zero(n.dimension())}; }

  /// f(s) = sum of eps[k] over occupied sites.
  static HamiltonianTable one_body(ModeCount n, std::span<const double> eps) {
    if (static_cast<int>(eps.size()) != n.value()) {
      throw ShapeError("one-body energies need one entry per mode");
    }
    Eigen::VectorXd f(n.dimension());
    for (SubsetIndex s : enumerate_basis(n)) {
      double e = 0.0;
      for (int k : s.modes()) e += eps[static_cast<std::size_t>(k)];
      f[s.index()] = e;
    }
    return {n, std::move(f)};
  }

  ModeCount modes() const { return n_; }
  double operator[](SubsetIndex s) const { return f_[s.index()]; }
  const Eigen::VectorXd& values() const { return f_; }
  LinearOperator op() const { return LinearOperator::diagonal(n_, f_); }

private:
  ModeCount n_;
  Eigen::VectorXd f_;
};

/// sqrt(w(j,k)) C_j A_k: moves a particle from site `source` to the empty site `target`.
struct JumpOperator {
  int target = 0;
  int source = 0;
  double rate = 0.0;
  LinearOperator op;
  /// image[s] = index of the basis element L maps Z_s onto, or -1 if L Z_s = 0.
  std::vector<Eigen::Index> image;
};

class SemigroupModel {
public:
  const TransitionKernel& kernel() const { return kernel_; }
  const HamiltonianTable& hamiltonian() const { return ham_; }
  ModeCount modes() const { return kernel_.modes(); }
  const ThetaTable& theta() const { return theta_; }
  /// S_w in spectral form.
  const LinearOperator& weighted_number() const { return sw_; }
  const LinearOperator& generator() const { return g_; }
  /// Diagonal of G: -i f(s) - theta(s)/2.
  const DenseVector& generator_diagonal() const { return g_diag_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }
  /// max |G + G* + S_w|
  double admissibility_residual() const { return admissibility_residual_; }
  /// max |sum L*L - S_w|
  double jump_sum_residual() const { return jump_sum_residual_; }

  friend SemigroupModel build_model(const TransitionKernel&, const HamiltonianTable&, const Tolerances&);

private:
  SemigroupModel(TransitionKernel w, HamiltonianTable h)
      : kernel_(std::move(w)), ham_(std::move(h)), theta_(kernel_), sw_(kernel_.modes()),
        g_(kernel_.modes()) {}

  TransitionKernel kernel_;
  HamiltonianTable ham_;
  ThetaTable theta_;
  LinearOperator sw_;
  LinearOperator g_;
  DenseVector g_diag_;
  std::vector<JumpOperator> jumps_;
  double admissibility_residual_ = 0.0;
  double jump_sum_residual_ = 0.0;
};

/// Builds G and the jump family and checks G + G* = -S_w and sum L*L = S_w
/// against S_w assembled by explicit composition.
inline SemigroupModel build_model(const TransitionKernel& w, const HamiltonianTable& h,
                                  const Tolerances& tol = {}) {
  if (w.modes() != h.modes()) throw ShapeError("kernel and Hamiltonian mode counts differ");
  const ModeCount n = w.modes();
  if (n.value() > kMaxModelModes) {
    throw CapacityError("semigroup models limited to " + std::to_string(kMaxModelModes) + " modes");
  }

  SemigroupModel model(w, h);
  model.sw_ = LinearOperator::diagonal(n, model.theta_.values());
  model.g_diag_ = DenseVector(n.dimension());
  for (Eigen::Index s = 0; s < n.dimension(); ++s) {
    model.g_diag_[s] = Complex(-0.5 * model.theta_.values()[s], -h.values()[s]);
  }
  model.g_ = LinearOperator::diagonal(n, model.g_diag_);

  for (int j = 0; j < n.value(); ++j) {
    for (int k = 0; k < n.value(); ++k) {
      const double rate = w.weight(j, k);
      if (rate <= 0.0) continue;
      JumpOperator jump{j, k, rate, std::sqrt(rate) * (creator(n, j) * annihilator(n, k)), {}};
      jump.image.assign(static_cast<std::size_t>(n.dimension()), -1);
      for (SubsetIndex s : enumerate_basis(n)) {
        if (!s.contains(k)) continue;
        const SubsetIndex t = s.without(k);
        if (t.contains(j)) continue;
        jump.image[s.bits] = t.with(j).index();
      }
      model.jumps_.push_back(std::move(jump));
    }
  }

  const LinearOperator sw_direct = weighted_number_direct(w);
  model.admissibility_residual_ = residual_norm(model.g_ + model.g_.adjoint(), -1.0 * sw_direct);
  LinearOperator jump_sum = LinearOperator::zero(n);
  for (const auto& jump : model.jumps_) jump_sum += jump.op.adjoint() * jump.op;
  model.jump_sum_residual_ = residual_norm(jump_sum, sw_direct);

  if (model.admissibility_residual_ > tol.admissibility || model.jump_sum_residual_ > tol.admissibility) {
    throw ConsistencyError("semigroup model failed admissibility self-check (residuals " +
                           std::to_string(model.admissibility_residual_) + ", " +
                           std::to_string(model.jump_sum_residual_) + ")");
  }
  return model;
}

/// Closed-form contraction semigroup exp(tG): amplitude-wise damping and phase.
inline KetVector contraction_semigroup_apply(const SemigroupModel& model, double t, const KetVector& xi) {
  if (t < 0.0) throw DomainError("negative evolution time");
  if (xi.modes() != model.modes()) throw ShapeError("ket and model mode counts differ");
  DenseVector out = xi.amplitudes();
  for (Eigen::Index s = 0; s < out.size(); ++s) out[s] *= std::exp(model.generator_diagonal()[s] * t);
  return {xi.modes(), std::move(out)};
}

/// L(X) = i[H,X] + sum_jk (L* X L - {L*L, X}/2), in the literal Lindblad form.
inline LinearOperator lindblad_apply(const SemigroupModel& model, const LinearOperator& x) {
  if (x.modes() != model.modes()) throw ShapeError("observable and model mode counts differ");
  LinearOperator out = Complex(0.0, 1.0) * commutator(model.hamiltonian().op(), x);
  for (const auto& jump : model.jumps()) {
    const LinearOperator ldag = jump.op.adjoint();
    out += ldag * x * jump.op - 0.5 * anticommutator(ldag * jump.op, x);
  }
  return out;
}

namespace detail {

inline DenseMatrix lindblad_dense(const SemigroupModel& model, const DenseMatrix& x) {
  const SparseMatrix h = model.hamiltonian().op().matrix();
  DenseMatrix out = Complex(0.0, 1.0) * (h * x - x * h);
  for (const auto& jump : model.jumps()) {
    const SparseMatrix& l = jump.op.matrix();
    const SparseMatrix ldag = l.adjoint();
    const SparseMatrix ldl = ldag * l;
    out += ldag * (x * l) - 0.5 * (ldl * x + x * ldl);
  }
  return out;
}

inline DenseMatrix lindblad_dual_dense(const SemigroupModel& model, const DenseMatrix& rho) {
  const SparseMatrix h = model.hamiltonian().op().matrix();
  DenseMatrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& jump : model.jumps()) {
    const SparseMatrix& l = jump.op.matrix();
    const SparseMatrix ldag = l.adjoint();
    const SparseMatrix ldl = ldag * l;
    out += l * (rho * ldag) - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

inline Eigen::Index vec_index(Eigen::Index row, Eigen::Index col, Eigen::Index dim) {
  return row + col * dim;
}

inline DenseVector vectorize(const DenseMatrix& m) {
  return Eigen::Map<const DenseVector>(m.data(), m.size());
}

inline DenseMatrix unvectorize(const DenseVector& v, Eigen::Index dim) {
  return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

} // namespace detail

/// Heisenberg-picture generator on column-major vec(X), assembled from the
/// jump images: (L* X L)[s,t] = w X[image(s), image(t)].
inline SparseMatrix heisenberg_superoperator(const SemigroupModel& model) {
  const Eigen::Index dim = model.modes().dimension();
  const DenseVector& g = model.generator_diagonal();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim * dim) * (1 + model.jumps().size() / 2));
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Eigen::Index r = detail::vec_index(row, col, dim);
      t.emplace_back(r, r, std::conj(g[row]) + g[col]);
      for (const auto& jump : model.jumps()) {
        const Eigen::Index a = jump.image[static_cast<std::size_t>(row)];
        const Eigen::Index b = jump.image[static_cast<std::size_t>(col)];
        if (a >= 0 && b >= 0) t.emplace_back(r, detail::vec_index(a, b, dim), jump.rate);
      }
    }
  }
  SparseMatrix sup(dim * dim, dim * dim);
  sup.setFromTriplets(t.begin(), t.end());
  return sup;
}

/// Schrodinger-picture generator: d rho = G rho + rho G* + sum L rho L*.
inline SparseMatrix schrodinger_superoperator(const SemigroupModel& model) {
  const Eigen::Index dim = model.modes().dimension();
  const DenseVector& g = model.generator_diagonal();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim * dim) * (1 + model.jumps().size() / 2));
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Eigen::Index c = detail::vec_index(row, col, dim);
      t.emplace_back(c, c, g[row] + std::conj(g[col]));
      for (const auto& jump : model.jumps()) {
        const Eigen::Index a = jump.image[static_cast<std::size_t>(row)];
        const Eigen::Index b = jump.image[static_cast<std::size_t>(col)];
        if (a >= 0 && b >= 0) t.emplace_back(detail::vec_index(a, b, dim), c, jump.rate);
      }
    }
  }
  SparseMatrix sup(dim * dim, dim * dim);
  sup.setFromTriplets(t.begin(), t.end());
  return sup;
}

enum class EvolutionMethod {
  automatic,          // exact exponential up to max_exact_dimension, adaptive beyond
  exact_exponential,  // sparse superoperator, scaling + Taylor action
  adaptive_stepping,  // embedded Runge-Kutta-Fehlberg 7(8) on the Lindblad form
};

struct EvolutionParams {
  EvolutionMethod method = EvolutionMethod::automatic;
  /// Target accuracy per unit time for the adaptive path.
  double tolerance = 1e-10;
  /// Largest superoperator dimension (4^n) the exact path accepts.
  Eigen::Index max_exact_dimension = 4096;
};

namespace detail {

inline EvolutionMethod resolve(const EvolutionParams& params, ModeCount n) {
  if (params.tolerance <= 0.0) throw DomainError("evolution tolerance must be positive");
  if (n.value() > kMaxEvolutionModes) {
    throw CapacityError("evolution limited to " + std::to_string(kMaxEvolutionModes) + " modes");
  }
  const Eigen::Index sup_dim = n.dimension() * n.dimension();
  switch (params.method) {
  case EvolutionMethod::exact_exponential:
    if (sup_dim > params.max_exact_dimension) {
      throw CapacityError("superoperator dimension " + std::to_string(sup_dim) + " exceeds cap " +
                          std::to_string(params.max_exact_dimension));
    }
    return EvolutionMethod::exact_exponential;
  case EvolutionMethod::adaptive_stepping:
    return EvolutionMethod::adaptive_stepping;
  case EvolutionMethod::automatic:
    break;
  }
  return sup_dim <= params.max_exact_dimension ? EvolutionMethod::exact_exponential
                                               : EvolutionMethod::adaptive_stepping;
}

template <typename Rhs>
DenseMatrix integrate_adaptive(Rhs&& rhs, const DenseMatrix& x0, double t, double tolerance) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Complex>;
  const Eigen::Index dim = x0.rows();
  State state(x0.data(), x0.data() + x0.size());
  auto system = [&](const State& x, State& dxdt, double) {
    const DenseMatrix m = Eigen::Map<const DenseMatrix>(x.data(), dim, dim);
    const DenseMatrix d = rhs(m);
    std::copy(d.data(), d.data() + d.size(), dxdt.begin());
  };
  // local error targets two orders below the requested global accuracy
  const double local = 1e-2 * tolerance;
  auto stepper = odeint::make_controlled(local, local, odeint::runge_kutta_fehlberg78<State>());
  odeint::integrate_adaptive(stepper, system, state, 0.0, t, std::min(t, 0.05));
  return Eigen::Map<const DenseMatrix>(state.data(), dim, dim);
}

} // namespace detail

/// T_t(X) for the Heisenberg picture, dX/dt = L(X).
inline DenseMatrix evolve_heisenberg(const SemigroupModel& model, const DenseMatrix& x, double t,
                                     const EvolutionParams& params = {}) {
  if (t < 0.0) throw DomainError("negative evolution time");
  const Eigen::Index dim = model.modes().dimension();
  if (x.rows() != dim || x.cols() != dim) throw ShapeError("observable shape does not match model");
  const EvolutionMethod method = detail::resolve(params, model.modes());
  if (t == 0.0) return x;
  if (method == EvolutionMethod::exact_exponential) {
    const DenseVector v = expm_action(heisenberg_superoperator(model), t, detail::vectorize(x));
    return detail::unvectorize(v, dim);
  }
  return detail::integrate_adaptive([&](const DenseMatrix& m) { return detail::lindblad_dense(model, m); },
                                    x, t, params.tolerance);
}

inline LinearOperator evolve_heisenberg(const SemigroupModel& model, const LinearOperator& x, double t,
                                        const EvolutionParams& params = {}) {
  if (x.modes() != model.modes()) throw ShapeError("observable and model mode counts differ");
  return {x.modes(), SparseMatrix(evolve_heisenberg(model, x.dense(), t, params).sparseView())};
}

/// Density matrix: Hermitian, unit trace, positive semidefinite up to tolerance.
class DensityMatrix {
public:
  /// Validates against the given tolerances.
  DensityMatrix(ModeCount n, DenseMatrix rho, double hermitian_tol = 1e-12, double trace_tol = 1e-12,
                double eigen_tol = 1e-10)
      : n_(n), rho_(std::move(rho)) {
    if (rho_.rows() != n.dimension() || rho_.cols() != n.dimension()) {
      throw ShapeError("density matrix shape does not match 2^" + std::to_string(n.value()));
    }
    if (hermiticity_residual() > hermitian_tol) throw DomainError("density matrix is not Hermitian");
    if (std::abs(trace() - 1.0) > trace_tol) throw DomainError("density matrix trace is not 1");
    if (min_eigenvalue() < -eigen_tol) throw DomainError("density matrix is not positive semidefinite");
  }

  static DensityMatrix unchecked(ModeCount n, DenseMatrix rho) {
    DensityMatrix d(n);
    d.rho_ = std::move(rho);
    return d;
  }

  static DensityMatrix basis(ModeCount n, SubsetIndex s) {
    check_subset(n, s);
    DenseMatrix rho = DenseMatrix::Zero(n.dimension(), n.dimension());
    rho(s.index(), s.index()) = 1.0;
    return unchecked(n, std::move(rho));
  }

  static DensityMatrix vacuum(ModeCount n) { return basis(n, SubsetIndex{}); }

  /// diag(p) for a probability vector in bitmask order.
  static DensityMatrix diagonal(ModeCount n, const Eigen::VectorXd& p) {
    if (p.size() != n.dimension()) throw ShapeError("population vector length mismatch");
    return {n, DenseMatrix(p.cast<Complex>().asDiagonal()), 1e-12, 1e-10, 1e-12};
  }

  ModeCount modes() const { return n_; }
  const DenseMatrix& matrix() const { return rho_; }
  double trace() const { return rho_.trace().real(); }
  double hermiticity_residual() const { return max_abs_entry(rho_ - rho_.adjoint()); }
  double min_eigenvalue() const {
    const DenseMatrix h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  /// Tr(rho X).
  Complex expectation(const DenseMatrix& x) const { return (rho_ * x).trace(); }

private:
  explicit DensityMatrix(ModeCount n) : n_(n) {}

  ModeCount n_;
  DenseMatrix rho_;
};

/// rho_t for d rho/dt = -i[H,rho] + sum (L rho L* - {L*L, rho}/2).
inline DensityMatrix evolve_schrodinger(const SemigroupModel& model, const DensityMatrix& rho, double t,
                                        const EvolutionParams& params = {}) {
  if (t < 0.0) throw DomainError("negative evolution time");
  if (rho.modes() != model.modes()) throw ShapeError("state and model mode counts differ");
  const Eigen::Index dim = model.modes().dimension();
  const EvolutionMethod method = detail::resolve(params, model.modes());
  if (t == 0.0) return rho;
  DenseMatrix out;
  if (method == EvolutionMethod::exact_exponential) {
    const DenseVector v = expm_action(schrodinger_superoperator(model), t, detail::vectorize(rho.matrix()));
    out = detail::unvectorize(v, dim);
  } else {
    out = detail::integrate_adaptive(
        [&](const DenseMatrix& m) { return detail::lindblad_dual_dense(model, m); }, rho.matrix(), t,
        params.tolerance);
  }
  return DensityMatrix::unchecked(model.modes(), std::move(out));
}

/// Choi matrix sum_{s,t} |s><t| (x) Phi_t(|s><t|) of the Schrodinger map,
/// row index s*D + a, column index t*D + b. Symmetrized to be exactly Hermitian.
inline DenseMatrix choi_matrix(const SemigroupModel& model, double t) {
  if (t < 0.0) throw DomainError("negative evolution time");
  const ModeCount n = model.modes();
  if (n.value() > kMaxChoiModes) {
    throw CapacityError("Choi matrix limited to " + std::to_string(kMaxChoiModes) + " modes");
  }
  const Eigen::Index dim = n.dimension();
  const Eigen::Index sup = dim * dim;
  const DenseMatrix prop = expm_action(schrodinger_superoperator(model), t, DenseMatrix(DenseMatrix::Identity(sup, sup)));
  DenseMatrix choi(sup, sup);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (Eigen::Index u = 0; u < dim; ++u) {
      const Eigen::Index in = detail::vec_index(s, u, dim);
      for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
          choi(s * dim + a, u * dim + b) = prop(detail::vec_index(a, b, dim), in);
        }
      }
    }
  }
  return 0.5 * (choi + choi.adjoint());
}

/// Traces out the output factor of a Choi matrix; the identity for trace-preserving maps.
inline DenseMatrix choi_partial_trace_output(const DenseMatrix& choi, Eigen::Index dim) {
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (Eigen::Index u = 0; u < dim; ++u) {
      for (Eigen::Index a = 0; a < dim; ++a) out(s, u) += choi(s * dim + a, u * dim + a);
    }
  }
  return out;
}

inline double min_hermitian_eigenvalue(const DenseMatrix& m) {
  const DenseMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Complex matrix with independent standard normal real and imaginary parts.
inline DenseMatrix random_matrix(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  DenseMatrix m(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = Complex(normal(rng), normal(rng));
  }
  return m;
}

/// Conservativity, semigroup law, contraction, positivity and complete
/// positivity at each time in `times`. CP is checked up to kMaxChoiModes.
inline std::vector<IdentityReport> verify_markov_properties(const SemigroupModel& model,
                                                            std::span<const double> times,
                                                            std::uint64_t seed = 0,
                                                            const EvolutionParams& params = {},
                                                            const Tolerances& tol = {}) {
  const ModeCount n = model.modes();
  const Eigen::Index dim = n.dimension();
  const DenseMatrix id = DenseMatrix::Identity(dim, dim);
  const DenseMatrix x = random_matrix(dim, seed);
  const DenseMatrix b = random_matrix(dim, seed + 1);
  const DenseMatrix bb = b * b.adjoint();
  const DenseMatrix positive = bb / spectral_norm(bb);
  const double x_norm = spectral_norm(x);

  std::vector<IdentityReport> out;
  for (double t : times) {
    const nlohmann::json p = {{"t", t}};
    out.push_back(make_report("markov/conservative", n.value(), p,
                              max_abs_entry(evolve_heisenberg(model, id, t, params) - id), tol.evolution));

    const DenseMatrix whole = evolve_heisenberg(model, x, t, params);
    const DenseMatrix split =
        evolve_heisenberg(model, evolve_heisenberg(model, x, 0.7 * t, params), 0.3 * t, params);
    out.push_back(make_report("markov/semigroup_law", n.value(), {{"t", t}, {"split", {0.3, 0.7}}},
                              max_abs_entry(whole - split), tol.semigroup_law));

    out.push_back(make_report("markov/contraction", n.value(), p,
                              std::max(0.0, spectral_norm(whole) - x_norm), tol.evolution));

    const DenseMatrix tp = evolve_heisenberg(model, positive, t, params);
    out.push_back(make_report("markov/positivity", n.value(), p,
                              std::max(0.0, -min_hermitian_eigenvalue(tp)), tol.evolution));

    if (n.value() <= kMaxChoiModes) {
      const DenseMatrix choi = choi_matrix(model, t);
      out.push_back(make_report("markov/complete_positivity", n.value(), p,
                                std::max(0.0, -min_hermitian_eigenvalue(choi)), tol.evolution));
      out.push_back(make_report("markov/choi_trace_preserving", n.value(), p,
                                max_abs_entry(choi_partial_trace_output(choi, dim) - id), tol.evolution));
    }
  }
  return out;
}

/// E = |Z_0><Z_0| onto the vacuum; reports max(0, -min eig(T_t(E) - E)).
inline IdentityReport verify_subharmonic_vacuum(const SemigroupModel& model, double t,
                                                const EvolutionParams& params = {},
                                                const Tolerances& tol = {}) {
  if (!model.kernel().regular()) throw DomainError("subharmonic vacuum check requires a regular kernel");
  const Eigen::Index dim = model.modes().dimension();
  DenseMatrix e = DenseMatrix::Zero(dim, dim);
  e(0, 0) = 1.0;
  const DenseMatrix diff = evolve_heisenberg(model, e, t, params) - e;
  return make_report("subharmonic/vacuum", model.modes().value(), {{"t", t}},
                     std::max(0.0, -min_hermitian_eigenvalue(diff)), tol.evolution);
}

struct DecoherenceFreeReport {
  bool applicable = false;
  /// max |[X, L]| and |[X, L*]| over the jump family.
  IdentityReport surrogate;
  std::vector<IdentityReport> conclusions;

  bool pass() const { return applicable && all_pass(conclusions); }
};

/// If X commutes with every L_jk and L_jk*, checks that T_t acts on X as
/// unitary conjugation by exp(itH_f), that [S_w, X] = 0 and that
/// A_k X A_k = C_k X C_k = 0 for every mode.
inline DecoherenceFreeReport verify_decoherence_free(const SemigroupModel& model, const LinearOperator& x,
                                                     double t, const EvolutionParams& params = {},
                                                     const Tolerances& tol = {}) {
  if (x.modes() != model.modes()) throw ShapeError("observable and model mode counts differ");
  const ModeCount n = model.modes();
  DecoherenceFreeReport report;
  double surrogate = 0.0;
  for (const auto& jump : model.jumps()) {
    surrogate = std::max(surrogate, residual_norm(commutator(x, jump.op)));
    surrogate = std::max(surrogate, residual_norm(commutator(x, jump.op.adjoint())));
  }
  report.surrogate = make_report("decoherence_free/commutant", n.value(), nlohmann::json::object(),
                                 surrogate, tol.weighted);
  report.applicable = report.surrogate.pass;
  if (!report.applicable) return report;

  const DenseMatrix xd = x.dense();
  const Eigen::VectorXd& f = model.hamiltonian().values();
  DenseMatrix conj = xd;
  for (Eigen::Index c = 0; c < xd.cols(); ++c) {
    for (Eigen::Index r = 0; r < xd.rows(); ++r) {
      conj(r, c) *= std::exp(Complex(0.0, t * (f[r] - f[c])));
    }
  }
  report.conclusions.push_back(make_report("decoherence_free/unitary_conjugation", n.value(), {{"t", t}},
                                           max_abs_entry(evolve_heisenberg(model, xd, t, params) - conj),
                                           tol.evolution));
  report.conclusions.push_back(make_report("decoherence_free/commutes_with_weighted_number", n.value(),
                                           nlohmann::json::object(),
                                           residual_norm(commutator(model.weighted_number(), x)),
                                           tol.weighted));
  double sandwich = 0.0;
  for (int k = 0; k < n.value(); ++k) {
    const LinearOperator a = annihilator(n, k);
    const LinearOperator c = creator(n, k);
    sandwich = std::max({sandwich, residual_norm(a * x * a), residual_norm(c * x * c)});
  }
  report.conclusions.push_back(make_report("decoherence_free/sandwich_vanishes", n.value(),
                                           nlohmann::json::object(), sandwich, tol.weighted));
  return report;
}

} // namespace qbn
