#include "oamsim/zeeman.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace oamsim {

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

ComplexMatrix evolution_operator(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& es,
                                 double angle) {
  const Eigen::VectorXd& evals = es.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k)
    phases[k] = std::exp(-kI * angle * evals[k]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix field_generator(const ZeemanParams& params) {
  const SpinOperators ops = angular_momentum_ops(2 * GroundDM::kF);
  return params.axis[0] * ops.fx + params.axis[1] * ops.fy + params.axis[2] * ops.fz;
}

}  // namespace

GroundDM GroundDM::edge_pumped(double pop_m3, double pop_m1,
                               std::complex<double> coh_m3_m1) {
  GroundDM dm;
  dm.rho(index(3), index(3)) = pop_m3;
  dm.rho(index(1), index(1)) = pop_m1;
  dm.rho(index(3), index(1)) = coh_m3_m1;
  dm.rho(index(1), index(3)) = std::conj(coh_m3_m1);
  return dm;
}

double GroundDM::hermiticity_error() const {
  return (rho - rho.adjoint()).norm();
}

double GroundDM::trace_real() const { return rho.trace().real(); }

double GroundDM::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()));
  return es.eigenvalues().minCoeff();
}

bool GroundDM::is_valid(double herm_tol, double psd_tol) const {
  const double tr = trace_real();
  return hermiticity_error() < herm_tol && tr > 0.0 && tr <= 1.0 + herm_tol &&
         min_eigenvalue() > -psd_tol;
}

ReadProjection ReadProjection::clebsch_gordan_default() {
  // <3,m;1,-1|2,m-1> * <3,m-2;1,+1|2,m-1> for m = -1..3:
  // sqrt(15)/21, sqrt(30)/21, 2/7, sqrt(30)/21, sqrt(15)/21.
  ReadProjection p;
  p.weights = {std::complex<double>{0.18442777839082938, 0.0},
               std::complex<double>{0.26082026547865056, 0.0},
               std::complex<double>{0.2857142857142857, 0.0},
               std::complex<double>{0.26082026547865056, 0.0},
               std::complex<double>{0.18442777839082938, 0.0}};
  return p;
}

SpinOperators angular_momentum_ops(int two_f) {
  if (two_f < 1) throw InvalidFError("angular_momentum_ops: need 2F >= 1");
  const int dim = two_f + 1;
  const double f = 0.5 * two_f;

  ComplexMatrix raise = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double m = -f + k;
    raise(k + 1, k) = std::sqrt(f * (f + 1) - m * (m + 1));
  }
  const ComplexMatrix lower = raise.adjoint();

  SpinOperators ops;
  ops.fx = 0.5 * (raise + lower);
  ops.fy = -0.5 * kI * (raise - lower);
  ops.fz = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) ops.fz(k, k) = -f + k;
  return ops;
}

LarmorResult larmor(const ZeemanParams& params) {
  LarmorResult r;
  r.omega_l_rad_per_us =
      2.0 * kPi * params.g_f * kMuBOverH_MHzPerGauss * params.b_gauss;
  r.period_us = r.omega_l_rad_per_us == 0.0
                    ? std::numeric_limits<double>::infinity()
                    : 2.0 * kPi / r.omega_l_rad_per_us;
  return r;
}

GroundDM precess(const GroundDM& rho, const ZeemanParams& params, double t_s_us) {
  const double omega_l = larmor(params).omega_l_rad_per_us;
  if (omega_l == 0.0 || t_s_us == 0.0) return rho;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(field_generator(params));
  const ComplexMatrix u = evolution_operator(es, omega_l * t_s_us);
  GroundDM out;
  out.rho = u * rho.rho * u.adjoint();
  return out;
}

std::complex<double> retrieval_amplitude(const GroundDM& rho,
                                         const ReadProjection& proj,
                                         double gamma_per_us, double t_s_us) {
  std::complex<double> sum{0.0, 0.0};
  for (int m = -1; m <= 3; ++m)
    sum += proj.weight_for(m) * rho.rho(GroundDM::index(m), GroundDM::index(m - 2));
  return std::exp(-gamma_per_us * t_s_us) * sum;
}

std::vector<RevivalRecord> revival_scan(const GroundDM& rho0,
                                        const ZeemanParams& params,
                                        const ReadProjection& proj,
                                        const std::vector<double>& t_grid_us) {
  if (t_grid_us.empty()) throw EmptyGridError("revival_scan: empty storage-time grid");
  for (std::size_t k = 0; k < t_grid_us.size(); ++k) {
    if (t_grid_us[k] < 0)
      throw std::invalid_argument("revival_scan: storage times must be >= 0");
    if (k > 0 && t_grid_us[k] < t_grid_us[k - 1])
      throw std::invalid_argument("revival_scan: storage times must be sorted");
  }

  const double omega_l = larmor(params).omega_l_rad_per_us;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(field_generator(params));

  std::vector<RevivalRecord> records;
  records.reserve(t_grid_us.size());
  for (double t : t_grid_us) {
    GroundDM rho_t;
    if (omega_l == 0.0 || t == 0.0) {
      rho_t = rho0;
    } else {
      const ComplexMatrix u = evolution_operator(es, omega_l * t);
      rho_t.rho = u * rho0.rho * u.adjoint();
    }
    RevivalRecord rec;
    rec.t_s_us = t;
    rec.amplitude = retrieval_amplitude(rho_t, proj, params.gamma_b, t);
    rec.intensity = std::norm(rec.amplitude);
    records.push_back(rec);
  }
  return records;
}

}  // namespace oamsim
