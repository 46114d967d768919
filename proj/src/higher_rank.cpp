#include "isoflow/higher_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "isoflow/csv.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/spectral.hpp"

namespace isoflow {

void ChainState::validate() const {
  if (s.empty()) throw ParameterError("chain state: d must be >= 1");
  if (s.size() != r.size()) throw ParameterError("chain state: s and r must both have length d");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(r[i]))
      throw ParameterError("chain state: entries must be finite");
    if (!(r[i] > 0.0)) throw ParameterError("chain state: r_i must be > 0");
  }
}

namespace {

// s_i with s_0 = s_{d+1} = 0, 1-based.
double s_at(const ChainState& st, long i) {
  if (i < 1 || i > static_cast<long>(st.d())) return 0.0;
  return st.s[static_cast<std::size_t>(i - 1)];
}

double r_at(const ChainState& st, long i) {
  if (i < 1 || i > static_cast<long>(st.d())) return 0.0;
  return st.r[static_cast<std::size_t>(i - 1)];
}

}  // namespace

ChainRate chain_rhs(const ChainState& state, double g) {
  const std::size_t d = state.d();
  ChainRate rate;
  rate.ds.resize(d);
  rate.dr.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const long i = static_cast<long>(k) + 1;
    const double u = g * state.r[k];
    rate.ds[k] = 2.0 * state.r[k] * u;
    rate.dr[k] = u * (s_at(state, i - 1) - 2.0 * s_at(state, i) + s_at(state, i + 1));
  }
  return rate;
}

TridiagonalOperator build_chain_L(const ChainState& state) {
  const std::size_t d = state.d();
  TridiagonalOperator L;
  L.diag.resize(d + 1);
  L.off.resize(d);
  for (std::size_t n = 0; n <= d; ++n) {
    const long i = static_cast<long>(n);
    L.diag[n] = s_at(state, i + 1) - s_at(state, i);
  }
  for (std::size_t n = 0; n < d; ++n) L.off[n] = state.r[n];
  return L;
}

SkewTridiagonalOperator build_chain_M(const ChainState& state, double g) {
  const std::size_t d = state.d();
  SkewTridiagonalOperator M;
  M.dim = d + 1;
  M.off.resize(d);
  // Entry (i-1, i) = u_i, so entry (i, i-1) = -u_i = off[i-1].
  for (std::size_t k = 0; k < d; ++k) M.off[k] = -g * state.r[k];
  return M;
}

ChainLaxResidual chain_lax_residual(const ChainState& state, double g) {
  const ChainRate rate = chain_rhs(state, g);
  ChainState dot;
  dot.s = rate.ds;
  dot.r = rate.dr;
  const DenseMatrix Ldot = build_chain_L(dot).to_dense();
  const DenseMatrix L = build_chain_L(state).to_dense();
  const DenseMatrix M = build_chain_M(state, g).to_dense();
  const DenseMatrix comm = M * L - L * M;
  ChainLaxResidual res;
  const std::size_t n = L.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      res.with_ML = std::max(res.with_ML, std::abs(Ldot(i, j) - comm(i, j)));
      res.with_LM = std::max(res.with_LM, std::abs(Ldot(i, j) + comm(i, j)));
    }
  }
  return res;
}

EigenPolys eigen_polys(const ChainState& state, double lambda) {
  const long d = static_cast<long>(state.d());
  EigenPolys out;
  out.p.assign(static_cast<std::size_t>(d + 1), 0.0);
  out.p[0] = 1.0;
  // Row n of L p = lambda p:
  // r_n p_{n-1} + (s_{n+1} - s_n) p_n + r_{n+1} p_{n+1} = lambda p_n.
  for (long n = 0; n < d; ++n) {
    const double back = n > 0 ? r_at(state, n) * out.p[n - 1] : 0.0;
    out.p[n + 1] = ((lambda - (s_at(state, n + 1) - s_at(state, n))) * out.p[n] - back) /
                   r_at(state, n + 1);
  }
  out.closure = lambda * out.p[d] - (-s_at(state, d) * out.p[d] + r_at(state, d) * out.p[d - 1]);
  return out;
}

ChainSpectrum chain_spectrum(const ChainState& state) {
  state.validate();
  ChainSpectrum sp;
  sp.eigenvalues = eigs_sym_tridiag(build_chain_L(state)).eigenvalues;
  for (double v : sp.eigenvalues) sp.trace_sum += v;
  sp.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sp.eigenvalues.size(); ++i)
    sp.min_gap = std::min(sp.min_gap, sp.eigenvalues[i] - sp.eigenvalues[i - 1]);
  sp.simple = sp.min_gap >= 1e-12;
  return sp;
}

ChristoffelData christoffel_weights(const ChainState& state) {
  state.validate();
  const SpectralDecomposition dec = eigs_sym_tridiag(build_chain_L(state));
  const std::size_t n = dec.eigenvalues.size();
  ChristoffelData cd;
  cd.eigenvalues = dec.eigenvalues;
  cd.ql_weights = dec.weights;
  cd.weights.resize(n);
  cd.P = DenseMatrix(n);
  cd.Q = DenseMatrix(n);
  for (std::size_t r = 0; r < n; ++r) {
    const EigenPolys ep = eigen_polys(state, dec.eigenvalues[r]);
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      cd.P(k, r) = ep.p[k];
      norm += ep.p[k] * ep.p[k];
    }
    cd.weights[r] = 1.0 / norm;
    for (std::size_t k = 0; k < n; ++k) cd.Q(k, r) = ep.p[k] * std::sqrt(cd.weights[r]);
  }
  const DenseMatrix QtQ = cd.Q.transpose() * cd.Q;
  cd.q_orthogonality = (QtQ - DenseMatrix::identity(n)).max_abs();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double dual = 0.0, primal = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        dual += cd.P(a, k) * cd.P(b, k) * cd.weights[k];
        primal += cd.P(k, a) * cd.P(k, b);
      }
      const double delta = a == b ? 1.0 : 0.0;
      cd.dual_orthogonality = std::max(cd.dual_orthogonality, std::abs(dual - delta));
      cd.primal_orthogonality =
          std::max(cd.primal_orthogonality, std::abs(primal * cd.weights[a] - delta));
    }
  }
  return cd;
}

TraceInvariants trace_invariants(const ChainState& state) {
  const long d = static_cast<long>(state.d());
  // delta_n = (D0)_{n,n} = s_{n+1} - s_n, n = 0..d; rr_n = r_n^2 with r_0 = 0.
  auto delta = [&](long n) {
    if (n < 0 || n > d) return 0.0;
    return s_at(state, n + 1) - s_at(state, n);
  };
  auto rr = [&](long n) { return r_at(state, n) * r_at(state, n); };

  TraceInvariants ti;
  double sum_d2 = 0.0, sum_r2 = 0.0;
  for (long n = 0; n <= d; ++n) {
    const double dn = delta(n);
    sum_d2 += dn * dn;
    sum_r2 += rr(n);
    // Tr D0^3 + 3 Tr(D0 D^2) + 3 Tr(S D0 S* D^2)
    ti.tr3_closed += dn * dn * dn + 3.0 * dn * rr(n) + 3.0 * delta(n - 1) * rr(n);
    // Tr D0^4 + 2 Tr D^4 + 4 Tr(D0^2 D^2) + 4 Tr(S D0 S* D0 D^2)
    //   + 4 Tr(S D0^2 S* D^2) + 4 Tr(S D^2 S* D^2)
    ti.tr4_closed += dn * dn * dn * dn + 2.0 * rr(n) * rr(n) + 4.0 * dn * dn * rr(n) +
                     4.0 * delta(n - 1) * dn * rr(n) + 4.0 * delta(n - 1) * delta(n - 1) * rr(n) +
                     4.0 * rr(n - 1) * rr(n);
  }
  ti.tr2_single_weight = sum_d2 + sum_r2;
  ti.tr2_corrected = sum_d2 + 2.0 * sum_r2;

  const DenseMatrix L = build_chain_L(state).to_dense();
  const DenseMatrix L2 = L * L;
  ti.tr2_dense = L2.trace();
  ti.tr3_dense = (L2 * L).trace();
  ti.tr4_dense = (L2 * L2).trace();
  return ti;
}

double chain_g(const UPolicy& policy, double t) { return u_of(policy, t, 1.0); }

ChainState chain_rk4_step(const ChainState& st, const UPolicy& policy, double h) {
  const std::size_t d = st.d();
  auto shifted = [&](const ChainRate& k, double f) {
    ChainState out;
    out.t = st.t + f;
    out.s.resize(d);
    out.r.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      out.s[i] = st.s[i] + f * k.ds[i];
      out.r[i] = st.r[i] + f * k.dr[i];
    }
    return out;
  };
  const ChainRate k1 = chain_rhs(st, chain_g(policy, st.t));
  const ChainRate k2 = chain_rhs(shifted(k1, 0.5 * h), chain_g(policy, st.t + 0.5 * h));
  const ChainRate k3 = chain_rhs(shifted(k2, 0.5 * h), chain_g(policy, st.t + 0.5 * h));
  const ChainRate k4 = chain_rhs(shifted(k3, h), chain_g(policy, st.t + h));
  ChainState next;
  next.t = st.t + h;
  next.s.resize(d);
  next.r.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    next.s[i] = st.s[i] + h / 6.0 * (k1.ds[i] + 2.0 * k2.ds[i] + 2.0 * k3.ds[i] + k4.ds[i]);
    next.r[i] = st.r[i] + h / 6.0 * (k1.dr[i] + 2.0 * k2.dr[i] + 2.0 * k3.dr[i] + k4.dr[i]);
  }
  return next;
}

ChainTrajectory integrate_chain(const ChainState& state0, const UPolicy& policy, double dt,
                                double t_end, int record_every) {
  state0.validate();
  validate(policy);
  if (!(dt > 0.0)) throw ParameterError("integrate_chain: dt must be > 0");
  if (!(t_end >= state0.t)) throw ParameterError("integrate_chain: t_end must be >= t0");
  if (record_every < 1) throw ParameterError("integrate_chain: record_every must be >= 1");
  const double span = t_end - state0.t;
  const long steps = span == 0.0 ? 0 : static_cast<long>(std::ceil(span / dt - 1e-9));
  const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;

  ChainTrajectory traj{state0};
  ChainState st = state0;
  for (long k = 0; k < steps; ++k) {
    ChainState next = chain_rk4_step(st, policy, h);
    next.t = state0.t + static_cast<double>(k + 1) * h;
    for (std::size_t i = 0; i < next.d(); ++i) {
      if (!std::isfinite(next.s[i]) || !std::isfinite(next.r[i]))
        throw NumericalError("integrate_chain: non-finite state at t=" + csv::format_double(next.t));
    }
    st = std::move(next);
    if ((k + 1) % record_every == 0 || k + 1 == steps) traj.push_back(st);
  }
  return traj;
}

ChainDrift chain_drift(const ChainTrajectory& traj) {
  ChainDrift drift;
  if (traj.empty()) return drift;
  const std::vector<double> ev0 = chain_spectrum(traj.front()).eigenvalues;
  const TraceInvariants t0 = trace_invariants(traj.front());
  for (const ChainState& st : traj) {
    const std::vector<double> ev = chain_spectrum(st).eigenvalues;
    for (std::size_t i = 0; i < ev.size(); ++i)
      drift.spectrum = std::max(drift.spectrum, std::abs(ev[i] - ev0[i]));
    const TraceInvariants ti = trace_invariants(st);
    drift.tr2 = std::max(drift.tr2, std::abs(ti.tr2_dense - t0.tr2_dense));
    drift.tr3 = std::max(drift.tr3, std::abs(ti.tr3_dense - t0.tr3_dense));
    drift.tr4 = std::max(drift.tr4, std::abs(ti.tr4_dense - t0.tr4_dense));
  }
  return drift;
}

namespace {

struct PnResiduals {
  double eigen = 0.0;
  double polynomial = 0.0;
  double reversed_sign = 0.0;
};

// Right-hand side u_{n+1} p_{n+1} - u_n p_{n-1} - u_1 p_1 p_n, rows 0..d,
// with u_{d+1} = 0 and p_{-1} = 0.
std::vector<double> pn_rhs(const std::vector<double>& p, const ChainState& st, double g) {
  const long d = static_cast<long>(st.d());
  std::vector<double> out(p.size());
  const double c = g * r_at(st, 1) * p[1];
  for (long n = 0; n <= d; ++n) {
    const double up = n + 1 <= d ? g * r_at(st, n + 1) * p[n + 1] : 0.0;
    const double down = n >= 1 ? g * r_at(st, n) * p[n - 1] : 0.0;
    out[n] = up - down - c * p[n];
  }
  return out;
}

PnResiduals pn_residuals(const ChainState& st, const UPolicy& policy, double h) {
  const ChainState plus = chain_rk4_step(st, policy, h);
  const ChainState minus = chain_rk4_step(st, policy, -h);
  const double g = chain_g(policy, st.t);
  const long d = static_cast<long>(st.d());

  const std::vector<double> ev = chain_spectrum(st).eigenvalues;
  const std::vector<double> ev_p = chain_spectrum(plus).eigenvalues;
  const std::vector<double> ev_m = chain_spectrum(minus).eigenvalues;

  PnResiduals res;
  for (std::size_t r = 0; r < ev.size(); ++r) {
    const std::vector<double> p = eigen_polys(st, ev[r]).p;
    const std::vector<double> pp = eigen_polys(plus, ev_p[r]).p;
    const std::vector<double> pm = eigen_polys(minus, ev_m[r]).p;
    const std::vector<double> rhs = pn_rhs(p, st, g);
    for (long n = 1; n <= d; ++n) {
      const double fd = (pp[n] - pm[n]) / (2.0 * h);
      res.eigen = std::max(res.eigen, std::abs(fd - rhs[n]));
      res.reversed_sign = std::max(res.reversed_sign, std::abs(fd + rhs[n]));
    }
  }

  // Polynomial identity at lambdas that are not eigenvalues, rows 0..d-1.
  const double span = ev.back() - ev.front();
  for (double frac : {0.137, 0.5 + 1.0 / 3.0, -0.21, 1.29}) {
    const double lambda = ev.front() + frac * span;
    const std::vector<double> p = eigen_polys(st, lambda).p;
    const std::vector<double> pp = eigen_polys(plus, lambda).p;
    const std::vector<double> pm = eigen_polys(minus, lambda).p;
    const std::vector<double> rhs = pn_rhs(p, st, g);
    for (long n = 0; n < d; ++n) {
      const double fd = (pp[n] - pm[n]) / (2.0 * h);
      res.polynomial = std::max(res.polynomial, std::abs(fd - rhs[n]));
    }
  }
  return res;
}

double observed_order(double coarse, double fine) {
  if (fine <= 0.0 || coarse <= 0.0) return 0.0;
  return std::log2(coarse / fine);
}

}  // namespace

PnDerivativeReport pn_time_derivative_check(const ChainState& state, const UPolicy& policy,
                                            double h) {
  state.validate();
  validate(policy);
  if (!(h > 0.0)) throw ParameterError("pn_time_derivative_check: h must be > 0");
  const PnResiduals a = pn_residuals(state, policy, h);
  const PnResiduals b = pn_residuals(state, policy, 0.5 * h);
  PnDerivativeReport rep;
  rep.residual = a.eigen;
  rep.residual_half = b.eigen;
  rep.order = observed_order(a.eigen, b.eigen);
  rep.polynomial = a.polynomial;
  rep.polynomial_half = b.polynomial;
  rep.polynomial_order = observed_order(a.polynomial, b.polynomial);
  rep.reversed_sign = a.reversed_sign;
  return rep;
}

void write_chain_csv(std::ostream& os, const ChainTrajectory& traj, int digits) {
  if (traj.empty()) return;
  const std::size_t d = traj.front().d();
  std::vector<std::string> header{"t"};
  for (std::size_t i = 1; i <= d; ++i) header.push_back("s" + std::to_string(i));
  for (std::size_t i = 1; i <= d; ++i) header.push_back("r" + std::to_string(i));
  csv::write_row(os, header);
  for (const ChainState& st : traj) {
    std::vector<std::string> row{csv::format_double(st.t, digits)};
    for (double v : st.s) row.push_back(csv::format_double(v, digits));
    for (double v : st.r) row.push_back(csv::format_double(v, digits));
    csv::write_row(os, row);
  }
}

void write_chain_spectrum_csv(std::ostream& os, const ChainTrajectory& traj, int digits) {
  csv::write_row(os, {"t", "index", "lambda"});
  for (const ChainState& st : traj) {
    const std::vector<double> ev = chain_spectrum(st).eigenvalues;
    for (std::size_t i = 0; i < ev.size(); ++i)
      csv::write_row(os, {csv::format_double(st.t, digits), std::to_string(i),
                          csv::format_double(ev[i], digits)});
  }
}

}  // namespace isoflow
