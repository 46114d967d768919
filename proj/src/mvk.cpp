#include "isoflow/mvk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "isoflow/csv.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/ortho_families.hpp"
#include "isoflow/spectral.hpp"

namespace isoflow {

namespace {

void fill(std::size_t pos, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    fill(pos + 1, remaining - v, cur, out);
  }
}

std::uint64_t pack(const MultiIndex& idx, int N) {
  std::uint64_t key = 0;
  for (int v : idx) key = key * static_cast<std::uint64_t>(N + 1) + static_cast<std::uint64_t>(v);
  return key;
}

}  // namespace

std::vector<MultiIndex> multi_indices(std::size_t d, int N) {
  if (N < 0) throw ParameterError("multi_indices: N must be >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(d + 1, 0);
  fill(0, N, cur, out);
  return out;
}

double multinomial(const MultiIndex& rho) {
  int N = 0;
  double lg = 0.0;
  for (int v : rho) {
    N += v;
    lg -= std::lgamma(v + 1.0);
  }
  return std::round(std::exp(lg + std::lgamma(N + 1.0)));
}

std::string format_multi_index(const MultiIndex& rho) {
  std::string out;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(rho[i]);
  }
  return out;
}

std::size_t MVKTable::position(const MultiIndex& idx) const {
  if (!contains(idx)) throw ParameterError("MVK table: multi-index " + format_multi_index(idx) + " not in table");
  return positions.at(pack(idx, N));
}

bool MVKTable::contains(const MultiIndex& idx) const {
  if (idx.size() != d + 1) return false;
  int total = 0;
  for (int v : idx) {
    if (v < 0) return false;
    total += v;
  }
  return total == N && positions.count(pack(idx, N)) > 0;
}

double MVKTable::P(const MultiIndex& sigma, const MultiIndex& rho) const {
  return P(position(sigma), position(rho));
}

MVKTable mvk_table(const ChainState& state, int N) {
  state.validate();
  if (N < 1) throw ParameterError("mvk_table: N must be >= 1");
  const std::size_t d = state.d();
  const ChristoffelData cd = christoffel_weights(state);

  MVKTable T;
  T.d = d;
  T.N = N;
  T.eigenvalues = cd.eigenvalues;
  T.weights = cd.weights;
  T.u = cd.P.transpose();  // u(i, j) = p_j(lambda_i)
  T.indices = multi_indices(d, N);
  const std::size_t M = T.indices.size();
  for (std::size_t k = 0; k < M; ++k) T.positions.emplace(pack(T.indices[k], N), k);

  T.W.resize(M);
  T.level.resize(M);
  for (std::size_t k = 0; k < M; ++k) {
    double logw = 0.0, lev = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      logw += 0.5 * T.indices[k][i] * std::log(T.weights[i]);
      lev += T.eigenvalues[i] * T.indices[k][i];
    }
    T.W[k] = std::exp(logw);
    T.level[k] = lev;
  }

  // Level simplicity.
  std::vector<std::size_t> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return T.level[a] < T.level[b]; });
  double scale = 1.0;
  for (double lv : T.level) scale = std::max(scale, std::abs(lv));
  T.min_level_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < M; ++k) {
    const double gap = T.level[order[k]] - T.level[order[k - 1]];
    if (gap < T.min_level_gap) {
      T.min_level_gap = gap;
      if (gap < 1e-9 * scale) {
        T.degenerate = true;
        T.degenerate_pair[0] = order[k - 1];
        T.degenerate_pair[1] = order[k];
      }
    }
  }

  // Expand prod_i (sum_j u(i,j) z_j)^{rho_i}; monomials keyed by exponent vector.
  T.entries.assign(M * M, 0.0);
  for (std::size_t col = 0; col < M; ++col) {
    const MultiIndex& rho = T.indices[col];
    std::map<MultiIndex, double> poly{{MultiIndex(d + 1, 0), 1.0}};
    for (std::size_t i = 0; i <= d; ++i) {
      for (int rep = 0; rep < rho[i]; ++rep) {
        std::map<MultiIndex, double> next;
        for (const auto& [mono, coef] : poly) {
          for (std::size_t j = 0; j <= d; ++j) {
            MultiIndex m = mono;
            ++m[j];
            next[m] += coef * T.u(i, j);
          }
        }
        poly.swap(next);
      }
    }
    for (const auto& [mono, coef] : poly) {
      const std::size_t row = T.positions.at(pack(mono, N));
      T.entries[row * M + col] = coef / multinomial(mono);
    }
  }
  return T;
}

MVKOrthogonality mvk_orthogonality_check(const MVKTable& T) {
  const std::size_t M = T.count();
  std::vector<double> binom(M), w2(M);
  for (std::size_t k = 0; k < M; ++k) {
    binom[k] = multinomial(T.indices[k]);
    w2[k] = T.W[k] * T.W[k];
  }
  MVKOrthogonality out;
  for (std::size_t a = 0; a < M; ++a) {
    for (std::size_t b = 0; b < M; ++b) {
      double primal = 0.0, dual = 0.0;
      for (std::size_t k = 0; k < M; ++k) {
        primal += binom[k] * T.P(k, a) * T.P(k, b);
        dual += binom[k] * w2[k] * T.P(a, k) * T.P(b, k);
      }
      const double delta = a == b ? 1.0 : 0.0;
      primal *= std::sqrt(binom[a] * w2[a] * binom[b] * w2[b]);
      dual *= std::sqrt(binom[a] * binom[b]);
      out.primal = std::max(out.primal, std::abs(primal - delta));
      out.dual = std::max(out.dual, std::abs(dual - delta));
    }
  }
  return out;
}

namespace {

// P at tau + shift; zero when the shifted index has a negative component.
double P_shifted(const MVKTable& T, const MultiIndex& tau, std::size_t rho, long minus, long plus) {
  MultiIndex m = tau;
  if (minus >= 0) --m[static_cast<std::size_t>(minus)];
  if (plus >= 0) ++m[static_cast<std::size_t>(plus)];
  for (int v : m)
    if (v < 0) return 0.0;
  return T.P(T.position(m), rho);
}

double s_of(const ChainState& st, long i) {
  return (i >= 1 && i <= static_cast<long>(st.d())) ? st.s[static_cast<std::size_t>(i - 1)] : 0.0;
}
double r_of(const ChainState& st, long i) {
  return (i >= 1 && i <= static_cast<long>(st.d())) ? st.r[static_cast<std::size_t>(i - 1)] : 0.0;
}

}  // namespace

double mvk_recurrence_check(const MVKTable& T, const ChainState& state) {
  const std::size_t M = T.count();
  const long d = static_cast<long>(T.d);
  double pmax = 1.0;
  for (double v : T.entries) pmax = std::max(pmax, std::abs(v));
  double worst = 0.0;
  for (std::size_t ti = 0; ti < M; ++ti) {
    const MultiIndex& tau = T.indices[ti];
    auto tau_at = [&](long i) { return (i >= 0 && i <= d) ? tau[static_cast<std::size_t>(i)] : 0; };
    double diag = 0.0;
    for (long i = 1; i <= d + 1; ++i) diag += s_of(state, i) * (tau_at(i - 1) - tau_at(i));
    for (std::size_t ri = 0; ri < M; ++ri) {
      double rhs = diag * T.P(ti, ri);
      for (long i = 1; i <= d; ++i) {
        const double ri_coef = r_of(state, i);
        if (tau_at(i - 1) > 0) rhs += ri_coef * tau_at(i - 1) * P_shifted(T, tau, ri, i - 1, i);
        if (tau_at(i) > 0) rhs += ri_coef * tau_at(i) * P_shifted(T, tau, ri, i, i - 1);
      }
      worst = std::max(worst, std::abs(T.level[ri] * T.P(ti, ri) - rhs));
    }
  }
  return worst / pmax;
}

double mvk_unit_check(const MVKTable& T) {
  if (T.N != 1) throw ParameterError("mvk_unit_check: table must have N = 1");
  double worst = 0.0;
  for (std::size_t i = 0; i <= T.d; ++i) {
    for (std::size_t j = 0; j <= T.d; ++j) {
      MultiIndex fi(T.d + 1, 0), fj(T.d + 1, 0);
      fi[i] = 1;
      fj[j] = 1;
      worst = std::max(worst, std::abs(T.P(fi, fj) - T.u(j, i)));
    }
  }
  return worst;
}

namespace {

struct DerivResiduals {
  double eigvec = 0.0;
  double theorem = 0.0;
  double alt_const = 0.0;
  double constant_gap = 0.0;
};

DerivResiduals mvk_derivative_residuals(const ChainState& st, const UPolicy& policy, int N, double h) {
  const MVKTable T = mvk_table(st, N);
  if (T.degenerate) {
    throw DegenerateSpectrumError("C_N[x] spectrum is not simple: levels of " +
                                  format_multi_index(T.indices[T.degenerate_pair[0]]) + " and " +
                                  format_multi_index(T.indices[T.degenerate_pair[1]]) + " coincide");
  }
  const MVKTable Tp = mvk_table(chain_rk4_step(st, policy, h), N);
  const MVKTable Tm = mvk_table(chain_rk4_step(st, policy, -h), N);
  const std::size_t M = T.count();
  const long d = static_cast<long>(T.d);
  const double g = chain_g(policy, st.t);
  auto u_at = [&](long r) { return g * r_of(st, r); };
  const std::size_t top = 0;  // (N, 0, ..., 0)

  DerivResiduals out;
  for (std::size_t ri = 0; ri < M; ++ri) {
    const MultiIndex& rho = T.indices[ri];
    const double W = T.W[ri];
    const double Wdot = (Tp.W[ri] - Tm.W[ri]) / (2.0 * h);
    double sum_p1 = 0.0;
    for (long i = 0; i <= d; ++i) sum_p1 += rho[static_cast<std::size_t>(i)] * T.u(static_cast<std::size_t>(i), 1);

    // m_tau: coefficient of x^tau in M x^rho divided by binom(N, tau).
    std::vector<double> m(M), deriv(M), Pdot(M);
    for (std::size_t ti = 0; ti < M; ++ti) {
      const MultiIndex& tau = T.indices[ti];
      double acc = 0.0;
      for (long r = 1; r <= d; ++r) {
        const auto rr = static_cast<std::size_t>(r);
        if (tau[rr - 1] > 0) acc += u_at(r) * tau[rr - 1] * P_shifted(T, tau, ri, r - 1, r);
        if (tau[rr] > 0) acc -= u_at(r) * tau[rr] * P_shifted(T, tau, ri, r, r - 1);
      }
      m[ti] = W * acc;
      Pdot[ti] = (Tp.P(ti, ri) - Tm.P(ti, ri)) / (2.0 * h);
      deriv[ti] = Wdot * T.P(ti, ri) + W * Pdot[ti];
    }
    const double C_num = (m[top] - deriv[top]) / (W * T.P(top, ri));
    const double C_formula = u_at(1) * sum_p1 - Wdot / W;
    out.constant_gap = std::max(out.constant_gap, std::abs(C_num - C_formula));
    for (std::size_t ti = 0; ti < M; ++ti) {
      const double P0 = T.P(ti, ri);
      const double ev = m[ti] - deriv[ti] - C_num * W * P0;
      const double thm = deriv[ti] - ((Wdot - W * u_at(1) * sum_p1) * P0 + m[ti]);
      const double verb = deriv[ti] - ((Wdot - N * u_at(1)) * P0 + m[ti]);
      // Entries of the unit-normalized eigenvector are W sqrt(binom_tau binom_rho) P.
      const double unit = std::sqrt(multinomial(T.indices[ti]) * multinomial(rho));
      out.eigvec = std::max(out.eigvec, std::abs(ev) * unit);
      out.theorem = std::max(out.theorem, std::abs(thm) * unit);
      out.alt_const = std::max(out.alt_const, std::abs(verb) * unit);
    }
  }
  return out;
}

double order_of(double coarse, double fine) {
  if (coarse <= 0.0 || fine <= 0.0) return 0.0;
  return std::log2(coarse / fine);
}

}  // namespace

MVKDerivativeReport mvk_time_derivative_check(const ChainState& state, const UPolicy& policy, int N,
                                              double h) {
  state.validate();
  validate(policy);
  if (!(h > 0.0)) throw ParameterError("mvk_time_derivative_check: h must be > 0");
  const DerivResiduals a = mvk_derivative_residuals(state, policy, N, h);
  const DerivResiduals b = mvk_derivative_residuals(state, policy, N, 0.5 * h);
  MVKDerivativeReport rep;
  rep.eigvec = a.eigvec;
  rep.eigvec_half = b.eigvec;
  rep.eigvec_order = order_of(a.eigvec, b.eigvec);
  rep.theorem = a.theorem;
  rep.theorem_half = b.theorem;
  rep.theorem_order = order_of(a.theorem, b.theorem);
  rep.theorem_alt_const = a.alt_const;
  rep.theorem_alt_const_half = b.alt_const;
  rep.constant_gap = std::max(a.constant_gap, b.constant_gap);
  return rep;
}

ChainState krawtchouk_chain(double s, double r, std::size_t d) {
  if (d < 1) throw ParameterError("krawtchouk_chain: d must be >= 1");
  ChainState st;
  st.s.resize(d);
  st.r.resize(d);
  const double dd = static_cast<double>(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double i = static_cast<double>(k + 1);
    st.s[k] = s * i * (i - 1.0 - dd);
    st.r[k] = r * std::sqrt(i * (dd + 1.0 - i));
  }
  return st;
}

KrawtchoukReduction krawtchouk_reduction_check(double s, double r, std::size_t d, int N) {
  if (!(s * s + r * r > 0.0)) throw ParameterError("krawtchouk_reduction_check: need s^2 + r^2 > 0");
  if (!(r > 0.0)) throw ParameterError("krawtchouk_reduction_check: need r > 0");
  const ChainState st = krawtchouk_chain(s, r, d);
  KrawtchoukReduction out;
  out.C = std::hypot(s, r);
  out.p = 0.5 + s / (2.0 * out.C);
  const long dl = static_cast<long>(d);
  const FamilyParams kp = fam::Krawtchouk{out.p, dl};

  for (long x = 0; x <= dl; ++x) {
    const EigenPolys ep = eigen_polys(st, out.C * static_cast<double>(dl - 2 * x));
    for (long n = 0; n <= dl; ++n)
      out.residual_pn = std::max(out.residual_pn, std::abs(ep.p[n] - eval_hyper(kp, n, static_cast<double>(x))));
  }

  const MVKTable T = mvk_table(st, N);
  // Ascending eigenvalue i is C(d - 2x) with x = (d - lambda_i / C) / 2.
  std::vector<long> xi(d + 1);
  for (std::size_t i = 0; i <= d; ++i) xi[i] = std::lround(0.5 * (dl - T.eigenvalues[i] / out.C));

  const long dN = dl * N;
  const double q = 1.0 - out.p;
  for (std::size_t ri = 0; ri < T.count(); ++ri) {
    long X = 0;
    for (std::size_t i = 0; i <= d; ++i) X += xi[i] * T.indices[ri][i];
    for (long k = 0; k <= dN; ++k) {
      // (p/q)^{k/2} binom(dN, k) 2F1(-X, -k; -dN; 1/p)
      double term = 1.0, sum = 1.0;
      for (long j = 0; j < std::min(X, k); ++j) {
        term *= static_cast<double>(j - X) * static_cast<double>(j - k) /
                (static_cast<double>(j - dN) * static_cast<double>(j + 1)) / out.p;
        sum += term;
      }
      const double binom = std::round(std::exp(std::lgamma(dN + 1.0) - std::lgamma(k + 1.0) -
                                               std::lgamma(dN - k + 1.0)));
      const double lhs = std::pow(out.p / q, 0.5 * static_cast<double>(k)) * binom * sum;

      double rhs = 0.0;
      for (std::size_t si = 0; si < T.count(); ++si) {
        const MultiIndex& sig = T.indices[si];
        long weight_sum = 0;
        double pref = 1.0;
        for (std::size_t j = 0; j <= d; ++j) {
          weight_sum += static_cast<long>(j) * sig[j];
          const double bj = std::round(std::exp(std::lgamma(dl + 1.0) - std::lgamma(j + 1.0) -
                                                std::lgamma(dl - static_cast<double>(j) + 1.0)));
          pref *= std::pow(bj, 0.5 * sig[j]);
        }
        if (weight_sum != k) continue;
        rhs += pref * multinomial(sig) * T.P(si, ri);
      }
      out.residual_sum = std::max(out.residual_sum, std::abs(lhs - rhs));
    }
  }
  return out;
}

void write_mvk_csv(std::ostream& os, const MVKTable& T, int digits) {
  csv::write_row(os, {"sigma", "rho", "P"});
  for (std::size_t si = 0; si < T.count(); ++si)
    for (std::size_t ri = 0; ri < T.count(); ++ri)
      csv::write_row(os, {format_multi_index(T.indices[si]), format_multi_index(T.indices[ri]),
                          csv::format_double(T.P(si, ri), digits)});
}

}  // namespace isoflow
