#include "isoflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "isoflow/csv.hpp"

namespace isoflow {

double GammaTable::operator()(double time) const {
  if (t.empty()) throw ParameterError("gamma table is empty");
  if (time <= t.front()) return gamma.front();
  if (time >= t.back()) return gamma.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double w = (time - t[lo]) / (t[hi] - t[lo]);
  return (1.0 - w) * gamma[lo] + w * gamma[hi];
}

void validate(const UPolicy& p) {
  const auto* ss = std::get_if<policy::SignedScaled>(&p);
  if (!ss) return;
  if (ss->sigma != 1 && ss->sigma != -1) throw ParameterError("policy sigma must be +1 or -1");
  if (const double* g = std::get_if<double>(&ss->gamma)) {
    if (!(*g > 0.0) || !std::isfinite(*g)) throw ParameterError("policy gamma must be > 0");
    return;
  }
  const GammaTable& tab = std::get<GammaTable>(ss->gamma);
  if (tab.t.empty() || tab.t.size() != tab.gamma.size())
    throw ParameterError("gamma table needs matching, nonempty t and gamma columns");
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    if (!(tab.gamma[i] > 0.0)) throw ParameterError("gamma table values must be > 0");
    if (i > 0 && !(tab.t[i] > tab.t[i - 1]))
      throw ParameterError("gamma table times must be strictly increasing");
  }
}

int policy_sign(const UPolicy& p) {
  if (const auto* ss = std::get_if<policy::SignedScaled>(&p)) return ss->sigma;
  return +1;
}

double u_of(const UPolicy& p, double t, double r) {
  if (std::holds_alternative<policy::Toda>(p)) return r;
  const auto& ss = std::get<policy::SignedScaled>(p);
  const double g = std::holds_alternative<double>(ss.gamma) ? std::get<double>(ss.gamma)
                                                            : std::get<GammaTable>(ss.gamma)(t);
  return ss.sigma * g * r;
}

FlowRate flow_rhs(const AlgebraSpec& alg, const FlowState& state, double u) {
  FlowRate rate;
  rate.ds_dt = 2.0 * alg.epsilon * state.r * u;
  rate.dr_dt = -2.0 * (alg.a * state.s + alg.c_param) * u;
  return rate;
}

double invariant(const AlgebraSpec& alg, const FlowState& state) {
  return alg.epsilon * state.r * state.r + (alg.a * state.s + 2.0 * alg.c_param) * state.s;
}

namespace {

Sample make_sample(const AlgebraSpec& alg, const UPolicy& p, const FlowState& st) {
  return {st.t, st.r, st.s, u_of(p, st.t, st.r), invariant(alg, st)};
}

}  // namespace

Trajectory integrate(const AlgebraSpec& alg, const FlowState& state0, const UPolicy& policy,
                     double dt, double t_end, int record_every) {
  alg.validate();
  validate(policy);
  if (!(dt > 0.0)) throw ParameterError("integrate: dt must be > 0");
  if (!(t_end >= state0.t)) throw ParameterError("integrate: t_end must be >= t0");
  if (record_every < 1) throw ParameterError("integrate: record_every must be >= 1");
  if (!std::isfinite(state0.r) || !std::isfinite(state0.s))
    throw ParameterError("integrate: initial state must be finite");

  const double span = t_end - state0.t;
  // Guard against 0.5/1e-3 = 500.00000000000006 style rounding.
  const long steps = span == 0.0 ? 0 : static_cast<long>(std::ceil(span / dt - 1e-9));
  const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;

  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(steps / record_every + 2));
  FlowState st = state0;
  traj.push_back(make_sample(alg, policy, st));

  auto rate = [&](double t, double r, double s) {
    return flow_rhs(alg, FlowState{t, r, s}, u_of(policy, t, r));
  };

  for (long k = 0; k < steps; ++k) {
    const double t = state0.t + static_cast<double>(k) * h;
    const FlowRate k1 = rate(t, st.r, st.s);
    const FlowRate k2 = rate(t + 0.5 * h, st.r + 0.5 * h * k1.dr_dt, st.s + 0.5 * h * k1.ds_dt);
    const FlowRate k3 = rate(t + 0.5 * h, st.r + 0.5 * h * k2.dr_dt, st.s + 0.5 * h * k2.ds_dt);
    const FlowRate k4 = rate(t + h, st.r + h * k3.dr_dt, st.s + h * k3.ds_dt);
    FlowState next;
    next.t = state0.t + static_cast<double>(k + 1) * h;
    next.r = st.r + h / 6.0 * (k1.dr_dt + 2.0 * k2.dr_dt + 2.0 * k3.dr_dt + k4.dr_dt);
    next.s = st.s + h / 6.0 * (k1.ds_dt + 2.0 * k2.ds_dt + 2.0 * k3.ds_dt + k4.ds_dt);
    if (!std::isfinite(next.r) || !std::isfinite(next.s)) {
      throw IntegrationBlowup("integrate: non-finite state at t=" + csv::format_double(next.t),
                              make_sample(alg, policy, st));
    }
    st = next;
    if ((k + 1) % record_every == 0 || k + 1 == steps) traj.push_back(make_sample(alg, policy, st));
  }
  return traj;
}

SignDiagnostic check_sign_conditions(const AlgebraSpec& alg, const FlowState& state0,
                                     const UPolicy& policy) {
  SignDiagnostic d;
  d.required_sign = alg.epsilon;
  d.policy_sign = policy_sign(policy);
  d.initial_positive = state0.r > 0.0 && state0.s > 0.0;
  d.min_r = state0.r;
  d.min_s = state0.s;
  d.pass = d.initial_positive && d.policy_sign == d.required_sign;
  if (d.policy_sign != d.required_sign) {
    d.message = alg.name() + std::string(" needs sgn(u) = ") +
                (d.required_sign > 0 ? "sgn(r)" : "-sgn(r)") + ", policy has sigma = " +
                std::to_string(d.policy_sign);
  } else if (!d.initial_positive) {
    d.message = "initial state must have r(0) > 0 and s(0) > 0";
  }
  return d;
}

SignDiagnostic check_sign_conditions(const AlgebraSpec& alg, const FlowState& state0,
                                     const UPolicy& policy, const Trajectory& traj) {
  SignDiagnostic d = check_sign_conditions(alg, state0, policy);
  bool seen = false;
  for (const Sample& smp : traj) {
    if (!(smp.t > state0.t)) continue;
    if (!seen) {
      d.min_r = smp.r;
      d.min_s = smp.s;
      seen = true;
    }
    d.min_r = std::min(d.min_r, smp.r);
    d.min_s = std::min(d.min_s, smp.s);
  }
  if (seen && !(d.min_r > 0.0 && d.min_s > 0.0)) {
    d.pass = false;
    if (d.message.empty()) d.message = "r or s left the positive quadrant along the trajectory";
  }
  return d;
}

namespace {

double log_closed_form(FamilyTag family, double r, double s) {
  switch (family) {
    case FamilyTag::Krawtchouk: {
      const double C = std::hypot(s, r);
      return std::log((C + s) / (C - s));
    }
    case FamilyTag::Meixner:
      if (!(s / r >= 1.0)) throw CaseMismatchError("Meixner modification needs s/r >= 1");
      return -2.0 * std::acosh(s / r);
    case FamilyTag::Laguerre:
      return -1.0 / r;
    case FamilyTag::MeixnerPollaczek:
      if (!(std::abs(s / r) <= 1.0))
        throw CaseMismatchError("Meixner-Pollaczek modification needs |s/r| <= 1");
      return 2.0 * std::acos(s / r);
    case FamilyTag::Charlier:
      return 2.0 * std::log(std::abs(r));
    case FamilyTag::Hermite:
      return s / r;
    case FamilyTag::BesselE2:
    case FamilyTag::MeixnerFunction:
      break;
  }
  throw ParameterError("no weight-modification closed form for " + family_name(family));
}

}  // namespace

double modification_closed_form(FamilyTag family, double r, double s) {
  return std::exp(log_closed_form(family, r, s));
}

ModificationReport modification_report(const Trajectory& traj, FamilyTag family) {
  if (traj.size() < 3) throw ParameterError("modification_report: need at least 3 samples");
  for (const Sample& smp : traj) {
    if (smp.r == 0.0 || smp.u == 0.0 || !std::isfinite(smp.u / smp.r))
      throw DegenerateRatioError("modification_report: r or u vanishes at t=" +
                                 csv::format_double(smp.t));
  }
  std::vector<double> logm(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) logm[i] = log_closed_form(family, traj[i].r, traj[i].s);

  ModificationReport rep;
  rep.g.reserve(traj.size() - 2);
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double dlog = (logm[i + 1] - logm[i - 1]) / (traj[i + 1].t - traj[i - 1].t);
    rep.g.push_back(traj[i].r * dlog / traj[i].u);
  }
  double sum = 0.0;
  for (double g : rep.g) sum += g;
  rep.K_empirical = sum / static_cast<double>(rep.g.size());
  for (double g : rep.g)
    rep.max_constancy_deviation = std::max(rep.max_constancy_deviation, std::abs(g - rep.K_empirical));

  double integral = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    integral += 0.5 * (traj[i].t - traj[i - 1].t) *
                (traj[i].u / traj[i].r + traj[i - 1].u / traj[i - 1].r);
    const double rel = std::expm1(logm[i] - logm[0] - rep.K_empirical * integral);
    rep.closed_form_max_error = std::max(rep.closed_form_max_error, std::abs(rel));
  }
  return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int digits) {
  csv::write_row(os, {"t", "r", "s", "u", "I"});
  for (const Sample& smp : traj) {
    csv::write_row(os, {csv::format_double(smp.t, digits), csv::format_double(smp.r, digits),
                        csv::format_double(smp.s, digits), csv::format_double(smp.u, digits),
                        csv::format_double(smp.invariant, digits)});
  }
}

}  // namespace isoflow
