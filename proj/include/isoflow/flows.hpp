#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "isoflow/algebra_reps.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/family_tag.hpp"

namespace isoflow {

struct FlowState {
  double t = 0.0;
  double r = 0.0;
  double s = 0.0;
};

// gamma(t) sampled on a grid, linearly interpolated, held constant outside.
struct GammaTable {
  std::vector<double> t;
  std::vector<double> gamma;
  double operator()(double time) const;
};

namespace policy {
struct Toda {};
struct SignedScaled {
  int sigma = +1;
  std::variant<double, GammaTable> gamma = 1.0;
};
}  // namespace policy

using UPolicy = std::variant<policy::Toda, policy::SignedScaled>;

void validate(const UPolicy& p);
int policy_sign(const UPolicy& p);
double u_of(const UPolicy& p, double t, double r);

struct FlowRate {
  double ds_dt = 0.0;
  double dr_dt = 0.0;
};

// ds/dt = 2 eps r u, dr/dt = -2 (a s + c) u.
FlowRate flow_rhs(const AlgebraSpec& alg, const FlowState& state, double u);

// I = eps r^2 + (a s + 2c) s.
double invariant(const AlgebraSpec& alg, const FlowState& state);

struct Sample {
  double t = 0.0;
  double r = 0.0;
  double s = 0.0;
  double u = 0.0;
  double invariant = 0.0;
};

using Trajectory = std::vector<Sample>;

class IntegrationBlowup : public NumericalError {
 public:
  IntegrationBlowup(const std::string& what, Sample last_good)
      : NumericalError(what), last_good_(last_good) {}
  const Sample& last_good() const { return last_good_; }

 private:
  Sample last_good_;
};

// Classical RK4 with n = ceil((t_end - t0)/dt) equal steps. Every
// record_every-th step is stored; the final step is always stored.
Trajectory integrate(const AlgebraSpec& alg, const FlowState& state0, const UPolicy& policy,
                     double dt, double t_end, int record_every = 1);

struct SignDiagnostic {
  bool pass = false;
  int required_sign = +1;  // sgn(u) must equal required_sign * sgn(r)
  int policy_sign = +1;
  bool initial_positive = false;
  double min_r = 0.0;
  double min_s = 0.0;  // over t > 0
  std::string message;
};

// Hypotheses of the sign lemmas: r(0) > 0, s(0) > 0 and policy sign equal to
// epsilon. With a trajectory, also requires r, s > 0 for t > 0.
SignDiagnostic check_sign_conditions(const AlgebraSpec& alg, const FlowState& state0,
                                     const UPolicy& policy);
SignDiagnostic check_sign_conditions(const AlgebraSpec& alg, const FlowState& state0,
                                     const UPolicy& policy, const Trajectory& traj);

struct ModificationReport {
  double K_empirical = 0.0;
  double max_constancy_deviation = 0.0;
  double closed_form_max_error = 0.0;
  std::vector<double> g;  // interior samples
};

// Closed form F(s, r) of the weight modification m(t) = A0 F(s(t), r(t)).
double modification_closed_form(FamilyTag family, double r, double s);

ModificationReport modification_report(const Trajectory& traj, FamilyTag family);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, int digits = 17);

}  // namespace isoflow
