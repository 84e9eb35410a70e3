#pragma once

#include <array>
#include <vector>

#include "rsmd/rate_model.hpp"

namespace rsmd {

// One cluster's power-allocation problem over its assigned eRRH and RRBs.
// channels/prices are aligned with rrbs. p_max_errh is the per-cluster relay
// budget (the eRRH cap already divided by N_R).
struct ClusterAllocationProblem {
  int errh = 0;
  std::vector<int> rrbs;
  std::vector<ClusterChannels> channels;
  std::vector<double> prices;
  double p_max_du = 0.5;
  double p_max_errh = 0.1;

  int size() const { return static_cast<int>(rrbs.size()); }
};

// Auxiliary variables of the fractional-programming reformulation plus the
// hop-balance weights and power-cost prices.
struct AuxiliaryState {
  struct PerRrb {
    double z1 = 0, z2 = 0;            // first-hop ratio auxiliaries
    double x1 = 0, x2 = 0, x3 = 0;    // second-hop ratio auxiliaries
    double alpha1 = 0, alpha2 = 0;    // quadratic-transform, first hop
    double beta1 = 0, beta2 = 0, beta3 = 0;  // quadratic-transform, second hop
    double lambda = 0.5;              // hop-balance weight in (0,1)
    double lam_lo = 0.0, lam_hi = 1.0;
    int lam_streak = 0;               // consecutive same-sign balance tests
  };
  std::vector<PerRrb> rrb;
  std::array<double, 3> sigma = {0.0, 0.0, 0.0};  // strong DU, weak DU, eRRH
};

inline double omega_first(double lambda) { return (1.0 - lambda) / (2.0 * std::log(2.0)); }
inline double omega_second(double lambda) { return lambda / (2.0 * std::log(2.0)); }

// Payoff of one cluster: sum of E2E rates minus the RRB price charges minus
// the power-cost price charges.
double payoff(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
              const AuxiliaryState& aux);

// The six per-RRB closed-form power updates. Throws std::domain_error when a
// denominator vanishes (zero price and zero auxiliary gain).
std::vector<HopPowers> update_powers_closed_form(const ClusterAllocationProblem& prob,
                                                 const AuxiliaryState& aux);

// Ratio auxiliaries set to the current SINRs.
void update_aux_ratio(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                      AuxiliaryState& aux);

// Quadratic-transform auxiliaries set to their closed-form maximizers.
void update_aux_quadratic(const ClusterAllocationProblem& prob,
                          const std::vector<HopPowers>& powers, AuxiliaryState& aux);

// Full bisection of one RRB's hop-balance weight; powers and the internal
// auxiliaries are re-converged at each candidate. Updates `powers` to the
// balanced allocation and returns the final weight.
double balance_lambda(const ClusterAllocationProblem& prob, std::vector<HopPowers>& powers,
                      int rrb_pos, double bracket_tol = 1e-4);

// Projected sub-gradient step on the power-cost prices for the three C4 caps.
void update_sigma(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                  AuxiliaryState& aux, double step);

// One halving of the hop-balance bisection. A first hop running hot shifts
// weight to the second hop. A long same-sign streak with a collapsed bracket
// means the balance point drifted (the C4 prices move it while ramping), so
// the far end is re-opened.
void lambda_bisection_step(double ru, double rd, double& lo, double& hi, double& lambda,
                           int& streak);

struct BrsOptions {
  int t_max = 200;
  double payoff_tol = 1e-5;
  double sigma_step = 0.5;   // diminishing step c/t
  double cap_slack = 1.01;   // C4 tolerance for declaring convergence
};

struct BrsResult {
  std::vector<HopPowers> powers;
  AuxiliaryState aux;
  double payoff = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> payoff_trace;
};

// Best-response power allocation of one cluster: alternating closed-form
// power/auxiliary updates with an interleaved one-halving-per-iteration
// balance bisection and a diminishing-step sub-gradient on the C4 prices.
BrsResult solve_brs(const ClusterAllocationProblem& prob, const BrsOptions& opts = {});

// The quadratic-transform surrogate objective (the bi-convex reformulation of
// the best response) at the given powers and auxiliaries.
double quadratic_objective(const ClusterAllocationProblem& prob,
                           const std::vector<HopPowers>& powers, const AuxiliaryState& aux);

// The concave penalty part of the reformulated objective, a function of the
// ratio auxiliaries only.
double surrogate_penalty(const ClusterAllocationProblem& prob, const AuxiliaryState& aux);

// Hop-weighted payoff (1-lambda) R_U + lambda R_D minus all price charges;
// equals quadratic_objective + surrogate_penalty at consistent auxiliaries
// and equals the payoff once the hops are balanced.
double weighted_payoff(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                       const AuxiliaryState& aux);

// Price charges: RRB prices on total powers plus the C4 cost prices.
double power_cost(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                  const std::array<double, 3>& sigma);

// Potential function of the power-control game over a full assignment.
double potential_value(const std::vector<ClusterAllocationProblem>& problems,
                       const std::vector<std::vector<HopPowers>>& powers,
                       const std::vector<std::array<double, 3>>& sigmas);

}  // namespace rsmd
