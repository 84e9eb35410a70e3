#include "rsmd/power_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsmd {

namespace {

void check_problem(const ClusterAllocationProblem& prob) {
  if (prob.rrbs.empty()) throw std::invalid_argument("ClusterAllocationProblem: empty RRB set");
  if (prob.channels.size() != prob.rrbs.size() || prob.prices.size() != prob.rrbs.size())
    throw std::invalid_argument("ClusterAllocationProblem: misaligned channels/prices");
  for (double mu : prob.prices)
    if (mu < 0) throw std::invalid_argument("ClusterAllocationProblem: negative price");
}

double guarded_den(double d) {
  if (d <= 0.0)
    throw std::domain_error("update_powers_closed_form: zero denominator (no price, no gain)");
  return d;
}

}  // namespace

double power_cost(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                  const std::array<double, 3>& sigma) {
  double cost = 0.0;
  double s_strong = 0.0, s_weak = 0.0, s_errh = 0.0;
  for (int k = 0; k < prob.size(); ++k) {
    cost += prob.prices[k] * powers[k].total();
    s_strong += powers[k].du_strong();
    s_weak += powers[k].du_weak();
    s_errh += powers[k].errh_total();
  }
  return cost + sigma[0] * s_strong + sigma[1] * s_weak + sigma[2] * s_errh;
}

double payoff(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
              const AuxiliaryState& aux) {
  double rate = 0.0;
  for (int k = 0; k < prob.size(); ++k) rate += e2e_rate(powers[k], prob.channels[k]);
  return rate - power_cost(prob, powers, aux.sigma);
}

std::vector<HopPowers> update_powers_closed_form(const ClusterAllocationProblem& prob,
                                                 const AuxiliaryState& aux) {
  std::vector<HopPowers> out(prob.size());
  for (int k = 0; k < prob.size(); ++k) {
    const ClusterChannels& ch = prob.channels[k];
    const auto& ax = aux.rrb[k];
    const double mu = prob.prices[k];
    const double w1 = omega_first(ax.lambda);
    const double w2 = omega_second(ax.lambda);
    const double ic = ch.i_up + ch.noise;
    const double a1sq = ax.alpha1 * ax.alpha1;
    const double a2sq = ax.alpha2 * ax.alpha2;

    HopPowers& pw = out[k];

    const double den11 = guarded_den(mu + aux.sigma[0] + a1sq * ch.h1);
    pw.p11 = w1 * (1.0 + ax.z1) * a1sq * ch.h1 / (den11 * den11);

    const double den12 = guarded_den(mu + aux.sigma[0] + ch.h1 * (a1sq + a2sq));
    pw.p12 = std::max(0.0, w1 / den12 - ic / ch.h1);

    if (ch.single_link) {
      pw.p2 = 0.0;
    } else {
      const double den2 = guarded_den(mu + aux.sigma[1] + ch.h2 * (a1sq + a2sq));
      pw.p2 = w1 * (1.0 + ax.z2) * a2sq * ch.h2 / (den2 * den2);
    }

    const int kap = common_message_receiver(ch);
    const double gk = kap == 1 ? ch.g1 : ch.g2;
    const double b1sq = ax.beta1 * ax.beta1;
    const double b2sq = ax.beta2 * ax.beta2;
    const double b3sq = ax.beta3 * ax.beta3;
    const double b_shared = b1sq * gk + b2sq * ch.g1 + b3sq * ch.g2;

    const double denc = guarded_den(mu + aux.sigma[2] + b1sq * gk);
    pw.qc = w2 * (1.0 + ax.x1) * b1sq * gk / (denc * denc);

    const double denp = guarded_den(mu + aux.sigma[2] + b_shared);
    pw.q1 = w2 * (1.0 + ax.x2) * b2sq * ch.g1 / (denp * denp);
    pw.q2 = ch.single_link ? 0.0 : w2 * (1.0 + ax.x3) * b3sq * ch.g2 / (denp * denp);
  }
  return out;
}

void update_aux_ratio(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                      AuxiliaryState& aux) {
  for (int k = 0; k < prob.size(); ++k) {
    const SinrTerms t = sinr_terms(powers[k], prob.channels[k]);
    auto& ax = aux.rrb[k];
    ax.z1 = t.a1 / t.b1;
    ax.z2 = t.a2 / t.b2;
    ax.x1 = t.ah1 / t.bh1;
    ax.x2 = t.ah2 / t.bh2;
    ax.x3 = t.ah3 / t.bh3;
  }
}

void update_aux_quadratic(const ClusterAllocationProblem& prob,
                          const std::vector<HopPowers>& powers, AuxiliaryState& aux) {
  for (int k = 0; k < prob.size(); ++k) {
    const SinrTerms t = sinr_terms(powers[k], prob.channels[k]);
    auto& ax = aux.rrb[k];
    const double w1 = omega_first(ax.lambda);
    const double w2 = omega_second(ax.lambda);
    ax.alpha1 = std::sqrt(w1 * (1.0 + ax.z1) * t.a1) / (t.a1 + t.b1);
    ax.alpha2 = std::sqrt(w1 * (1.0 + ax.z2) * t.a2) / (t.a2 + t.b2);
    ax.beta1 = std::sqrt(w2 * (1.0 + ax.x1) * t.ah1) / (t.ah1 + t.bh1);
    ax.beta2 = std::sqrt(w2 * (1.0 + ax.x2) * t.ah2) / (t.ah2 + t.bh2);
    ax.beta3 = std::sqrt(w2 * (1.0 + ax.x3) * t.ah3) / (t.ah3 + t.bh3);
  }
}

double quadratic_objective(const ClusterAllocationProblem& prob,
                           const std::vector<HopPowers>& powers, const AuxiliaryState& aux) {
  double obj = 0.0;
  for (int k = 0; k < prob.size(); ++k) {
    const SinrTerms t = sinr_terms(powers[k], prob.channels[k]);
    const auto& ax = aux.rrb[k];
    const double w1 = omega_first(ax.lambda);
    const double w2 = omega_second(ax.lambda);
    auto quad = [](double v, double w, double z, double a, double b) {
      return 2.0 * v * std::sqrt(w * (1.0 + z) * a) - v * v * (a + b);
    };
    obj += quad(ax.alpha1, w1, ax.z1, t.a1, t.b1);
    obj += quad(ax.alpha2, w1, ax.z2, t.a2, t.b2);
    obj += quad(ax.beta1, w2, ax.x1, t.ah1, t.bh1);
    obj += quad(ax.beta2, w2, ax.x2, t.ah2, t.bh2);
    obj += quad(ax.beta3, w2, ax.x3, t.ah3, t.bh3);
    obj += w1 * std::log1p(powers[k].p12 * prob.channels[k].h1 / t.ic);
  }
  return obj - power_cost(prob, powers, aux.sigma);
}

double surrogate_penalty(const ClusterAllocationProblem& prob, const AuxiliaryState& aux) {
  double s = 0.0;
  for (int k = 0; k < prob.size(); ++k) {
    const auto& ax = aux.rrb[k];
    const double w1 = omega_first(ax.lambda);
    const double w2 = omega_second(ax.lambda);
    auto pen = [](double z) { return std::log1p(z) - z; };
    s += w1 * (pen(ax.z1) + pen(ax.z2));
    s += w2 * (pen(ax.x1) + pen(ax.x2) + pen(ax.x3));
  }
  return s;
}

double weighted_payoff(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                       const AuxiliaryState& aux) {
  double val = 0.0;
  for (int k = 0; k < prob.size(); ++k) {
    const double ru = first_hop_rates(powers[k], prob.channels[k]).sum();
    const double rd = second_hop_rates(powers[k], prob.channels[k]).sum();
    const double lam = aux.rrb[k].lambda;
    val += (1.0 - lam) * ru + lam * rd;
  }
  return val - power_cost(prob, powers, aux.sigma);
}

void update_sigma(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                  AuxiliaryState& aux, double step) {
  double s_strong = 0.0, s_weak = 0.0, s_errh = 0.0;
  for (const HopPowers& pw : powers) {
    s_strong += pw.du_strong();
    s_weak += pw.du_weak();
    s_errh += pw.errh_total();
  }
  aux.sigma[0] = std::max(0.0, aux.sigma[0] + step * (s_strong - prob.p_max_du));
  aux.sigma[1] = std::max(0.0, aux.sigma[1] + step * (s_weak - prob.p_max_du));
  aux.sigma[2] = std::max(0.0, aux.sigma[2] + step * (s_errh - prob.p_max_errh));
}

void lambda_bisection_step(double ru, double rd, double& lo, double& hi, double& lambda,
                           int& streak) {
  if (ru > rd) {
    lo = lambda;
    streak = streak >= 0 ? streak + 1 : 1;
  } else if (ru < rd) {
    hi = lambda;
    streak = streak <= 0 ? streak - 1 : -1;
  } else {
    streak = 0;
  }
  if (std::abs(streak) >= 5 && hi - lo < 0.05) {
    if (streak > 0)
      hi = 1.0;
    else
      lo = 0.0;
    streak = 0;
  }
  lambda = 0.5 * (lo + hi);
}

namespace {

AuxiliaryState make_initial_aux(const ClusterAllocationProblem& prob,
                                const std::vector<HopPowers>& powers) {
  AuxiliaryState aux;
  aux.rrb.resize(prob.size());
  update_aux_ratio(prob, powers, aux);
  update_aux_quadratic(prob, powers, aux);
  return aux;
}

std::vector<HopPowers> make_initial_powers(const ClusterAllocationProblem& prob) {
  const double k = static_cast<double>(prob.size());
  std::vector<HopPowers> powers(prob.size());
  for (int i = 0; i < prob.size(); ++i) {
    HopPowers& pw = powers[i];
    const bool single = prob.channels[i].single_link;
    pw.p11 = pw.p12 = prob.p_max_du / (3.0 * k);
    pw.p2 = single ? 0.0 : prob.p_max_du / (3.0 * k);
    pw.qc = pw.q1 = prob.p_max_errh / (3.0 * k);
    pw.q2 = single ? 0.0 : prob.p_max_errh / (3.0 * k);
  }
  return powers;
}

bool caps_ok(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
             double slack) {
  double s_strong = 0.0, s_weak = 0.0, s_errh = 0.0;
  for (const HopPowers& pw : powers) {
    s_strong += pw.du_strong();
    s_weak += pw.du_weak();
    s_errh += pw.errh_total();
  }
  return s_strong <= prob.p_max_du * slack && s_weak <= prob.p_max_du * slack &&
         s_errh <= prob.p_max_errh * slack;
}

}  // namespace

BrsResult solve_brs(const ClusterAllocationProblem& prob, const BrsOptions& opts) {
  check_problem(prob);
  BrsResult res;
  res.powers = make_initial_powers(prob);
  res.aux = make_initial_aux(prob, res.powers);

  double prev = payoff(prob, res.powers, res.aux);
  res.payoff_trace.push_back(prev);

  for (int t = 1; t <= opts.t_max; ++t) {
    res.iterations = t;
    res.powers = update_powers_closed_form(prob, res.aux);
    update_aux_ratio(prob, res.powers, res.aux);
    update_aux_quadratic(prob, res.powers, res.aux);
    for (int k = 0; k < prob.size(); ++k) {
      const double ru = first_hop_rates(res.powers[k], prob.channels[k]).sum();
      const double rd = second_hop_rates(res.powers[k], prob.channels[k]).sum();
      auto& ax = res.aux.rrb[k];
      lambda_bisection_step(ru, rd, ax.lam_lo, ax.lam_hi, ax.lambda, ax.lam_streak);
    }
    update_sigma(prob, res.powers, res.aux, opts.sigma_step / t);

    const double cur = payoff(prob, res.powers, res.aux);
    res.payoff_trace.push_back(cur);
    if (std::abs(cur - prev) <= opts.payoff_tol && caps_ok(prob, res.powers, opts.cap_slack)) {
      res.converged = true;
      prev = cur;
      break;
    }
    prev = cur;
  }
  res.payoff = prev;
  return res;
}

double balance_lambda(const ClusterAllocationProblem& prob, std::vector<HopPowers>& powers,
                      int rrb_pos, double bracket_tol) {
  check_problem(prob);
  if (rrb_pos < 0 || rrb_pos >= prob.size())
    throw std::invalid_argument("balance_lambda: bad RRB position");

  bool all_zero = true;
  for (const HopPowers& pw : powers)
    if (pw.total() > 0) all_zero = false;
  if (all_zero) return 0.5;

  double lo = 0.0, hi = 1.0;
  double lambda = 0.5;
  std::vector<HopPowers> best = powers;
  while (hi - lo > bracket_tol) {
    lambda = 0.5 * (lo + hi);
    std::vector<HopPowers> trial = powers;
    AuxiliaryState aux = make_initial_aux(prob, trial);
    for (auto& ax : aux.rrb) ax.lambda = lambda;
    // inner re-convergence at this fixed weight
    for (int it = 0; it < 80; ++it) {
      trial = update_powers_closed_form(prob, aux);
      update_aux_ratio(prob, trial, aux);
      update_aux_quadratic(prob, trial, aux);
    }
    const double ru = first_hop_rates(trial[rrb_pos], prob.channels[rrb_pos]).sum();
    const double rd = second_hop_rates(trial[rrb_pos], prob.channels[rrb_pos]).sum();
    best = trial;
    if (ru > rd)
      lo = lambda;
    else if (ru < rd)
      hi = lambda;
    else
      break;
  }
  powers = best;
  return lambda;
}

double potential_value(const std::vector<ClusterAllocationProblem>& problems,
                       const std::vector<std::vector<HopPowers>>& powers,
                       const std::vector<std::array<double, 3>>& sigmas) {
  double w = 0.0;
  for (std::size_t j = 0; j < problems.size(); ++j) {
    const auto& prob = problems[j];
    for (int k = 0; k < prob.size(); ++k) {
      const HopPowers& pw = powers[j][k];
      w += e2e_rate(pw, prob.channels[k]);
      w -= sigmas[j][0] * pw.du_strong() + sigmas[j][1] * pw.du_weak() +
           sigmas[j][2] * pw.errh_total();
      w -= prob.prices[k] * pw.total();
    }
  }
  return w;
}

}  // namespace rsmd
