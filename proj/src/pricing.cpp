#include "rsmd/pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace rsmd {

PriceState make_price_state(int n, double mu0, double mu_hi) {
  PriceState s;
  s.mu.assign(n, mu0);
  s.lo.assign(n, mu0);
  s.hi.assign(n, mu_hi);
  return s;
}

BisectResult bisect_prices(PriceState& state, const InterferenceProbe& probe, double i_th,
                           const BisectOptions& opts) {
  const int n = static_cast<int>(state.mu.size());
  if (i_th <= 0) throw std::invalid_argument("bisect_prices: threshold must be positive");

  const std::vector<double> floor = state.lo;
  const double hi0 = state.hi.empty() ? 0.0 : state.hi[0];
  BisectResult res;
  std::vector<double> prev_mu = state.mu;
  std::vector<double> prev_i;

  while (res.sweeps < opts.max_sweeps) {
    res.i_up = probe(state.mu);
    ++res.sweeps;
    if (static_cast<int>(res.i_up.size()) != n)
      throw std::runtime_error("bisect_prices: probe returned wrong size");

    if (!prev_i.empty()) {
      for (int k = 0; k < n; ++k)
        if (state.mu[k] > prev_mu[k] && res.i_up[k] > prev_i[k] * 1.05) ++res.non_monotone_events;
    }
    prev_i = res.i_up;
    prev_mu = state.mu;

    bool all_met = true;
    for (int k = 0; k < n; ++k) {
      const double i = res.i_up[k];
      const bool non_binding = state.mu[k] == floor[k] && i <= i_th;
      const bool in_band = std::abs(i - i_th) <= opts.rel_tol * i_th;
      const bool exhausted = state.hi[k] - state.lo[k] <= opts.bracket_tol * hi0;
      if (non_binding || in_band || (exhausted && i <= i_th * (1.0 + opts.rel_tol))) continue;
      all_met = false;
      if (i > i_th)
        state.lo[k] = state.mu[k];
      else
        state.hi[k] = state.mu[k];
      state.mu[k] = 0.5 * (state.lo[k] + state.hi[k]);
    }
    if (all_met) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace rsmd
