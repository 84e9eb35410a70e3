#pragma once

#include <functional>
#include <vector>

#include "rsmd/rate_model.hpp"

namespace rsmd {

// Per-RRB price with its bisection bracket.
struct PriceState {
  std::vector<double> mu;
  std::vector<double> lo;
  std::vector<double> hi;
};

PriceState make_price_state(int n, double mu0 = 0.0, double mu_hi = 1e3);

// Re-solves the followers under candidate prices and reports the per-RRB
// uplink interference at the CBS.
using InterferenceProbe = std::function<std::vector<double>(const std::vector<double>& mu)>;

struct BisectOptions {
  double rel_tol = 0.05;        // |I - I_th| <= rel_tol * I_th counts as met
  int max_sweeps = 30;
  double bracket_tol = 1e-6;    // of the initial upper bracket
};

struct BisectResult {
  std::vector<double> i_up;
  int sweeps = 0;
  bool converged = false;       // every RRB within tolerance or non-binding
  int non_monotone_events = 0;  // interference rose with the price (diagnostic)
};

// Simultaneous per-RRB bisection: each sweep probes once, then every RRB that
// is still out of band moves its bracket and price. An RRB whose price never
// left the initial floor and whose interference is already under the
// threshold is non-binding and keeps the floor price.
BisectResult bisect_prices(PriceState& state, const InterferenceProbe& probe, double i_th,
                           const BisectOptions& opts = {});

// max of the CH DU-side and eRRH-side CBS interference of one cluster's RRB.
inline double rrb_uplink_interference(const HopPowers& pw, double cbs_du1, double cbs_du2,
                                      double cbs_errh) {
  const UplinkInterference i = uplink_interference(pw, cbs_du1, cbs_du2, cbs_errh);
  return i.du > i.errh ? i.du : i.errh;
}

}  // namespace rsmd
