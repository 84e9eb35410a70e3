#pragma once

#include <cmath>

namespace rsmd {

// Channels seen by one device-cluster on one (eRRH, RRB). h1 >= h2 by the
// labeling convention: the link whose CH DU has the better first-hop gain is
// link 1. A single-link cluster (odd M leftover) sets single_link and zeros
// the second link's entries.
struct ClusterChannels {
  double h1 = 0, h2 = 0;       // first-hop squared gains
  double g1 = 0, g2 = 0;       // second-hop squared gains
  double i_up = 0;             // CUE -> eRRH interference power
  double i_dn1 = 0, i_dn2 = 0; // CUE -> CR DU interference powers
  double noise = 0;            // sigma^2
  bool single_link = false;
};

// Transmit powers of the six streams of one cluster on one RRB, watts.
struct HopPowers {
  double p11 = 0, p12 = 0;  // streams of the strong CH DU
  double p2 = 0;            // stream of the weak CH DU
  double qc = 0;            // common message at the eRRH
  double q1 = 0, q2 = 0;    // private messages at the eRRH

  double du_strong() const { return p11 + p12; }
  double du_weak() const { return p2; }
  double errh_total() const { return qc + q1 + q2; }
  double total() const { return p11 + p12 + p2 + qc + q1 + q2; }
};

// Numerators/denominators of every SINR ratio of the two hops, plus the
// common-message receiver index kappa. Shared between the rate expressions
// and the fractional-programming updates so they can never disagree.
struct SinrTerms {
  double a1 = 0, b1 = 0;  // strong CH DU, first decoded stream
  double a2 = 0, b2 = 0;  // weak CH DU stream
  double ic = 0;          // i_up + noise (denominator of the last SIC stage)
  double ah1 = 0, bh1 = 0;  // common message at CR DU kappa
  double ah2 = 0, bh2 = 0;  // private message of link 1
  double ah3 = 0, bh3 = 0;  // private message of link 2
  int kappa = 1;
  double g_kappa = 0;
};

int common_message_receiver(const ClusterChannels& ch);  // kappa, ties -> 1
SinrTerms sinr_terms(const HopPowers& pw, const ClusterChannels& ch);

struct FirstHopRates {
  double r11 = 0, r2 = 0, r12 = 0;
  double sum() const { return r11 + r2 + r12; }
};

struct SecondHopRates {
  double rc = 0, rp1 = 0, rp2 = 0;
  int kappa = 1;
  double sum() const { return rc + rp1 + rp2; }
};

FirstHopRates first_hop_rates(const HopPowers& pw, const ClusterChannels& ch);
SecondHopRates second_hop_rates(const HopPowers& pw, const ClusterChannels& ch);

// min of the two hop sum-rates, bits/s/Hz.
double e2e_rate(const HopPowers& pw, const ClusterChannels& ch);

// E2E rate minus the RRB price charge on the total stream power.
double cluster_utility_term(const HopPowers& pw, const ClusterChannels& ch, double price);

// Uplink interference at the CBS: .du from the two CH DUs (first half-slot),
// .errh from the relay (second half-slot).
struct UplinkInterference {
  double du = 0;
  double errh = 0;
};
UplinkInterference uplink_interference(const HopPowers& pw, double cbs_gain_du1,
                                       double cbs_gain_du2, double cbs_gain_errh);

inline double half_log2_1p(double x) { return 0.5 * std::log2(1.0 + x); }

}  // namespace rsmd
