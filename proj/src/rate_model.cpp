#include "rsmd/rate_model.hpp"

namespace rsmd {

int common_message_receiver(const ClusterChannels& ch) {
  if (ch.single_link) return 1;
  const double eff1 = ch.g1 / (ch.i_dn1 + ch.noise);
  const double eff2 = ch.g2 / (ch.i_dn2 + ch.noise);
  return eff2 < eff1 ? 2 : 1;
}

SinrTerms sinr_terms(const HopPowers& pw, const ClusterChannels& ch) {
  SinrTerms t;
  t.ic = ch.i_up + ch.noise;
  t.a1 = pw.p11 * ch.h1;
  t.b1 = pw.p12 * ch.h1 + pw.p2 * ch.h2 + t.ic;
  t.a2 = pw.p2 * ch.h2;
  t.b2 = pw.p12 * ch.h1 + t.ic;

  t.kappa = common_message_receiver(ch);
  t.g_kappa = t.kappa == 1 ? ch.g1 : ch.g2;
  const double i_dn_kappa = t.kappa == 1 ? ch.i_dn1 : ch.i_dn2;
  t.ah1 = pw.qc * t.g_kappa;
  t.bh1 = (pw.q1 + pw.q2) * t.g_kappa + i_dn_kappa + ch.noise;
  t.ah2 = pw.q1 * ch.g1;
  t.bh2 = pw.q2 * ch.g1 + ch.i_dn1 + ch.noise;
  t.ah3 = pw.q2 * ch.g2;
  t.bh3 = pw.q1 * ch.g2 + ch.i_dn2 + ch.noise;
  return t;
}

FirstHopRates first_hop_rates(const HopPowers& pw, const ClusterChannels& ch) {
  const SinrTerms t = sinr_terms(pw, ch);
  FirstHopRates r;
  r.r11 = half_log2_1p(t.a1 / t.b1);
  r.r2 = half_log2_1p(t.a2 / t.b2);
  r.r12 = half_log2_1p(pw.p12 * ch.h1 / t.ic);
  return r;
}

SecondHopRates second_hop_rates(const HopPowers& pw, const ClusterChannels& ch) {
  const SinrTerms t = sinr_terms(pw, ch);
  SecondHopRates r;
  r.kappa = t.kappa;
  r.rc = half_log2_1p(t.ah1 / t.bh1);
  r.rp1 = half_log2_1p(t.ah2 / t.bh2);
  r.rp2 = half_log2_1p(t.ah3 / t.bh3);
  return r;
}

double e2e_rate(const HopPowers& pw, const ClusterChannels& ch) {
  const double ru = first_hop_rates(pw, ch).sum();
  const double rd = second_hop_rates(pw, ch).sum();
  return ru < rd ? ru : rd;
}

double cluster_utility_term(const HopPowers& pw, const ClusterChannels& ch, double price) {
  return e2e_rate(pw, ch) - price * pw.total();
}

UplinkInterference uplink_interference(const HopPowers& pw, double cbs_gain_du1,
                                       double cbs_gain_du2, double cbs_gain_errh) {
  UplinkInterference i;
  i.du = (pw.p11 + pw.p12) * cbs_gain_du1 + pw.p2 * cbs_gain_du2;
  i.errh = (pw.qc + pw.q1 + pw.q2) * cbs_gain_errh;
  return i;
}

}  // namespace rsmd
