#include <doctest.h>

#include <cmath>
#include <random>

#include "rsmd/rate_model.hpp"

using namespace rsmd;

namespace {

ClusterChannels unit_channels() {
  ClusterChannels ch;
  ch.h1 = ch.h2 = ch.g1 = ch.g2 = 1.0;
  ch.noise = 1.0;
  return ch;
}

ClusterChannels random_channels(std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  ClusterChannels ch;
  ch.h1 = ex(rng) + 0.1;
  ch.h2 = ex(rng) + 0.1;
  if (ch.h2 > ch.h1) std::swap(ch.h1, ch.h2);
  ch.g1 = ex(rng) + 0.1;
  ch.g2 = ex(rng) + 0.1;
  ch.i_up = ex(rng) * 0.3;
  ch.i_dn1 = ex(rng) * 0.3;
  ch.i_dn2 = ex(rng) * 0.3;
  ch.noise = 0.5 + ex(rng);
  return ch;
}

HopPowers random_powers(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  HopPowers pw;
  pw.p11 = u(rng);
  pw.p12 = u(rng);
  pw.p2 = u(rng);
  pw.qc = u(rng);
  pw.q1 = u(rng);
  pw.q2 = u(rng);
  return pw;
}

}  // namespace

TEST_CASE("first hop rates") {
  ClusterChannels ch = unit_channels();

  SUBCASE("zero power gives zero rate") {
    const FirstHopRates r = first_hop_rates(HopPowers{}, ch);
    CHECK(r.r11 == 0.0);
    CHECK(r.r2 == 0.0);
    CHECK(r.r12 == 0.0);
    CHECK(r.sum() == 0.0);
  }

  SUBCASE("single stream") {
    HopPowers pw;
    pw.p11 = 1.0;
    const FirstHopRates r = first_hop_rates(pw, ch);
    CHECK(r.r11 == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("all-ones SIC chain") {
    HopPowers pw;
    pw.p11 = pw.p12 = pw.p2 = 1.0;
    const FirstHopRates r = first_hop_rates(pw, ch);
    CHECK(r.r11 == doctest::Approx(0.5 * std::log2(4.0 / 3.0)).epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(0.5 * std::log2(3.0 / 2.0)).epsilon(1e-12));
    CHECK(r.r12 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("second hop rates") {
  ClusterChannels ch = unit_channels();

  SUBCASE("zero powers") {
    const SecondHopRates r = second_hop_rates(HopPowers{}, ch);
    CHECK(r.sum() == 0.0);
  }

  SUBCASE("kappa tie breaks to link 1") {
    CHECK(common_message_receiver(ch) == 1);
    ch.g2 = 2.0;
    CHECK(common_message_receiver(ch) == 1);
    ch.g2 = 0.5;
    CHECK(common_message_receiver(ch) == 2);
  }

  SUBCASE("hand-evaluated split") {
    HopPowers pw;
    pw.qc = 2.0;
    pw.q1 = pw.q2 = 1.0;
    const SecondHopRates r = second_hop_rates(pw, ch);
    CHECK(r.rc == doctest::Approx(0.5 * std::log2(1.0 + 2.0 / 3.0)).epsilon(1e-12));
    CHECK(r.rp1 == doctest::Approx(0.5 * std::log2(1.5)).epsilon(1e-12));
    CHECK(r.rp2 == doctest::Approx(0.5 * std::log2(1.5)).epsilon(1e-12));
  }
}

TEST_CASE("e2e rate and utility") {
  ClusterChannels ch = unit_channels();
  HopPowers pw;
  pw.p11 = 3.0;  // first hop sum-rate 1.0
  pw.qc = 1.0;   // second hop lower
  const double ru = first_hop_rates(pw, ch).sum();
  const double rd = second_hop_rates(pw, ch).sum();
  CHECK(e2e_rate(pw, ch) == doctest::Approx(std::min(ru, rd)));
  CHECK(e2e_rate(HopPowers{}, ch) == 0.0);

  CHECK(cluster_utility_term(pw, ch, 0.0) == doctest::Approx(e2e_rate(pw, ch)));
  CHECK(cluster_utility_term(pw, ch, 0.1) ==
        doctest::Approx(e2e_rate(pw, ch) - 0.1 * pw.total()));
  CHECK(cluster_utility_term(HopPowers{}, ch, 0.5) == 0.0);
}

TEST_CASE("uplink interference terms") {
  HopPowers pw;
  CHECK(uplink_interference(pw, 1e-9, 1e-9, 1e-9).du == 0.0);
  CHECK(uplink_interference(pw, 1e-9, 1e-9, 1e-9).errh == 0.0);

  pw.p11 = 0.3;
  pw.p12 = 0.2;
  pw.p2 = 0.5;
  pw.qc = 0.1;
  pw.q1 = 0.2;
  pw.q2 = 0.3;
  const UplinkInterference i = uplink_interference(pw, 1e-9, 1e-9, 2e-9);
  CHECK(i.du == doctest::Approx(1e-9).epsilon(1e-12));
  CHECK(i.errh == doctest::Approx(0.6 * 2e-9).epsilon(1e-12));

  HopPowers dbl = pw;
  dbl.p11 *= 2;
  dbl.p12 *= 2;
  dbl.p2 *= 2;
  dbl.qc *= 2;
  dbl.q1 *= 2;
  dbl.q2 *= 2;
  const UplinkInterference i2 = uplink_interference(dbl, 1e-9, 1e-9, 2e-9);
  CHECK(i2.du == doctest::Approx(2 * i.du));
  CHECK(i2.errh == doctest::Approx(2 * i.errh));
}

TEST_CASE("SIC telescoping identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ClusterChannels ch = random_channels(rng);
    const HopPowers pw = random_powers(rng);
    const SinrTerms t = sinr_terms(pw, ch);
    const double lhs = (1.0 + t.a1 / t.b1) * (1.0 + t.a2 / t.b2) *
                       (1.0 + pw.p12 * ch.h1 / t.ic);
    const double rhs =
        (pw.p11 * ch.h1 + pw.p12 * ch.h1 + pw.p2 * ch.h2 + t.ic) / t.ic;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
  }
}

TEST_CASE("rate monotonicity in own-stream power") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const ClusterChannels ch = random_channels(rng);
    HopPowers pw = random_powers(rng);
    const double r11 = first_hop_rates(pw, ch).r11;
    const double rc = second_hop_rates(pw, ch).rc;
    pw.p11 += 0.5;
    pw.qc += 0.5;
    CHECK(first_hop_rates(pw, ch).r11 >= r11);
    CHECK(second_hop_rates(pw, ch).rc >= rc);
  }
}

TEST_CASE("single-link cluster degenerates to two-hop single user") {
  ClusterChannels ch;
  ch.single_link = true;
  ch.h1 = 2.0;
  ch.g1 = 1.5;
  ch.noise = 1.0;
  HopPowers pw;
  pw.p11 = 0.7;
  pw.p12 = 0.3;
  pw.qc = 0.4;
  pw.q1 = 0.6;
  const double ru = first_hop_rates(pw, ch).sum();
  CHECK(ru == doctest::Approx(0.5 * std::log2(1.0 + (pw.p11 + pw.p12) * ch.h1)).epsilon(1e-10));
  const double rd = second_hop_rates(pw, ch).sum();
  CHECK(rd == doctest::Approx(0.5 * std::log2(1.0 + (pw.qc + pw.q1) * ch.g1)).epsilon(1e-10));
  CHECK(second_hop_rates(pw, ch).kappa == 1);
}
