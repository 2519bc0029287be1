#include "bsft/pauli.hpp"

#include <random>

#include "bsft/code.hpp"
#include "bsft/gf2.hpp"
#include "gtest/gtest.h"

namespace bsft {
namespace {

PauliOp random_pauli(std::mt19937_64& rng, int n) {
  PauliOp p(n);
  for (int q = 0; q < n; ++q) {
    int v = static_cast<int>(rng() & 3);
    p.set_x(q, v & 1);
    p.set_z(q, v >> 1);
  }
  return p;
}

TEST(Pauli, MultiplyIdentityAndInvolution) {
  std::mt19937_64 rng(7);
  PauliOp id = PauliOp::identity(5);
  for (int rep = 0; rep < 50; ++rep) {
    PauliOp p = random_pauli(rng, 5);
    EXPECT_EQ(multiply(id, p), p);
    EXPECT_TRUE(multiply(p, p).is_identity());
  }
}

TEST(Pauli, XTimesZIsYUpToPhase) {
  PauliOp x1 = PauliOp::single(3, 0, 'X');
  PauliOp z1 = PauliOp::single(3, 0, 'Z');
  PauliOp prod = multiply(x1, z1);
  EXPECT_TRUE(prod.x_bit(0));
  EXPECT_TRUE(prod.z_bit(0));
  EXPECT_EQ(prod, PauliOp::single(3, 0, 'Y'));
}

TEST(Pauli, MultiplySizeMismatchThrows) {
  EXPECT_THROW(multiply(PauliOp(3), PauliOp(4)), std::invalid_argument);
  EXPECT_THROW(commutes(PauliOp(3), PauliOp(4)), std::invalid_argument);
}

TEST(Pauli, CommutesBasics) {
  PauliOp x1 = PauliOp::single(2, 0, 'X');
  PauliOp z1 = PauliOp::single(2, 0, 'Z');
  EXPECT_FALSE(commutes(x1, z1));

  PauliOp x1x2 = multiply(PauliOp::single(2, 0, 'X'), PauliOp::single(2, 1, 'X'));
  PauliOp z1z2 = multiply(PauliOp::single(2, 0, 'Z'), PauliOp::single(2, 1, 'Z'));
  EXPECT_TRUE(commutes(x1x2, z1z2));

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep)
    EXPECT_TRUE(commutes(random_pauli(rng, 6), PauliOp::identity(6)));
}

TEST(Pauli, CommutesIsSymmetricAndBilinear) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    PauliOp p = random_pauli(rng, 8), q = random_pauli(rng, 8), r = random_pauli(rng, 8);
    EXPECT_EQ(commutes(p, q), commutes(q, p));
    // <p, q*r> = <p,q> + <p,r> mod 2
    int lhs = commutes(p, multiply(q, r)) ? 0 : 1;
    int rhs = ((commutes(p, q) ? 0 : 1) + (commutes(p, r) ? 0 : 1)) & 1;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Pauli, Weight) {
  EXPECT_EQ(weight(PauliOp::identity(4)), 0);
  PauliOp xz_same = multiply(PauliOp::single(4, 0, 'X'), PauliOp::single(4, 0, 'Z'));
  EXPECT_EQ(weight(xz_same), 1);
  PauliOp xz_diff = multiply(PauliOp::single(4, 0, 'X'), PauliOp::single(4, 1, 'Z'));
  EXPECT_EQ(weight(xz_diff), 2);
}

TEST(Pauli, InGroupBasics) {
  std::mt19937_64 rng(23);
  std::vector<PauliOp> gens;
  for (int i = 0; i < 5; ++i) gens.push_back(random_pauli(rng, 7));
  EXPECT_TRUE(in_group(multiply(gens[1], gens[3]), gens));
  EXPECT_TRUE(in_group(PauliOp::identity(7), gens));
}

TEST(Pauli, InGroupBaconShorMembership) {
  // For BS(3): Z_{1,1}Z_{1,2} is a gauge element; Z on the whole first
  // column (the logical Z) is not in the gauge-plus-stabilizer group.
  BaconShorCode code(3);
  PauliOp same_row_pair(9);
  same_row_pair.set_z(code.qubit_index(0, 0), true);
  same_row_pair.set_z(code.qubit_index(0, 1), true);
  EXPECT_TRUE(in_group(same_row_pair, code.gauge_gens()));

  std::vector<PauliOp> st = code.gauge_gens();
  st.insert(st.end(), code.stabilizer_gens().begin(), code.stabilizer_gens().end());
  EXPECT_FALSE(in_group(code.logical_z(), st));
}

TEST(Pauli, InGroupInvariantUnderGeneratorPermutation) {
  std::mt19937_64 rng(5);
  std::vector<PauliOp> gens;
  for (int i = 0; i < 8; ++i) gens.push_back(random_pauli(rng, 10));
  for (int rep = 0; rep < 30; ++rep) {
    PauliOp probe = random_pauli(rng, 10);
    bool base = in_group(probe, gens);
    std::vector<PauliOp> shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(in_group(probe, shuffled), base);
  }
}

TEST(Pauli, TextRendering) {
  PauliOp p(4);
  p.set_x(0, true);
  p.set_x(1, true);
  EXPECT_EQ(to_string(p), "X1 X2");
  p.set_z(1, true);
  p.set_z(3, true);
  EXPECT_EQ(to_string(p), "X1 Y2 Z4");
  EXPECT_EQ(to_string(PauliOp::identity(4)), "I");
}

TEST(Pauli, ParseRenderRoundTrip) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    PauliOp p = random_pauli(rng, 12);
    EXPECT_EQ(parse_pauli(to_string(p), 12), p);
  }
  EXPECT_THROW(parse_pauli("Q3", 5), std::invalid_argument);
  EXPECT_THROW(parse_pauli("X9", 5), std::invalid_argument);
}

}  // namespace
}  // namespace bsft
