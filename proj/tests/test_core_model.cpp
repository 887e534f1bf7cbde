#include <gtest/gtest.h>

#include "ratseq/core_model.hpp"
#include "support.hpp"

namespace ratseq {
namespace {

using testing::R;

TEST(DecomposeIndex, WorkedValues) {
  EXPECT_EQ(decompose_index(-3), (BlockIndex{0, 0}));
  EXPECT_EQ(decompose_index(0), (BlockIndex{0, 3}));
  EXPECT_EQ(decompose_index(7), (BlockIndex{1, 4}));
  EXPECT_EQ(decompose_index(2), (BlockIndex{0, 5}));
  EXPECT_EQ(decompose_index(3), (BlockIndex{1, 0}));
}

TEST(DecomposeIndex, RejectsIndicesBelowSeeds) {
  EXPECT_THROW(decompose_index(-4), index_out_of_range);
  EXPECT_THROW(decompose_index(-100), index_out_of_range);
}

TEST(DecomposeIndex, RoundTripsAndIsUnique) {
  for (std::int64_t m = -3; m <= 5000; ++m) {
    BlockIndex bi = decompose_index(m);
    EXPECT_GE(bi.block, 0);
    EXPECT_GE(bi.residue, 0);
    EXPECT_LE(bi.residue, 5);
    EXPECT_EQ(bi.x_index(), m);
    EXPECT_EQ(bi.u_index(), u_index_of(m));
  }
  EXPECT_EQ(x_index_of(u_index_of(17)), 17);
}

TEST(CoefficientStream, ConstantIgnoresIndex) {
  auto s = CoefficientStream::constant(R(1), R(2));
  auto [a, b] = stream_at(s, 99);
  EXPECT_EQ(a, R(1));
  EXPECT_EQ(b, R(2));
  EXPECT_FALSE(s.horizon());
}

TEST(CoefficientStream, PeriodicWraps) {
  auto s = CoefficientStream::periodic({{R(1), R(0)}, {R(2), R(1)}});
  auto [a, b] = stream_at(s, 3);
  EXPECT_EQ(a, R(2));
  EXPECT_EQ(b, R(1));
  EXPECT_EQ(s.at(1000), s.at(0));
  EXPECT_THROW(CoefficientStream::periodic({}), domain_error);
}

TEST(CoefficientStream, ListHasHorizon) {
  auto s = CoefficientStream::explicit_list({{R(1), R(1)}, {R(2), R(1)}, {R(3), R(1)}, {R(4), R(1)}});
  EXPECT_EQ(s.horizon(), 4u);
  EXPECT_EQ(s.at(3).a, R(4));
  EXPECT_THROW(s.at(7), index_out_of_range);
  EXPECT_THROW(s.at(4), index_out_of_range);
  EXPECT_THROW(s.at(-1), index_out_of_range);
  EXPECT_TRUE(s.covers(3));
  EXPECT_FALSE(s.covers(4));
}

TEST(CoefficientStream, EvaluationIsDeterministic) {
  std::mt19937_64 rng(3);
  for (int kind = 0; kind < 3; ++kind) {
    auto s = testing::random_stream(rng, kind, 40);
    CoefficientStream copy = s;
    for (std::int64_t n = 0; n < 40; ++n) {
      EXPECT_EQ(s.at(n), s.at(n));
      EXPECT_EQ(s.at(n), copy.at(n));
    }
  }
}

TEST(CoefficientStream, TruncationKeepsPrefix) {
  auto s = CoefficientStream::explicit_list({{R(1), R(1)}, {R(2), R(1)}, {R(3), R(1)}});
  auto t = s.truncated(2);
  EXPECT_EQ(t.horizon(), 2u);
  EXPECT_EQ(t.at(1), s.at(1));
  EXPECT_EQ(t.describe(), "list[(1,1);(2,1)]");
  auto c = CoefficientStream::constant(R(1, 2), R(-3));
  EXPECT_EQ(c.truncated(0).describe(), "constant(a=1/2,b=-3)");
}

TEST(InitialConditions, SeedsByUIndex) {
  InitialConditions ic{R(5), R(7), R(11), R(13)};
  EXPECT_EQ(ic.u(0), R(5));
  EXPECT_EQ(ic.u(3), R(13));
  EXPECT_THROW(ic.u(4), index_out_of_range);
  EXPECT_TRUE(ic.all_nonzero());
  EXPECT_FALSE((InitialConditions{R(5), R(0), R(11), R(13)}).all_nonzero());
}

TEST(Trajectory, IndexesFromMinusThree) {
  Trajectory t({R(1), R(2), R(3), R(4), R(5)}, std::nullopt);
  EXPECT_EQ(t.first_index(), -3);
  EXPECT_EQ(t.last_index(), 1);
  EXPECT_EQ(t.at(-3), R(1));
  EXPECT_EQ(t.at(1), R(5));
  EXPECT_EQ(t.u(4), R(5));
  EXPECT_THROW(t.at(2), index_out_of_range);
  EXPECT_THROW(Trajectory({R(1)}, std::nullopt), domain_error);
}

}  // namespace
}  // namespace ratseq
