#include <gtest/gtest.h>

#include "properties.hpp"

namespace goom {
namespace {

constexpr std::size_t kCases = 10000;

void check(const props::PropertyReport& r) {
  EXPECT_EQ(r.cases, kCases);
  EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.first_failure;
}

TEST(Properties, RoundTrip) { check(props::round_trip(kCases, 101)); }
TEST(Properties, GaddCommutativity) { check(props::gadd_commutativity(kCases, 102)); }
TEST(Properties, GaddCancellation) { check(props::gadd_cancellation(kCases, 103)); }
TEST(Properties, LmmeIdentity) { check(props::lmme_identity(kCases, 104)); }
TEST(Properties, LmmeScalingInvariance) { check(props::lmme_scaling_invariance(kCases, 105)); }
TEST(Properties, ToRealScaledBound) { check(props::to_real_scaled_bound(kCases, 106)); }

}  // namespace
}  // namespace goom
