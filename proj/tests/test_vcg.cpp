#include <gtest/gtest.h>

#include <random>

#include "auction/vcg.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace auction;

namespace {

vcg::SubsetBids single_good(double first, double second)
{
   vcg::SubsetBids b(2, 1);
   b.bid[0][1] = first;
   b.bid[1][1] = second;
   return b;
}

vcg::SubsetBids random_bids(std::mt19937_64& rng, std::size_t n, std::size_t m)
{
   std::uniform_real_distribution<double> u(0.0, 10.0);
   vcg::SubsetBids b(n, m);
   for(auto& table : b.bid) {
      for(std::size_t mask = 1; mask < table.size(); ++mask) {
         table[mask] = u(rng);
      }
   }
   return b;
}

}  // namespace

TEST(Vcg, SecondPriceSingleGood)
{
   const auto out = vcg::run_vcg(single_good(10.0, 7.0));
   EXPECT_EQ(out.allocation.assigned[0], Buyer{0});
   EXPECT_NEAR(out.payment[0], 7.0, 1e-12);
   EXPECT_NEAR(out.payment[1], 0.0, 1e-12);
   EXPECT_NEAR(out.utility[0], 3.0, 1e-12);
}

TEST(Vcg, SingleBuyerPaysNothing)
{
   vcg::SubsetBids b(1, 2);
   b.bid[0] = {0.0, 3.0, 4.0, 6.0};
   const auto out = vcg::run_vcg(b);
   EXPECT_EQ(out.allocation, testing_support::owners({0, 0}));
   EXPECT_NEAR(out.payment[0], 0.0, 1e-12);
}

TEST(Vcg, AdditiveTwoByTwo)
{
   vcg::SubsetBids b(2, 2);
   b.bid[0] = {0.0, 5.0, 1.0, 6.0};
   b.bid[1] = {0.0, 2.0, 4.0, 6.0};
   const auto out = vcg::run_vcg(b);
   EXPECT_EQ(out.allocation, testing_support::owners({0, 1}));
   EXPECT_NEAR(out.payment[0], 2.0, 1e-12);
   EXPECT_NEAR(out.payment[1], 1.0, 1e-12);
}

TEST(Vcg, PaymentsMatchBruteForceResiduals)
{
   std::mt19937_64 rng(17);
   for(int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + t % 3;
      const std::size_t m = 1 + t % 2;
      const auto b = random_bids(rng, n, m);
      const auto out = vcg::run_vcg(b);
      const double w = vcg::apparent_welfare(b, out.allocation);
      EXPECT_NEAR(w, oracle::best_partition_value(b.bid, m), 1e-9);
      for(Buyer i = 0; i < n; ++i) {
         const double without = oracle::best_partition_value(b.bid, m, i);
         const double own = b.of(i, vcg::mask_of(out.allocation, i));
         EXPECT_NEAR(out.payment[i], without - w + own, 1e-9);
         EXPECT_NEAR(out.payment[i], vcg::externality_payment(b, out.allocation, *out.diagnostics.residual[i], i),
                     1e-9);
      }
   }
}

TEST(Vcg, RaisingWinnerBidKeepsPayment)
{
   auto b = single_good(10.0, 7.0);
   b.bid[0][1] = 100.0;
   EXPECT_NEAR(vcg::run_vcg(b).payment[0], 7.0, 1e-12);
}

TEST(VcgProperties, RandomInstancesPass)
{
   std::mt19937_64 rng(2);
   for(int t = 0; t < 200; ++t) {
      const auto rep = vcg::vcg_payment_properties(random_bids(rng, 1 + t % 3, 1 + t % 2));
      EXPECT_TRUE(rep.passed());
      EXPECT_GE(rep.worst_negative, -1e-9);
   }
}

TEST(VcgProperties, SymmetricTieGivesEqualPayments)
{
   const auto b = single_good(5.0, 5.0);
   const auto first = vcg::run_vcg(b, TieRule::forced(0));
   const auto second = vcg::run_vcg(b, TieRule::forced(1));
   ASSERT_EQ(first.diagnostics.optima.size(), 2u);
   EXPECT_NE(first.allocation, second.allocation);
   EXPECT_NEAR(first.payment[0], second.payment[1], 1e-12);
   EXPECT_NEAR(first.payment[0], 5.0, 1e-12);
}

TEST(Vcg, SettleUsesTrueSetValues)
{
   const auto bids = single_good(10.0, 7.0);
   auto out = vcg::run_vcg(bids);
   vcg::settle(out, single_good(8.0, 7.0));
   EXPECT_NEAR(out.utility[0], 1.0, 1e-12);
   EXPECT_NEAR(out.welfare, 8.0, 1e-12);
}

TEST(Vcg, TruthfulBidsFromModelAreUnitDemandMaxima)
{
   const auto model = testing_support::example2();
   const SignalProfile s{{1.0, 2.0}, {2.0, 4.0}};
   const auto b = vcg::truthful_bids(model, s);
   EXPECT_NEAR(b.of(0, 0b01), eval_valuation(model, s, 0, 0), 1e-12);
   EXPECT_NEAR(b.of(0, 0b11), std::max(eval_valuation(model, s, 0, 0), eval_valuation(model, s, 0, 1)), 1e-12);
   EXPECT_EQ(b.of(1, 0), 0.0);
}
