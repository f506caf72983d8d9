#include <gtest/gtest.h>

#include <random>

#include "auction/model.hpp"
#include "support.hpp"

using namespace auction;
using testing_support::example2;
using testing_support::three_buyer;

TEST(Valuation, ExampleTwoBuyerOneValue)
{
   const auto model = example2();
   const SignalProfile s{{1.0, 0.0}, {2.0, 0.0}};
   EXPECT_NEAR(eval_valuation(model, s, 0, 0), 2.0, 1e-12);
}

TEST(Valuation, ZeroAtOriginWithoutIntercepts)
{
   const auto model = example2();
   const SignalProfile s(2, 2, 0.0);
   for(Buyer i = 0; i < 2; ++i) {
      for(Good k = 0; k < 2; ++k) {
         EXPECT_EQ(eval_valuation(model, s, i, k), 0.0);
      }
   }
}

TEST(Valuation, ThreeBuyerOwnSignalPlusTwo)
{
   const auto model = three_buyer();
   for(double x : {-3.0, 0.0, 1.5, 7.0}) {
      const SignalProfile s{{x, 0.0}, {2.0, 2.0}, {3.0, 6.0}};
      EXPECT_NEAR(eval_valuation(model, s, 0, 0), x + 2.0, 1e-12);
   }
}

TEST(Valuation, MatchesDirectFormulaOnRandomModels)
{
   std::mt19937_64 rng(11);
   std::uniform_real_distribution<double> u(-3.0, 3.0);
   for(int t = 0; t < 50; ++t) {
      LinearValuationModel model{3, 2, {}, {}, {}, {}};
      for(int i = 0; i < 3; ++i) {
         model.f_slope.push_back(std::abs(u(rng)) + 0.1);
         model.f_intercept.push_back(u(rng));
         model.c.push_back(std::abs(u(rng)) + 1.1);
         model.d.push_back(u(rng));
      }
      SignalProfile s(3, 2);
      for(std::size_t i = 0; i < 3; ++i) {
         for(std::size_t k = 0; k < 2; ++k) {
            s(i, k) = u(rng);
         }
      }
      const auto ref = testing_support::to_oracle(model);
      const auto grid = testing_support::to_grid(s);
      for(Buyer i = 0; i < 3; ++i) {
         for(Good k = 0; k < 2; ++k) {
            EXPECT_NEAR(eval_valuation(model, s, i, k), oracle::value(ref, grid, i, k), 1e-12);
         }
      }
   }
}

TEST(Valuation, IndexOutOfRangeThrows)
{
   const auto model = example2();
   const SignalProfile s(2, 2);
   EXPECT_THROW(eval_valuation(model, s, 2, 0), std::out_of_range);
   EXPECT_THROW(eval_valuation(model, s, 0, 2), std::out_of_range);
}

TEST(SetValuation, EmptySingletonAndMax)
{
   const auto model = three_buyer();
   const SignalProfile s{{0.0, 0.0}, {2.0, 2.0}, {3.0, 6.0}};
   EXPECT_EQ(eval_set_valuation(model, s, 2, {}), 0.0);
   EXPECT_NEAR(eval_set_valuation(model, s, 0, {0}), eval_valuation(model, s, 0, 0), 1e-12);
   EXPECT_NEAR(eval_set_valuation(model, s, 2, {0, 1}), 7.0, 1e-12);
   EXPECT_NEAR(eval_valuation(model, s, 2, 0), 4.0, 1e-12);
}

TEST(Welfare, EmptyAllocationIsZero)
{
   const auto model = example2();
   const SignalProfile s{{1.0, 2.0}, {2.0, 4.0}};
   EXPECT_EQ(welfare(model, s, Allocation(2)), 0.0);
}

TEST(Welfare, ExampleTwoStraightAllocation)
{
   const auto model = example2();
   const SignalProfile s{{1.0, 2.0}, {2.0, 4.0}};
   EXPECT_NEAR(welfare(model, s, testing_support::owners({0, 1})), 20.0 / 3.0, 1e-12);
}

TEST(Welfare, ThreeBuyerExample)
{
   const auto model = three_buyer();
   const SignalProfile s{{3.0, 1.0}, {2.0, 2.0}, {3.0, 6.0}};
   EXPECT_NEAR(welfare(model, s, testing_support::owners({0, 2})), 12.5, 1e-12);
}

TEST(Welfare, UnitDemandSumOfPairs)
{
   const auto model = three_buyer();
   const SignalProfile s{{3.0, 1.0}, {2.0, 2.0}, {3.0, 6.0}};
   const auto a = testing_support::owners({2, 1});
   EXPECT_NEAR(welfare(model, s, a), eval_valuation(model, s, 2, 0) + eval_valuation(model, s, 1, 1), 1e-12);
}

TEST(Validation, ExampleModelIsValid)
{
   const auto report = validate_model(example2(), SignalProfile{{1.0, 2.0}, {2.0, 4.0}});
   EXPECT_TRUE(report.valid());
   EXPECT_TRUE(report.warnings.empty());
}

TEST(Validation, RatioOneIsAnError)
{
   auto model = example2();
   model.c[0] = 1.0;
   const auto report = validate_model(model, SignalProfile(2, 2));
   ASSERT_FALSE(report.valid());
   EXPECT_EQ(report.errors.front().kind, ModelViolation::Kind::no_single_crossing);
   EXPECT_THROW(require_valid(model), ValidationError);
}

TEST(Validation, NonPositiveSlopeIsAnError)
{
   auto model = example2();
   model.f_slope[1] = 0.0;
   model.c[0] = 0.5;
   const auto report = validate_model(model, SignalProfile(2, 2));
   EXPECT_EQ(report.errors.size(), 2u);
}

TEST(Validation, NegativeValuationIsOnlyAWarning)
{
   const auto model = example2();
   // v_1A = s_1A + s_2A / 2 = -1 with s_2A = 2
   const SignalProfile s{{-2.0, 1.0}, {2.0, 4.0}};
   ASSERT_NEAR(eval_valuation(model, s, 0, 0), -1.0, 1e-12);
   const auto report = validate_model(model, s);
   EXPECT_TRUE(report.valid());
   ASSERT_EQ(report.warnings.size(), 1u);
   EXPECT_EQ(*report.warnings.front().buyer, 0u);
   EXPECT_NO_THROW(require_valid(model, s));
}

TEST(Validation, ShapeProblemsThrowShapeError)
{
   auto model = example2();
   model.c.pop_back();
   EXPECT_THROW(require_valid(model), ShapeError);
   EXPECT_THROW(check_signal_shape(example2(), SignalProfile(3, 2)), ShapeError);
   LinearValuationModel more_goods{1, 2, {1.0}, {0.0}, {2.0}, {0.0}};
   EXPECT_THROW(more_goods.check_shape(), ShapeError);
}

TEST(ModelProperty, OwnSignalSlopeExceedsOthers)
{
   std::mt19937_64 rng(3);
   std::uniform_real_distribution<double> slope(0.1, 3.0), ratio(1.1, 5.0), sig(-5.0, 5.0);
   for(int t = 0; t < 100; ++t) {
      LinearValuationModel model{3, 1, {}, {0, 0, 0}, {}, {0, 0, 0}};
      for(int i = 0; i < 3; ++i) {
         model.f_slope.push_back(slope(rng));
         model.c.push_back(ratio(rng));
      }
      SignalProfile s(3, 1);
      for(std::size_t i = 0; i < 3; ++i) {
         s(i, 0) = sig(rng);
      }
      const double h = 0.75;
      for(Buyer i = 0; i < 3; ++i) {
         auto moved = s;
         moved(i, 0) += h;
         const double own = (eval_valuation(model, moved, i, 0) - eval_valuation(model, s, i, 0)) / h;
         EXPECT_NEAR(own, model.c[i] * model.f_slope[i], 1e-9);
         for(Buyer j = 0; j < 3; ++j) {
            if(j == i) {
               continue;
            }
            const double other = (eval_valuation(model, moved, j, 0) - eval_valuation(model, s, j, 0)) / h;
            EXPECT_NEAR(other, model.f_slope[i], 1e-9);
            EXPECT_GT(own, other);
         }
      }
   }
}

TEST(Outcome, SettleUsesTrueSignals)
{
   const auto model = example2();
   const SignalProfile truth{{1.0, 2.0}, {2.0, 4.0}};
   AuctionOutcome out;
   out.allocation = testing_support::owners({1, 0});
   out.payment = {0.5, 0.25};
   out.utility = {0.0, 0.0};
   settle_against_truth(out, model, truth);
   EXPECT_NEAR(out.utility[0], eval_valuation(model, truth, 0, 1) - 0.5, 1e-12);
   EXPECT_NEAR(out.utility[1], eval_valuation(model, truth, 1, 0) - 0.25, 1e-12);
   EXPECT_NEAR(out.welfare, welfare(model, truth, out.allocation), 1e-12);
}

TEST(Tie, RulesPickInRangeAndDeterministically)
{
   EXPECT_EQ(TieRule::lexicographic().pick(5), 0u);
   EXPECT_EQ(TieRule::forced(7).pick(5), 2u);
   const auto r = TieRule::seeded_uniform(42);
   EXPECT_EQ(r.pick(6), r.pick(6));
   EXPECT_LT(r.pick(6), 6u);
   EXPECT_THROW(static_cast<void>(r.pick(0)), std::logic_error);
}
