#include <gtest/gtest.h>

#include <random>

#include "auction/assign.hpp"
#include "auction/linalg.hpp"
#include "support.hpp"

using namespace auction;

namespace {

Matrix random_table(std::mt19937_64& rng, std::size_t n, std::size_t m, double lo, double hi)
{
   std::uniform_real_distribution<double> u(lo, hi);
   Matrix v(n, m);
   for(std::size_t i = 0; i < n; ++i) {
      for(std::size_t k = 0; k < m; ++k) {
         v(i, k) = u(rng);
      }
   }
   return v;
}

oracle::Grid grid_of(const Matrix& v)
{
   return testing_support::to_grid(v);
}

}  // namespace

TEST(Injective, ThreeBuyerExampleValues)
{
   const Matrix v{{5.0, 4.0}, {4.5, 4.5}, {5.5, 7.5}};
   const auto r = best_injective_assignment(AssignmentProblem{v});
   EXPECT_EQ(r.allocation, testing_support::owners({0, 2}));
   EXPECT_NEAR(r.value, 12.5, 1e-12);
   EXPECT_EQ(r.optima.size(), 1u);
}

TEST(Injective, SingleGoodArgmax)
{
   const auto r = best_injective_assignment(AssignmentProblem{Matrix{{10.0}, {7.0}}});
   EXPECT_EQ(r.allocation.assigned[0], Buyer{0});
   EXPECT_NEAR(r.value, 10.0, 1e-12);
}

TEST(Injective, IdenticalRowsAllOptimalLexFirst)
{
   const Matrix v{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}};
   const auto r = best_injective_assignment(AssignmentProblem{v});
   EXPECT_EQ(r.optima.size(), 6u);  // 3!/(3-2)!
   EXPECT_EQ(r.allocation, testing_support::owners({0, 1}));
   for(std::size_t k = 1; k < r.optima.size(); ++k) {
      EXPECT_LT(r.optima[k - 1].assigned, r.optima[k].assigned);
   }
}

TEST(Injective, TieRulesSelectAmongOptima)
{
   const Matrix v{{1.0, 1.0}, {1.0, 1.0}};
   const auto forced = best_injective_assignment(AssignmentProblem{v}, TieRule::forced(1));
   EXPECT_EQ(forced.allocation, testing_support::owners({1, 0}));
   const auto a = best_injective_assignment(AssignmentProblem{v}, TieRule::seeded_uniform(9));
   const auto b = best_injective_assignment(AssignmentProblem{v}, TieRule::seeded_uniform(9));
   EXPECT_EQ(a.allocation, b.allocation);
}

TEST(Injective, ExclusionAndErrors)
{
   const Matrix v{{9.0, 9.0}, {1.0, 2.0}, {3.0, 1.0}};
   const auto r = best_injective_assignment(AssignmentProblem{v}, {}, Buyer{0});
   EXPECT_EQ(r.allocation, testing_support::owners({2, 1}));
   EXPECT_THROW(best_injective_assignment(AssignmentProblem{Matrix{{1.0, 2.0}}}), ShapeError);
   EXPECT_THROW(best_injective_assignment(AssignmentProblem{Matrix(9, 1, 0.0)}), SizeGuardError);
}

TEST(Injective, MatchesBruteForceUpToSix)
{
   std::mt19937_64 rng(5);
   for(std::size_t n = 1; n <= 6; ++n) {
      for(std::size_t m = 1; m <= n; ++m) {
         for(int t = 0; t < 10; ++t) {
            const Matrix v = random_table(rng, n, m, -5.0, 5.0);
            const auto r = best_injective_assignment(AssignmentProblem{v});
            const auto [best, owner] = oracle::best_map(grid_of(v));
            EXPECT_NEAR(r.value, best, 1e-9);
            bool found = false;
            for(const auto& a : r.optima) {
               found = found || a == r.allocation;
               double total = 0.0;
               for(Good k = 0; k < m; ++k) {
                  total += v(*a.assigned[k], k);
               }
               EXPECT_NEAR(total, r.value, 1e-9);
            }
            EXPECT_TRUE(found);
         }
      }
   }
}

TEST(Partition, SecondPriceAndBundle)
{
   PartitionProblem single{1, {{0.0, 10.0}, {0.0, 7.0}}};
   const auto r = best_partition(single);
   EXPECT_EQ(r.allocation.assigned[0], Buyer{0});
   EXPECT_NEAR(r.value, 10.0, 1e-12);

   // buyer 0 wants only the pair (worth 5); buyer 1 values good 0 alone at 3
   PartitionProblem bundle{2, {{0.0, 0.0, 0.0, 5.0}, {0.0, 3.0, 0.0, 0.0}}};
   const auto b = best_partition(bundle);
   EXPECT_EQ(b.allocation, testing_support::owners({0, 0}));
   EXPECT_NEAR(b.value, 5.0, 1e-12);
}

TEST(Partition, UnassignedWhenEveryoneIsNegative)
{
   PartitionProblem p{1, {{0.0, -1.0}, {0.0, -2.0}}};
   const auto r = best_partition(p);
   EXPECT_FALSE(r.allocation.assigned[0].has_value());
   EXPECT_EQ(r.value, 0.0);
}

TEST(Partition, MatchesBruteForce)
{
   std::mt19937_64 rng(21);
   std::uniform_real_distribution<double> u(-2.0, 10.0);
   for(int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + t % 3;
      const std::size_t m = 1 + t % 4;
      PartitionProblem p{m, {}};
      for(std::size_t i = 0; i < n; ++i) {
         auto table = make_subset_values(m);
         for(std::size_t mask = 1; mask < table.size(); ++mask) {
            table[mask] = u(rng);
         }
         p.set_value.push_back(table);
      }
      EXPECT_NEAR(best_partition(p).value, oracle::best_partition_value(p.set_value, m), 1e-9);
   }
}

TEST(Partition, SizeGuards)
{
   PartitionProblem wide{11, {make_subset_values(11)}};
   EXPECT_THROW(best_partition(wide), SizeGuardError);
   PartitionProblem ragged{2, {SubsetValues(3, 0.0)}};
   EXPECT_THROW(best_partition(ragged), ShapeError);
}

TEST(UnitDemand, ReductionHoldsOnNonnegativeInstances)
{
   std::mt19937_64 rng(8);
   std::uniform_real_distribution<double> slope(0.1, 3.0), ratio(1.1, 5.0), sig(0.0, 5.0);
   for(int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + t % 4;
      const std::size_t m = 1 + (t / 4) % n;
      LinearValuationModel model{n, m, {}, std::vector<double>(n, 0.0), {}, std::vector<double>(n, 0.0)};
      for(std::size_t i = 0; i < n; ++i) {
         model.f_slope.push_back(slope(rng));
         model.c.push_back(ratio(rng));
      }
      SignalProfile s(n, m);
      for(std::size_t i = 0; i < n; ++i) {
         for(std::size_t k = 0; k < m; ++k) {
            s(i, k) = sig(rng);
         }
      }
      EXPECT_TRUE(unit_demand_reduction_check(model, s));
   }
}

TEST(UnitDemand, SingleBuyerSingleGood)
{
   LinearValuationModel model{1, 1, {1.0}, {0.0}, {2.0}, {0.0}};
   EXPECT_TRUE(unit_demand_reduction_check(model, SignalProfile{{3.0}}));
}

TEST(Linalg, PartialAndCompletePivotingAgree)
{
   std::mt19937_64 rng(4);
   std::uniform_real_distribution<double> u(-1.0, 1.0);
   for(int t = 0; t < 50; ++t) {
      const std::size_t n = 1 + t % 6;
      Matrix a(n, n);
      std::vector<double> b(n);
      for(std::size_t r = 0; r < n; ++r) {
         b[r] = u(rng);
         for(std::size_t c = 0; c < n; ++c) {
            a(r, c) = u(rng) + (r == c ? 3.0 : 0.0);
         }
      }
      const auto x = linalg::solve(a, b, linalg::Pivoting::partial);
      const auto y = linalg::solve(a, b, linalg::Pivoting::complete);
      EXPECT_LT(linalg::max_abs_residual(a, x, b), 1e-12);
      for(std::size_t k = 0; k < n; ++k) {
         EXPECT_NEAR(x[k], y[k], 1e-12);
      }
   }
}

TEST(Linalg, SingularSystemDetected)
{
   const Matrix a{{1.0, 2.0}, {2.0, 4.0}};
   EXPECT_THROW(linalg::solve(a, {1.0, 2.0}), SingularSystemError);
   EXPECT_THROW(linalg::solve(a, {1.0}), ShapeError);
}
