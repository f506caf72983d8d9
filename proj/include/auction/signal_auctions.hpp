#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "auction/assign.hpp"
#include "auction/model.hpp"

// Mechanisms for a designer who knows every valuation function and asks buyers to report
// their signal vectors.
//
//  * square_auction: as many buyers as goods. Each buyer's payment is built from a table of
//    permutation scores that does not depend on the buyer's own report.
//  * surplus_auction: strictly more buyers than goods. A winner pays its value at the own
//    signal that would have made it exactly indifferent against the residual optimum.

namespace auction::signal {

/// Reported signal vectors, [buyer][good].
using SignalBid = SignalProfile;

/// Every permutation of goods among buyers together with each buyer's score for it.
struct PaymentTable {
   /// permutations[p][i] = good buyer i receives under permutation p.
   std::vector<std::vector<Good>> permutations;
   /// score[i][p]
   std::vector<std::vector<double>> score;
};

/// c_i / (c_i - 1): the weight on apparent welfare in the square auction's scores.
inline double welfare_weight(const LinearValuationModel& model, Buyer i)
{
   return model.c[i] / (model.c[i] - 1.0);
}

inline std::vector<std::vector<Good>> all_permutations(std::size_t n)
{
   std::vector<std::vector<Good>> perms;
   // enumerate owner vectors lexicographically, then store the buyer -> good view
   std::vector<Buyer> owner(n);
   std::iota(owner.begin(), owner.end(), Buyer{0});
   do {
      std::vector<Good> sigma(n);
      for(Good k = 0; k < n; ++k) {
         sigma[owner[k]] = k;
      }
      perms.push_back(std::move(sigma));
   } while(std::next_permutation(owner.begin(), owner.end()));
   return perms;
}

inline Allocation allocation_of(const std::vector<Good>& sigma)
{
   Allocation a(sigma.size());
   for(Buyer i = 0; i < sigma.size(); ++i) {
      a.assigned[sigma[i]] = i;
   }
   return a;
}

inline void check_square(const LinearValuationModel& model, const SignalBid& bids)
{
   model.check_shape();
   check_signal_shape(model, bids);
   if(model.n != model.m) {
      throw ShapeError("square auction needs as many buyers as goods");
   }
   if(model.n > kMaxInjectiveBuyers) {
      throw SizeGuardError("square auction limited to " + std::to_string(kMaxInjectiveBuyers) +
                           " buyers");
   }
}

/// Score of buyer i for each permutation at the reported signals:
///
///     P_i(sigma) = r_i W(sigma) - v_{i,sigma(i)} - r_i sum_K f_i(s_iK),  r_i = c_i/(c_i-1)
inline PaymentTable payment_table(const LinearValuationModel& model, const SignalBid& bids)
{
   check_square(model, bids);
   const std::size_t n = model.n;
   const Matrix v = valuation_table(model, bids);

   PaymentTable table;
   table.permutations = all_permutations(n);
   table.score.assign(n, std::vector<double>(table.permutations.size(), 0.0));
   for(Buyer i = 0; i < n; ++i) {
      double own_effects = 0.0;
      for(Good k = 0; k < model.m; ++k) {
         own_effects += model.f(i, bids(i, k));
      }
      const double r = welfare_weight(model, i);
      for(std::size_t p = 0; p < table.permutations.size(); ++p) {
         const auto& sigma = table.permutations[p];
         double w = 0.0;
         for(Buyer j = 0; j < n; ++j) {
            w += v(j, sigma[j]);
         }
         table.score[i][p] = r * w - v(i, sigma[i]) - r * own_effects;
      }
   }
   return table;
}

inline std::size_t permutation_index(const PaymentTable& table, const Allocation& a)
{
   for(std::size_t p = 0; p < table.permutations.size(); ++p) {
      if(allocation_of(table.permutations[p]) == a) {
         return p;
      }
   }
   throw std::logic_error("allocation is not a permutation");
}

inline AuctionOutcome run_auction1(const LinearValuationModel& model, const SignalBid& bids,
                                   const TieRule& tie = {}, double eps = kDefaultEpsilon)
{
   check_square(model, bids);
   require_valid(model);
   const std::size_t n = model.n;
   const Matrix v = valuation_table(model, bids);
   const auto chosen = best_injective_assignment(AssignmentProblem{v}, tie, std::nullopt, eps);
   const auto table = payment_table(model, bids);
   const std::size_t selected = permutation_index(table, chosen.allocation);

   AuctionOutcome out;
   out.allocation = chosen.allocation;
   out.payment.assign(n, 0.0);
   out.utility.assign(n, 0.0);
   for(Buyer i = 0; i < n; ++i) {
      const auto& row = table.score[i];
      out.payment[i] = *std::max_element(row.begin(), row.end()) - row[selected];
      out.utility[i] = v(i, *chosen.allocation.good_of(i)) - out.payment[i];
   }
   out.welfare = chosen.value;
   out.diagnostics.optima = chosen.optima;
   out.diagnostics.selected_optimum = chosen.selected;
   out.diagnostics.permutations = table.permutations;
   out.diagnostics.payment_table = table.score;
   return out;
}

/// True when random shifts of the buyer's own report leave every score of that buyer unchanged.
inline bool auction1_payment_bid_independence(const LinearValuationModel& model,
                                              const SignalBid& bids, Buyer buyer,
                                              std::uint64_t seed = 1, std::size_t trials = 16,
                                              double eps = kDefaultEpsilon)
{
   const auto base = payment_table(model, bids);
   std::mt19937_64 rng(seed);
   std::uniform_real_distribution<double> shift(-5.0, 5.0);
   for(std::size_t t = 0; t < trials; ++t) {
      SignalBid moved = bids;
      for(Good k = 0; k < model.m; ++k) {
         moved(buyer, k) += shift(rng);
      }
      const auto again = payment_table(model, moved);
      for(std::size_t p = 0; p < base.permutations.size(); ++p) {
         if(!approx_equal(base.score[buyer][p], again.score[buyer][p], eps)) {
            return false;
         }
      }
   }
   return true;
}

// ---------------------------------------------------------------------------

inline void check_surplus(const LinearValuationModel& model, const SignalBid& bids)
{
   model.check_shape();
   check_signal_shape(model, bids);
   if(model.n <= model.m) {
      throw ShapeError("surplus auction needs strictly more buyers than goods");
   }
}

/// Welfare-maximizing assignment of all goods among everyone except `excluded`.
/// The result does not depend on the excluded buyer's reports.
inline Allocation residual_allocation(const LinearValuationModel& model, const SignalBid& bids,
                                      Buyer excluded, const TieRule& tie = {},
                                      double eps = kDefaultEpsilon)
{
   model.check_shape();
   check_signal_shape(model, bids);
   if(model.n < model.m + 1) {
      throw ShapeError("residual allocation needs n - 1 >= m");
   }
   const Matrix v = valuation_table(model, bids);
   return best_injective_assignment(AssignmentProblem{v}, tie, excluded, eps).allocation;
}

/// The residual optimum set, for invariance checks.
inline std::vector<Allocation> residual_optima(const LinearValuationModel& model,
                                               const SignalBid& bids, Buyer excluded,
                                               double eps = kDefaultEpsilon)
{
   const Matrix v = valuation_table(model, bids);
   return best_injective_assignment(AssignmentProblem{v}, {}, excluded, eps).optima;
}

/// Own signal at which a winner of `good` would tie the residual optimum.
///
/// The balance g(x) = v_iK(x) - v_jK(x) + sum_{A != K}(v_{i_A,A} - v_{j_A,A}) is affine in x
/// with slope (c_i - 1) * slope_i, so the root is exact.
inline double indifference_signal(const LinearValuationModel& model, const SignalBid& bids,
                                  const Allocation& chosen, const Allocation& residual, Buyer i,
                                  Good good)
{
   const double slope = (model.c[i] - 1.0) * model.f_slope[i];
   if(!(std::abs(slope) > kPivotFloor)) {
      throw SingularSystemError("indifference equation is degenerate");
   }
   const Buyer j_good = *residual.assigned[good];
   double balance = eval_valuation(model, bids, i, good) - eval_valuation(model, bids, j_good, good);
   for(Good a = 0; a < model.m; ++a) {
      if(a != good) {
         balance += eval_valuation(model, bids, *chosen.assigned[a], a) -
                    eval_valuation(model, bids, *residual.assigned[a], a);
      }
   }
   return bids(i, good) - balance / slope;
}

inline AuctionOutcome run_auction2(const LinearValuationModel& model, const SignalBid& bids,
                                   const TieRule& tie = {}, double eps = kDefaultEpsilon)
{
   check_surplus(model, bids);
   require_valid(model);
   const std::size_t n = model.n;
   const Matrix v = valuation_table(model, bids);
   const auto chosen = best_injective_assignment(AssignmentProblem{v}, tie, std::nullopt, eps);

   AuctionOutcome out;
   out.allocation = chosen.allocation;
   out.payment.assign(n, 0.0);
   out.utility.assign(n, 0.0);
   out.welfare = chosen.value;
   out.diagnostics.optima = chosen.optima;
   out.diagnostics.selected_optimum = chosen.selected;
   out.diagnostics.solved_signal.assign(n, std::nullopt);
   out.diagnostics.residual.assign(n, std::nullopt);

   for(Buyer i = 0; i < n; ++i) {
      const auto good = chosen.allocation.good_of(i);
      if(!good) {
         continue;
      }
      const Allocation residual = residual_allocation(model, bids, i, {}, eps);
      const double s_star = indifference_signal(model, bids, chosen.allocation, residual, i, *good);
      SignalBid at_star = bids;
      at_star(i, *good) = s_star;
      out.payment[i] = eval_valuation(model, at_star, i, *good);
      out.utility[i] = v(i, *good) - out.payment[i];
      out.diagnostics.solved_signal[i] = s_star;
      out.diagnostics.residual[i] = residual;
   }
   return out;
}

}  // namespace auction::signal
