#pragma once

#include <cstdint>
#include <vector>

#include "auction/assign.hpp"
#include "auction/model.hpp"

namespace auction::vcg {

/// Per-buyer subset bids indexed by bitmask; subsets a buyer never named stay at zero.
struct SubsetBids {
   std::size_t goods = 0;
   std::vector<SubsetValues> bid;

   SubsetBids() = default;
   SubsetBids(std::size_t buyers, std::size_t goods_count)
       : goods(goods_count), bid(buyers, make_subset_values(goods_count))
   {
   }

   [[nodiscard]] std::size_t buyers() const { return bid.size(); }
   [[nodiscard]] double of(Buyer i, std::uint32_t mask) const { return mask == 0 ? 0.0 : bid[i][mask]; }

   [[nodiscard]] PartitionProblem as_partition() const { return PartitionProblem{goods, bid}; }
};

inline std::uint32_t mask_of(const Allocation& a, Buyer i)
{
   std::uint32_t mask = 0;
   for(Good k = 0; k < a.goods(); ++k) {
      if(a.assigned[k] == i) {
         mask |= (1u << k);
      }
   }
   return mask;
}

inline double apparent_welfare(const SubsetBids& bids, const Allocation& a)
{
   double total = 0.0;
   for(Buyer j = 0; j < bids.buyers(); ++j) {
      total += bids.of(j, mask_of(a, j));
   }
   return total;
}

/// Truthful subset bids from the unit-demand model valuations at the given signals.
inline SubsetBids truthful_bids(const LinearValuationModel& model, const SignalProfile& s)
{
   const auto p = unit_demand_partition(valuation_table(model, s));
   SubsetBids bids;
   bids.goods = p.goods;
   bids.bid = p.set_value;
   return bids;
}

/// Runs the mechanism. Utilities are measured against the bids themselves;
/// call settle() with true valuations for real utilities.
inline AuctionOutcome run_vcg(const SubsetBids& bids, const TieRule& tie = {},
                              double eps = kDefaultEpsilon)
{
   const std::size_t n = bids.buyers();
   if(n == 0) {
      throw ShapeError("no buyers");
   }
   const auto chosen = best_partition(bids.as_partition(), tie, std::nullopt, eps);

   AuctionOutcome out;
   out.allocation = chosen.allocation;
   out.payment.assign(n, 0.0);
   out.utility.assign(n, 0.0);
   out.welfare = chosen.value;
   out.diagnostics.optima = chosen.optima;
   out.diagnostics.selected_optimum = chosen.selected;
   out.diagnostics.residual.resize(n);

   const double w_all = apparent_welfare(bids, chosen.allocation);
   for(Buyer i = 0; i < n; ++i) {
      // residual tie choice does not move W(S'_{-i}), so the lexicographic pick is enough
      const auto residual = best_partition(bids.as_partition(), TieRule{}, i, eps);
      const double own = bids.of(i, mask_of(chosen.allocation, i));
      out.payment[i] = residual.value - w_all + own;
      out.utility[i] = own - out.payment[i];
      out.diagnostics.residual[i] = residual.allocation;
   }
   return out;
}

/// Sum over other buyers of what they lose from buyer i's presence.
inline double externality_payment(const SubsetBids& bids, const Allocation& chosen,
                                  const Allocation& residual, Buyer i)
{
   double total = 0.0;
   for(Buyer j = 0; j < bids.buyers(); ++j) {
      if(j != i) {
         total += bids.of(j, mask_of(residual, j)) - bids.of(j, mask_of(chosen, j));
      }
   }
   return total;
}

/// Replaces bid-based utilities with utilities under the true subset valuations.
inline void settle(AuctionOutcome& out, const SubsetBids& valuations)
{
   out.welfare = apparent_welfare(valuations, out.allocation);
   for(Buyer i = 0; i < valuations.buyers(); ++i) {
      out.utility[i] = valuations.of(i, mask_of(out.allocation, i)) - out.payment[i];
   }
}

struct PaymentPropertyReport {
   bool nonnegative = true;
   bool bid_independent = true;
   bool identity_holds = true;
   double worst_negative = 0.0;
   double worst_drift = 0.0;
   double worst_identity_gap = 0.0;
   std::size_t alternatives_checked = 0;

   [[nodiscard]] bool passed() const { return nonnegative && bid_independent && identity_holds; }
};

/// Checks payments are nonnegative, match the externality identity, and stay put when a
/// buyer swaps its bid map for one that leaves the selected allocation unchanged.
///
/// The alternatives raise the buyer's bid on its own set and lower every other subset, which
/// keeps the selected allocation optimal. They are compared only when the selection is
/// actually unchanged.
inline PaymentPropertyReport vcg_payment_properties(const SubsetBids& bids,
                                                    double eps = kDefaultEpsilon)
{
   PaymentPropertyReport report;
   const auto base = run_vcg(bids, TieRule{}, eps);
   const std::size_t n = bids.buyers();
   for(Buyer i = 0; i < n; ++i) {
      const double p = base.payment[i];
      if(p < -eps) {
         report.nonnegative = false;
      }
      report.worst_negative = std::min(report.worst_negative, p);

      const double identity =
         externality_payment(bids, base.allocation, *base.diagnostics.residual[i], i);
      const double gap = std::abs(identity - p);
      report.worst_identity_gap = std::max(report.worst_identity_gap, gap);
      if(gap > eps) {
         report.identity_holds = false;
      }

      const std::uint32_t held = mask_of(base.allocation, i);
      for(double raise : {0.5, 1.0, 10.0, 100.0}) {
         for(double lower : {0.0, 0.25, 3.0}) {
            SubsetBids alt = bids;
            for(std::uint32_t mask = 1; mask < alt.bid[i].size(); ++mask) {
               if(mask == held) {
                  alt.bid[i][mask] += raise;
               } else {
                  alt.bid[i][mask] -= lower;
               }
            }
            const auto rerun = run_vcg(alt, TieRule{}, eps);
            if(rerun.allocation != base.allocation) {
               continue;
            }
            ++report.alternatives_checked;
            const double drift = std::abs(rerun.payment[i] - p);
            report.worst_drift = std::max(report.worst_drift, drift);
            if(drift > eps) {
               report.bid_independent = false;
            }
         }
      }
   }
   return report;
}

}  // namespace auction::vcg
