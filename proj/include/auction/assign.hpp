#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "auction/core.hpp"
#include "auction/model.hpp"

namespace auction {

inline constexpr std::size_t kMaxInjectiveBuyers = 8;
inline constexpr std::size_t kMaxPartitionGoods = 10;
inline constexpr std::uint64_t kMaxPartitionCandidates = std::uint64_t{1} << 24;

/// Score of giving good K to buyer i, [buyer][good]. Each buyer takes at most one good.
struct AssignmentProblem {
   Matrix value;
};

/// Bitmask-indexed value of every subset of goods, one table per buyer.
/// Entry 0 (the empty set) is ignored and always reads as zero.
using SubsetValues = std::vector<double>;

struct PartitionProblem {
   std::size_t goods = 0;
   std::vector<SubsetValues> set_value;

   [[nodiscard]] double value(Buyer i, std::uint32_t mask) const
   {
      return mask == 0 ? 0.0 : set_value[i][mask];
   }
};

inline SubsetValues make_subset_values(std::size_t goods)
{
   return SubsetValues(std::size_t{1} << goods, 0.0);
}

struct AssignmentResult {
   Allocation allocation;
   double value = 0.0;
   /// Every assignment attaining the optimum within epsilon, lexicographically ordered
   /// by the owner vector (an unassigned good sorts after every buyer).
   std::vector<Allocation> optima;
   std::size_t selected = 0;
};

namespace detail {

inline AssignmentResult pick_optimum(std::vector<std::pair<Allocation, double>>&& candidates,
                                     const TieRule& tie, double eps)
{
   AssignmentResult result;
   double best = -std::numeric_limits<double>::infinity();
   for(const auto& [alloc, value] : candidates) {
      best = std::max(best, value);
   }
   for(auto& [alloc, value] : candidates) {
      if(value >= best - eps) {
         result.optima.push_back(std::move(alloc));
      }
   }
   result.value = best;
   result.selected = tie.pick(result.optima.size());
   result.allocation = result.optima[result.selected];
   return result;
}

}  // namespace detail

/// Exhaustive welfare-maximizing injective assignment of every good.
///
/// `excluded`, when set, removes one buyer from consideration.
inline AssignmentResult best_injective_assignment(const AssignmentProblem& problem,
                                                  const TieRule& tie = {},
                                                  std::optional<Buyer> excluded = std::nullopt,
                                                  double eps = kDefaultEpsilon)
{
   const std::size_t n = problem.value.rows();
   const std::size_t m = problem.value.cols();
   const std::size_t eligible = n - (excluded && *excluded < n ? 1 : 0);
   if(eligible < m) {
      throw ShapeError("injective assignment needs at least as many buyers as goods");
   }
   if(n > kMaxInjectiveBuyers) {
      throw SizeGuardError("injective assignment limited to " +
                           std::to_string(kMaxInjectiveBuyers) + " buyers");
   }
   if(!problem.value.all_finite()) {
      throw ShapeError("assignment values must be finite");
   }

   std::vector<std::pair<Allocation, double>> candidates;
   std::vector<std::optional<Buyer>> current(m);
   std::vector<bool> used(n, false);
   if(excluded && *excluded < n) {
      used[*excluded] = true;
   }

   // Depth-first over goods in order, buyers ascending: emits owner vectors in lex order.
   auto recurse = [&](auto&& self, Good k, double partial) -> void {
      if(k == m) {
         Allocation a(m);
         a.assigned = current;
         candidates.emplace_back(std::move(a), partial);
         return;
      }
      for(Buyer b = 0; b < n; ++b) {
         if(used[b]) {
            continue;
         }
         used[b] = true;
         current[k] = b;
         self(self, k + 1, partial + problem.value(b, k));
         used[b] = false;
      }
   };
   recurse(recurse, 0, 0.0);
   return detail::pick_optimum(std::move(candidates), tie, eps);
}

/// Exhaustive welfare-maximizing partition of the goods; a good may stay unassigned.
inline AssignmentResult best_partition(const PartitionProblem& problem, const TieRule& tie = {},
                                       std::optional<Buyer> excluded = std::nullopt,
                                       double eps = kDefaultEpsilon)
{
   const std::size_t n = problem.set_value.size();
   const std::size_t m = problem.goods;
   if(m > kMaxPartitionGoods) {
      throw SizeGuardError("partition enumeration limited to " +
                           std::to_string(kMaxPartitionGoods) + " goods");
   }
   std::uint64_t count = 1;
   for(std::size_t k = 0; k < m; ++k) {
      count *= (n + 1);
      if(count > kMaxPartitionCandidates) {
         throw SizeGuardError("partition enumeration too large");
      }
   }
   for(const auto& table : problem.set_value) {
      if(table.size() != (std::size_t{1} << m)) {
         throw ShapeError("subset table must have 2^m entries");
      }
      for(double x : table) {
         if(!std::isfinite(x)) {
            throw ShapeError("subset values must be finite");
         }
      }
   }

   std::vector<std::pair<Allocation, double>> candidates;
   candidates.reserve(static_cast<std::size_t>(count));
   // owner code n means "kept by the seller"
   std::vector<std::size_t> owner(m, 0);
   std::vector<std::uint32_t> mask(n, 0);
   for(std::uint64_t code = 0; code < count; ++code) {
      std::fill(mask.begin(), mask.end(), 0u);
      bool allowed = true;
      for(Good k = 0; k < m; ++k) {
         if(owner[k] < n) {
            if(excluded && owner[k] == *excluded) {
               allowed = false;
               break;
            }
            mask[owner[k]] |= (1u << k);
         }
      }
      if(allowed) {
         double total = 0.0;
         for(Buyer i = 0; i < n; ++i) {
            total += problem.value(i, mask[i]);
         }
         Allocation a(m);
         for(Good k = 0; k < m; ++k) {
            if(owner[k] < n) {
               a.assigned[k] = owner[k];
            }
         }
         candidates.emplace_back(std::move(a), total);
      }
      // odometer increment, last good fastest, so codes visit owner vectors in lex order
      for(std::size_t k = m; k-- > 0;) {
         if(++owner[k] <= n) {
            break;
         }
         owner[k] = 0;
      }
   }
   return detail::pick_optimum(std::move(candidates), tie, eps);
}

/// Set values of a unit-demand model: best single good of each subset.
inline PartitionProblem unit_demand_partition(const Matrix& valuations)
{
   PartitionProblem p;
   p.goods = valuations.cols();
   p.set_value.resize(valuations.rows());
   for(Buyer i = 0; i < valuations.rows(); ++i) {
      auto table = make_subset_values(p.goods);
      for(std::uint32_t mask = 1; mask < table.size(); ++mask) {
         double best = -std::numeric_limits<double>::infinity();
         for(Good k = 0; k < p.goods; ++k) {
            if(mask & (1u << k)) {
               best = std::max(best, valuations(i, k));
            }
         }
         table[mask] = best;
      }
      p.set_value[i] = std::move(table);
   }
   return p;
}

/// True when the best partition under max-of-goods set values is no better than the best
/// one-good-per-buyer assignment.
inline bool unit_demand_reduction_check(const LinearValuationModel& model, const SignalProfile& s,
                                        double eps = kDefaultEpsilon)
{
   model.check_shape();
   check_signal_shape(model, s);
   const Matrix table = valuation_table(model, s);
   const auto partition = best_partition(unit_demand_partition(table));
   const auto injective = best_injective_assignment(AssignmentProblem{table});
   return approx_equal(partition.value, injective.value, eps);
}

}  // namespace auction
