#pragma once

#include <optional>
#include <string>
#include <vector>

#include "auction/core.hpp"

namespace auction {

/// Linear common-value model.
///
/// Each buyer i carries an affine effect function f_i(x) = slope_i * x + intercept_i
/// and an own-signal function w_i = c_i * f_i + d_i. Buyer i's value for good K is
///
///     v_iK(s_K) = w_i(s_iK) + sum_{j != i} f_j(s_jK)
///
/// and the value of a set of goods is the best single good inside it.
struct LinearValuationModel {
   std::size_t n = 0;  ///< buyers
   std::size_t m = 0;  ///< goods
   std::vector<double> f_slope;
   std::vector<double> f_intercept;
   std::vector<double> c;
   std::vector<double> d;

   [[nodiscard]] double f(Buyer i, double x) const { return f_slope[i] * x + f_intercept[i]; }
   [[nodiscard]] double w(Buyer i, double x) const { return c[i] * f(i, x) + d[i]; }

   /// Throws ShapeError when vector lengths disagree with n or the goods count is unusable.
   void check_shape() const
   {
      if(n == 0 || m == 0) {
         throw ShapeError("model needs at least one buyer and one good");
      }
      if(f_slope.size() != n || f_intercept.size() != n || c.size() != n || d.size() != n) {
         throw ShapeError("model coefficient vectors must have length n");
      }
      if(n < m) {
         throw ShapeError("model needs at least as many buyers as goods");
      }
   }
};

/// Reals indexed [buyer][good]. Holds true signals or reported ones.
using SignalProfile = Matrix;

inline void check_signal_shape(const LinearValuationModel& model, const SignalProfile& s)
{
   if(s.rows() != model.n || s.cols() != model.m) {
      throw ShapeError("signal profile must be n x m");
   }
   if(!s.all_finite()) {
      throw ShapeError("signal profile contains non-finite entries");
   }
}

inline double eval_valuation(const LinearValuationModel& model, const SignalProfile& s, Buyer buyer,
                             Good good)
{
   if(buyer >= model.n || good >= model.m) {
      throw std::out_of_range("buyer or good index out of range");
   }
   double value = model.w(buyer, s(buyer, good));
   for(Buyer j = 0; j < model.n; ++j) {
      if(j != buyer) {
         value += model.f(j, s(j, good));
      }
   }
   return value;
}

/// Full [buyer][good] table of valuations at one signal profile.
inline Matrix valuation_table(const LinearValuationModel& model, const SignalProfile& s)
{
   Matrix table(model.n, model.m);
   for(Buyer i = 0; i < model.n; ++i) {
      for(Good k = 0; k < model.m; ++k) {
         table(i, k) = eval_valuation(model, s, i, k);
      }
   }
   return table;
}

/// Unit-demand set valuation: the best good in the set, zero for the empty set.
inline double eval_set_valuation(const LinearValuationModel& model, const SignalProfile& s,
                                 Buyer buyer, const std::vector<Good>& goods)
{
   if(goods.empty()) {
      return 0.0;
   }
   double best = eval_valuation(model, s, buyer, goods.front());
   for(Good g : goods) {
      best = std::max(best, eval_valuation(model, s, buyer, g));
   }
   return best;
}

/// Assignment of goods to buyers; an empty slot leaves the good with the seller.
struct Allocation {
   std::vector<std::optional<Buyer>> assigned;

   Allocation() = default;
   explicit Allocation(std::size_t goods) : assigned(goods) {}

   [[nodiscard]] std::size_t goods() const { return assigned.size(); }

   [[nodiscard]] std::vector<Good> owner_goods(Buyer buyer) const
   {
      std::vector<Good> held;
      for(Good k = 0; k < assigned.size(); ++k) {
         if(assigned[k] == buyer) {
            held.push_back(k);
         }
      }
      return held;
   }

   /// The single good a unit-demand buyer holds, if any.
   [[nodiscard]] std::optional<Good> good_of(Buyer buyer) const
   {
      for(Good k = 0; k < assigned.size(); ++k) {
         if(assigned[k] == buyer) {
            return k;
         }
      }
      return std::nullopt;
   }

   [[nodiscard]] bool is_unit_demand(std::size_t buyers) const
   {
      std::vector<int> count(buyers, 0);
      for(const auto& owner : assigned) {
         if(owner) {
            if(*owner >= buyers || ++count[*owner] > 1) {
               return false;
            }
         }
      }
      return true;
   }

   [[nodiscard]] bool empty() const
   {
      for(const auto& owner : assigned) {
         if(owner) {
            return false;
         }
      }
      return true;
   }

   friend bool operator==(const Allocation&, const Allocation&) = default;
};

inline double welfare(const LinearValuationModel& model, const SignalProfile& s,
                      const Allocation& allocation)
{
   double total = 0.0;
   for(Buyer i = 0; i < model.n; ++i) {
      total += eval_set_valuation(model, s, i, allocation.owner_goods(i));
   }
   return total;
}

// ---------------------------------------------------------------------------
// Validation

struct ModelViolation {
   enum class Kind { not_increasing, no_single_crossing, negative_valuation, bad_shape };
   Kind kind;
   std::optional<Buyer> buyer;
   std::optional<Good> good;
   std::string message;
};

struct ModelValidationReport {
   std::vector<ModelViolation> errors;
   /// Negative valuations at the given signals. They only matter for participation.
   std::vector<ModelViolation> warnings;

   [[nodiscard]] bool valid() const { return errors.empty(); }

   [[nodiscard]] std::string summary() const
   {
      std::string text;
      for(const auto& e : errors) {
         text += "error: " + e.message + "\n";
      }
      for(const auto& w : warnings) {
         text += "warning: " + w.message + "\n";
      }
      return text;
   }
};

inline ModelValidationReport validate_model(const LinearValuationModel& model,
                                            const SignalProfile& s)
{
   ModelValidationReport report;
   try {
      model.check_shape();
      check_signal_shape(model, s);
   } catch(const ShapeError& e) {
      report.errors.push_back({ModelViolation::Kind::bad_shape, std::nullopt, std::nullopt, e.what()});
      return report;
   }
   for(Buyer i = 0; i < model.n; ++i) {
      const std::string who = "buyer " + std::to_string(i);
      if(!(model.f_slope[i] > 0.0)) {
         report.errors.push_back({ModelViolation::Kind::not_increasing, i, std::nullopt,
                                  who + ": effect slope must be positive"});
      }
      // w' = c a and f' = a, so own-signal dominance is exactly c > 1 once a > 0.
      if(!(model.c[i] > 1.0)) {
         report.errors.push_back({ModelViolation::Kind::no_single_crossing, i, std::nullopt,
                                  who + ": ratio c must exceed 1"});
      }
      if(!std::isfinite(model.f_intercept[i]) || !std::isfinite(model.d[i])) {
         report.errors.push_back({ModelViolation::Kind::bad_shape, i, std::nullopt,
                                  who + ": non-finite coefficient"});
      }
   }
   if(!report.valid()) {
      return report;
   }
   for(Buyer i = 0; i < model.n; ++i) {
      for(Good k = 0; k < model.m; ++k) {
         const double v = eval_valuation(model, s, i, k);
         if(v < 0.0) {
            report.warnings.push_back({ModelViolation::Kind::negative_valuation, i, k,
                                       "buyer " + std::to_string(i) + " values good " +
                                          std::to_string(k) + " negatively"});
         }
      }
   }
   return report;
}

inline void require_valid(const LinearValuationModel& model, const SignalProfile& s)
{
   const auto report = validate_model(model, s);
   if(!report.valid()) {
      for(const auto& e : report.errors) {
         if(e.kind == ModelViolation::Kind::bad_shape && !e.buyer) {
            throw ShapeError(report.summary());
         }
      }
      throw ValidationError(report.summary());
   }
}

/// Structural check that needs no signals: slopes positive, c > 1.
inline void require_valid(const LinearValuationModel& model)
{
   require_valid(model, SignalProfile(model.n, model.m));
}

// ---------------------------------------------------------------------------
// Outcomes

/// Mechanism-specific record attached to every outcome.
struct Diagnostics {
   /// Assignments that attained the optimum, in lexicographic order.
   std::vector<Allocation> optima;
   std::size_t selected_optimum = 0;

   /// Per-buyer payment table indexed by permutation (square auctions only).
   std::vector<std::vector<Good>> permutations;
   std::vector<std::vector<double>> payment_table;

   /// Fixed points per good, [good][buyer].
   std::vector<std::vector<double>> fixed_points;
   /// Recovered consistency constants per buyer.
   std::vector<double> c_prime;

   /// Solved hypothetical own signal (known-valuation auction) per winner.
   std::vector<std::optional<double>> solved_signal;
   /// Solved hypothetical diagonal coefficient (bid-function auction) per winner.
   std::vector<std::optional<double>> solved_diagonal;

   /// Residual optimum without buyer i, per buyer (when computed).
   std::vector<std::optional<Allocation>> residual;

   /// Bids failed the consistency gate; nothing was traded.
   bool rejected = false;
   std::vector<std::string> violations;

   bool operator==(const Diagnostics&) const = default;
};

struct AuctionOutcome {
   Allocation allocation;
   std::vector<double> payment;
   std::vector<double> utility;
   double welfare = 0.0;
   Diagnostics diagnostics;
};

/// Re-evaluates utilities and welfare of an outcome against the true signals.
inline void settle_against_truth(AuctionOutcome& outcome, const LinearValuationModel& model,
                                 const SignalProfile& truth)
{
   outcome.utility.assign(model.n, 0.0);
   for(Buyer i = 0; i < model.n; ++i) {
      outcome.utility[i] =
         eval_set_valuation(model, truth, i, outcome.allocation.owner_goods(i)) - outcome.payment[i];
   }
   outcome.welfare = welfare(model, truth, outcome.allocation);
}

}  // namespace auction
