#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "auction/assign.hpp"
#include "auction/linalg.hpp"
#include "auction/model.hpp"
#include "auction/signal_auctions.hpp"

// Mechanisms for a designer who does not know the valuation functions. Buyers submit, for
// every good, an affine bid function of the other buyers' values:
//
//     b_iA(v_{-i}) = x_ii + sum_{j != i} x_ij * v_j
//
// The off-diagonal coefficients must be consistent with a common ratio c'_j per buyer; the
// diagonal is free and encodes the buyer's own signal. Goods are then priced from the fixed
// point of the bid system.

namespace auction::bidfn {

/// Coefficients per good: coeff[A](i, j), with the diagonal holding the free term.
struct BidProfile {
   std::vector<Matrix> coeff;

   [[nodiscard]] std::size_t goods() const { return coeff.size(); }
   [[nodiscard]] std::size_t buyers() const { return coeff.empty() ? 0 : coeff.front().rows(); }
};

inline void check_profile_shape(const BidProfile& bids)
{
   if(bids.coeff.empty()) {
      throw ShapeError("bid profile has no goods");
   }
   const std::size_t n = bids.buyers();
   for(const auto& x : bids.coeff) {
      if(x.rows() != n || x.cols() != n) {
         throw ShapeError("every good needs an n x n coefficient matrix");
      }
      if(!x.all_finite()) {
         throw ShapeError("bid coefficients must be finite");
      }
   }
}

/// Matrix with c_j on the diagonal and ones elsewhere, over the buyers other than `skip`.
inline Matrix ratio_matrix(const std::vector<double>& c, std::optional<Buyer> skip)
{
   std::vector<double> kept;
   for(Buyer j = 0; j < c.size(); ++j) {
      if(!skip || j != *skip) {
         kept.push_back(c[j]);
      }
   }
   Matrix a(kept.size(), kept.size(), 1.0);
   for(std::size_t j = 0; j < kept.size(); ++j) {
      a(j, j) = kept[j];
   }
   return a;
}

/// Off-diagonal weights of a truthful bid for `buyer`, indexed over the other buyers in order.
inline std::vector<double> truthful_weights(const std::vector<double>& c, Buyer buyer,
                                            linalg::Pivoting pivoting = linalg::Pivoting::partial)
{
   const Matrix a = ratio_matrix(c, buyer);
   return linalg::solve(a, std::vector<double>(a.rows(), 1.0), pivoting);
}

/// Full coefficient row (length n, diagonal included) of buyer i's truthful bid for a good
/// on which it observes `signal`.
inline std::vector<double> truthful_bid_coefficients(const LinearValuationModel& model,
                                                     Buyer buyer, double signal)
{
   model.check_shape();
   require_valid(model);
   const std::size_t n = model.n;
   if(buyer >= n) {
      throw std::out_of_range("buyer index out of range");
   }
   std::vector<double> row(n, 0.0);
   if(n == 1) {
      row[0] = model.w(0, signal);
      return row;
   }
   const auto weights = truthful_weights(model.c, buyer);
   double weight_sum = 0.0;
   double weighted_d = 0.0;
   for(Buyer j = 0, t = 0; j < n; ++j) {
      if(j == buyer) {
         continue;
      }
      row[j] = weights[t++];
      weight_sum += row[j];
      weighted_d += row[j] * model.d[j];
   }
   row[buyer] = model.f(buyer, signal) * (model.c[buyer] - weight_sum) + model.d[buyer] - weighted_d;
   return row;
}

/// Truthful bids of every buyer for every good at the given signals.
inline BidProfile truthful_bids(const LinearValuationModel& model, const SignalProfile& s)
{
   model.check_shape();
   check_signal_shape(model, s);
   BidProfile bids;
   for(Good a = 0; a < model.m; ++a) {
      Matrix x(model.n, model.n);
      for(Buyer i = 0; i < model.n; ++i) {
         x.set_row(i, truthful_bid_coefficients(model, i, s(i, a)));
      }
      bids.coeff.push_back(std::move(x));
   }
   return bids;
}

/// Evaluates buyer i's bid for good A at a full value vector (entry i is ignored).
inline double eval_bid(const BidProfile& bids, Good a, Buyer i, const std::vector<double>& values)
{
   const Matrix& x = bids.coeff[a];
   double out = x(i, i);
   for(Buyer j = 0; j < x.cols(); ++j) {
      if(j != i) {
         out += x(i, j) * values[j];
      }
   }
   return out;
}

// ---------------------------------------------------------------------------
// Consistency gate

struct ConsistencyReport {
   std::vector<double> c_prime;
   bool valid = false;
   std::vector<std::string> violations;
};

inline double off_diagonal_sum(const Matrix& x, Buyer i)
{
   double total = 0.0;
   for(Buyer j = 0; j < x.cols(); ++j) {
      if(j != i) {
         total += x(i, j);
      }
   }
   return total;
}

/// Ratio buyer i's row implies for buyer j: (1 - sum_{t != i,j} x_it) / x_ij.
inline double implied_ratio(const Matrix& x, Buyer i, Buyer j)
{
   return (1.0 - (off_diagonal_sum(x, i) - x(i, j))) / x(i, j);
}

inline ConsistencyReport validate_consistency(const BidProfile& bids,
                                              double abs_eps = kDefaultEpsilon,
                                              double rel_eps = kDefaultEpsilon)
{
   check_profile_shape(bids);
   const std::size_t n = bids.buyers();
   ConsistencyReport report;
   if(n == 1) {
      report.valid = true;
      return report;
   }

   auto where = [](Buyer i, Buyer j, Good a) {
      return "(" + std::to_string(i) + "," + std::to_string(j) + ",good " + std::to_string(a) + ")";
   };

   for(Good a = 0; a < bids.goods(); ++a) {
      const Matrix& x = bids.coeff[a];
      for(Buyer i = 0; i < n; ++i) {
         for(Buyer j = 0; j < n; ++j) {
            if(i != j && std::abs(x(i, j)) <= kPivotFloor) {
               report.violations.push_back("zero off-diagonal coefficient at " + where(i, j, a));
            }
         }
      }
   }
   if(!report.violations.empty()) {
      return report;
   }

   report.c_prime.assign(n, 0.0);
   for(Buyer j = 0; j < n; ++j) {
      const Buyer first = j == 0 ? 1 : 0;
      const double candidate = implied_ratio(bids.coeff[0], first, j);
      report.c_prime[j] = candidate;
      for(Good a = 0; a < bids.goods(); ++a) {
         for(Buyer i = 0; i < n; ++i) {
            if(i == j) {
               continue;
            }
            const double ratio = implied_ratio(bids.coeff[a], i, j);
            if(!approx_equal_mixed(ratio, candidate, abs_eps, rel_eps)) {
               report.violations.push_back("inconsistent ratio for buyer " + std::to_string(j) +
                                           " at " + where(i, j, a));
            }
         }
      }
      if(!(candidate > 1.0 + abs_eps)) {
         report.violations.push_back("ratio for buyer " + std::to_string(j) + " must exceed 1");
      }
   }
   report.valid = report.violations.empty();
   return report;
}

// ---------------------------------------------------------------------------
// Fixed points

struct FixedPoint {
   std::vector<double> v;
   /// max_i |b_i(v_{-i}) - v_i|
   double residual = 0.0;
};

/// Solves v_i = x_ii + sum_{j != i} x_ij v_j for one good.
inline FixedPoint solve_fixed_point(const Matrix& x,
                                    linalg::Pivoting pivoting = linalg::Pivoting::partial)
{
   const std::size_t n = x.rows();
   if(x.cols() != n || n == 0) {
      throw ShapeError("fixed point needs a square coefficient matrix");
   }
   Matrix a = x;
   std::vector<double> rhs(n);
   for(Buyer i = 0; i < n; ++i) {
      a(i, i) = -1.0;
      rhs[i] = -x(i, i);
   }
   FixedPoint fp;
   try {
      fp.v = linalg::solve(a, rhs, pivoting);
   } catch(const SingularSystemError&) {
      throw SingularSystemError("bid system has no unique fixed point (inconsistent bids)");
   }
   for(Buyer i = 0; i < n; ++i) {
      double b = x(i, i);
      for(Buyer j = 0; j < n; ++j) {
         if(j != i) {
            b += x(i, j) * fp.v[j];
         }
      }
      fp.residual = std::max(fp.residual, std::abs(b - fp.v[i]));
   }
   return fp;
}

/// Effect value f_i(s) encoded by a diagonal coefficient:
///     (x_ii - d_i + sum_{j != i} x_ij d_j) / (c'_i - sum_{j != i} x_ij)
inline double recover_f_value(double diagonal, const std::vector<double>& row, Buyer i,
                              double c_prime, const std::vector<double>& d)
{
   double weight_sum = 0.0;
   double weighted_d = 0.0;
   for(Buyer j = 0; j < row.size(); ++j) {
      if(j != i) {
         weight_sum += row[j];
         weighted_d += row[j] * d[j];
      }
   }
   const double denom = c_prime - weight_sum;
   if(std::abs(denom) <= kPivotFloor) {
      throw SingularSystemError("diagonal does not determine an effect value");
   }
   return (diagonal - d[i] + weighted_d) / denom;
}

/// Value table [buyer][good] from the per-good fixed points.
inline Matrix fixed_point_values(const BidProfile& bids, std::vector<std::vector<double>>* points)
{
   const std::size_t n = bids.buyers();
   Matrix v(n, bids.goods());
   for(Good a = 0; a < bids.goods(); ++a) {
      const auto fp = solve_fixed_point(bids.coeff[a]);
      for(Buyer i = 0; i < n; ++i) {
         v(i, a) = fp.v[i];
      }
      if(points) {
         points->push_back(fp.v);
      }
   }
   return v;
}

// ---------------------------------------------------------------------------
// Auctions

namespace detail {

inline AuctionOutcome rejected_outcome(std::size_t n, std::size_t m, const ConsistencyReport& rep)
{
   AuctionOutcome out;
   out.allocation = Allocation(m);
   out.payment.assign(n, 0.0);
   out.utility.assign(n, 0.0);
   out.diagnostics.rejected = true;
   out.diagnostics.violations = rep.violations;
   out.diagnostics.c_prime = rep.c_prime;
   return out;
}

inline AuctionOutcome square_base(const BidProfile& bids, const ConsistencyReport& rep,
                                  const TieRule& tie, double eps, Matrix& values)
{
   const std::size_t n = bids.buyers();
   AuctionOutcome out;
   values = fixed_point_values(bids, &out.diagnostics.fixed_points);
   const auto chosen = best_injective_assignment(AssignmentProblem{values}, tie, std::nullopt, eps);
   out.allocation = chosen.allocation;
   out.payment.assign(n, 0.0);
   out.utility.assign(n, 0.0);
   out.welfare = chosen.value;
   out.diagnostics.optima = chosen.optima;
   out.diagnostics.selected_optimum = chosen.selected;
   out.diagnostics.c_prime = rep.c_prime;
   out.diagnostics.permutations = signal::all_permutations(n);
   return out;
}

inline void finish_square_payments(AuctionOutcome& out, const Matrix& values)
{
   const std::size_t n = values.rows();
   std::size_t selected = 0;
   for(std::size_t p = 0; p < out.diagnostics.permutations.size(); ++p) {
      if(signal::allocation_of(out.diagnostics.permutations[p]) == out.allocation) {
         selected = p;
      }
   }
   for(Buyer i = 0; i < n; ++i) {
      const auto& row = out.diagnostics.payment_table[i];
      out.payment[i] = *std::max_element(row.begin(), row.end()) - row[selected];
      out.utility[i] = values(i, *out.allocation.good_of(i)) - out.payment[i];
   }
}

}  // namespace detail

/// Two buyers, two goods. Buyer i's score for a permutation is the other buyer's diagonal for
/// the good it receives, weighted by c'_i / (c'_i - 1).
inline AuctionOutcome run_auction3_two_buyer(const BidProfile& bids, const TieRule& tie = {},
                                             double eps = kDefaultEpsilon)
{
   check_profile_shape(bids);
   if(bids.buyers() != 2 || bids.goods() != 2) {
      throw ShapeError("two-buyer square auction needs 2 buyers and 2 goods");
   }
   const auto rep = validate_consistency(bids);
   if(!rep.valid) {
      return detail::rejected_outcome(2, 2, rep);
   }
   Matrix values;
   auto out = detail::square_base(bids, rep, tie, eps, values);
   const auto& perms = out.diagnostics.permutations;
   out.diagnostics.payment_table.assign(2, std::vector<double>(perms.size(), 0.0));
   for(Buyer i = 0; i < 2; ++i) {
      const Buyer other = 1 - i;
      const double r = rep.c_prime[i] / (rep.c_prime[i] - 1.0);
      for(std::size_t p = 0; p < perms.size(); ++p) {
         const Good their_good = perms[p][other];
         out.diagnostics.payment_table[i][p] = r * bids.coeff[their_good](other, other);
      }
   }
   detail::finish_square_payments(out, values);
   return out;
}

/// As many buyers as goods. Scores mirror the known-valuation square auction with the fixed
/// points standing in for valuations and the diagonals standing in for the own effects.
inline AuctionOutcome run_auction3(const BidProfile& bids, const TieRule& tie = {},
                                   double eps = kDefaultEpsilon)
{
   check_profile_shape(bids);
   const std::size_t n = bids.buyers();
   if(n != bids.goods()) {
      throw ShapeError("square bid-function auction needs as many buyers as goods");
   }
   if(n > kMaxInjectiveBuyers) {
      throw SizeGuardError("square auction limited to " + std::to_string(kMaxInjectiveBuyers) +
                           " buyers");
   }
   if(n == 2) {
      return run_auction3_two_buyer(bids, tie, eps);
   }
   const auto rep = validate_consistency(bids);
   if(!rep.valid) {
      return detail::rejected_outcome(n, n, rep);
   }
   Matrix values;
   auto out = detail::square_base(bids, rep, tie, eps, values);
   if(n == 1) {
      out.diagnostics.payment_table.assign(1, std::vector<double>{0.0});
      detail::finish_square_payments(out, values);
      return out;
   }
   const auto& perms = out.diagnostics.permutations;
   out.diagnostics.payment_table.assign(n, std::vector<double>(perms.size(), 0.0));
   for(Buyer i = 0; i < n; ++i) {
      const double c = rep.c_prime[i];
      const double r = c / (c - 1.0);
      double diagonal_total = 0.0;
      for(Good a = 0; a < n; ++a) {
         diagonal_total += bids.coeff[a](i, i);
      }
      // validated off-diagonals are identical across goods, so any good's row will do
      const double own_term = r * diagonal_total / (c - off_diagonal_sum(bids.coeff[0], i));
      for(std::size_t p = 0; p < perms.size(); ++p) {
         double w = 0.0;
         for(Buyer j = 0; j < n; ++j) {
            w += values(j, perms[p][j]);
         }
         out.diagnostics.payment_table[i][p] = r * w - values(i, perms[p][i]) - own_term;
      }
   }
   detail::finish_square_payments(out, values);
   return out;
}

/// Strictly more buyers than goods. A winner of good A pays its fixed-point value at the
/// diagonal that would leave the welfare with it exactly equal to the residual optimum.
inline AuctionOutcome run_auction4(const BidProfile& bids, const TieRule& tie = {},
                                   double eps = kDefaultEpsilon)
{
   check_profile_shape(bids);
   const std::size_t n = bids.buyers();
   const std::size_t m = bids.goods();
   if(n <= m) {
      throw ShapeError("surplus bid-function auction needs strictly more buyers than goods");
   }
   if(n > kMaxInjectiveBuyers) {
      throw SizeGuardError("surplus auction limited to " + std::to_string(kMaxInjectiveBuyers) +
                           " buyers");
   }
   const auto rep = validate_consistency(bids);
   if(!rep.valid) {
      return detail::rejected_outcome(n, m, rep);
   }

   AuctionOutcome out;
   const Matrix values = fixed_point_values(bids, &out.diagnostics.fixed_points);
   const auto chosen = best_injective_assignment(AssignmentProblem{values}, tie, std::nullopt, eps);
   out.allocation = chosen.allocation;
   out.payment.assign(n, 0.0);
   out.utility.assign(n, 0.0);
   out.welfare = chosen.value;
   out.diagnostics.optima = chosen.optima;
   out.diagnostics.selected_optimum = chosen.selected;
   out.diagnostics.c_prime = rep.c_prime;
   out.diagnostics.solved_diagonal.assign(n, std::nullopt);
   out.diagnostics.residual.assign(n, std::nullopt);

   for(Buyer i = 0; i < n; ++i) {
      const auto good = chosen.allocation.good_of(i);
      if(!good) {
         continue;
      }
      const Good a = *good;
      const auto residual =
         best_injective_assignment(AssignmentProblem{values}, {}, i, eps).allocation;
      const Buyer rival = *residual.assigned[a];
      double others = 0.0;
      for(Good k = 0; k < m; ++k) {
         if(k != a) {
            others += values(*chosen.allocation.assigned[k], k) - values(*residual.assigned[k], k);
         }
      }
      // the balance is affine in the diagonal, so two probes pin it down
      auto probe = [&](double diagonal) {
         Matrix x = bids.coeff[a];
         x(i, i) = diagonal;
         return solve_fixed_point(x).v;
      };
      const double x0 = bids.coeff[a](i, i);
      const double x1 = x0 + 1.0;
      const auto v0 = probe(x0);
      const auto v1 = probe(x1);
      const double h0 = v0[i] - v0[rival] + others;
      const double h1 = v1[i] - v1[rival] + others;
      const double slope = h1 - h0;
      if(std::abs(slope) <= kPivotFloor) {
         throw SingularSystemError("indifference diagonal is not determined by the bids");
      }
      const double x_star = x0 - h0 / slope;
      const auto v_star = probe(x_star);
      out.payment[i] = v_star[i];
      out.utility[i] = values(i, a) - out.payment[i];
      out.diagnostics.solved_diagonal[i] = x_star;
      out.diagnostics.residual[i] = residual;
   }
   return out;
}

// ---------------------------------------------------------------------------
// Two buyers, one good, affine bid functions

struct AffineBid {
   double intercept = 0.0;
   double slope = 0.0;

   [[nodiscard]] double operator()(double v) const { return intercept + slope * v; }
};

/// Fixed point of the pair (v1 = b1(v2), v2 = b2(v1)); the winner pays the solution of
/// v = b_other(v).
inline AuctionOutcome run_dm_two_buyer(const AffineBid& first, const AffineBid& second,
                                       const TieRule& tie = {}, double eps = kDefaultEpsilon)
{
   for(const auto* b : {&first, &second}) {
      if(!std::isfinite(b->intercept) || !std::isfinite(b->slope)) {
         throw ValidationError("bid coefficients must be finite");
      }
      if(!(std::abs(b->slope) < 1.0)) {
         throw ValidationError("bid function slope must be below 1 in magnitude");
      }
   }
   const double v1 = (first.intercept + first.slope * second.intercept) /
                     (1.0 - first.slope * second.slope);
   const double v2 = second(v1);

   AuctionOutcome out;
   out.allocation = Allocation(1);
   out.payment.assign(2, 0.0);
   out.utility.assign(2, 0.0);
   out.diagnostics.fixed_points = {{v1, v2}};

   std::vector<Allocation> optima;
   Allocation to_first(1);
   to_first.assigned[0] = 0;
   Allocation to_second(1);
   to_second.assigned[0] = 1;
   if(v1 > v2 + eps) {
      optima = {to_first};
   } else if(v2 > v1 + eps) {
      optima = {to_second};
   } else {
      optima = {to_first, to_second};
   }
   out.diagnostics.selected_optimum = tie.pick(optima.size());
   out.allocation = optima[out.diagnostics.selected_optimum];
   out.diagnostics.optima = optima;

   const Buyer winner = *out.allocation.assigned[0];
   const AffineBid& rival = winner == 0 ? second : first;
   out.payment[winner] = rival.intercept / (1.0 - rival.slope);
   const double apparent = winner == 0 ? v1 : v2;
   out.utility[winner] = apparent - out.payment[winner];
   out.welfare = apparent;
   return out;
}

/// Truthful affine bids of a two-buyer, one-good model.
inline std::pair<AffineBid, AffineBid> truthful_affine_bids(const LinearValuationModel& model,
                                                            const SignalProfile& s)
{
   model.check_shape();
   check_signal_shape(model, s);
   if(model.n != 2 || model.m != 1) {
      throw ShapeError("two-buyer one-good auction needs n = 2, m = 1");
   }
   const auto r0 = truthful_bid_coefficients(model, 0, s(0, 0));
   const auto r1 = truthful_bid_coefficients(model, 1, s(1, 0));
   return {AffineBid{r0[0], r0[1]}, AffineBid{r1[1], r1[0]}};
}

}  // namespace auction::bidfn
