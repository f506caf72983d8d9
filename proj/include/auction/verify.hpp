#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "auction/mechanism.hpp"

// Brute-force equilibrium checks and property suites.
//
// Continuous strategy spaces are replaced by a finite grid of offsets applied to the
// deviating buyer's own bid coordinates, plus an "exit" strategy:
//
//   mechanism   coordinates                    exit
//   vcg         every nonempty subset bid      bid zero on every subset
//   auction1/3  reported signals / diagonals   stay out (utility 0), nonnegative instances only
//   auction2/4  reported signals / diagonals   shift every coordinate down by kExitShift
//   dm2         bid intercept                  shift the intercept down by kExitShift
//
// In joint mode every combination of offsets across coordinates is tried; per-coordinate mode
// moves one coordinate at a time. Offset 0 is always included, so the truthful bid is itself
// in the grid and the reported violation is never negative.

namespace auction::verify {

inline constexpr double kExitShift = 1e4;
inline constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 20;

struct DeviationGrid {
   enum class Mode { per_coordinate, joint };

   std::vector<double> offsets{-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0};
   Mode mode = Mode::joint;
   bool include_exit = true;

   void check() const
   {
      if(offsets.empty()) {
         throw ValidationError("deviation grid needs at least one offset");
      }
      for(double x : offsets) {
         if(!std::isfinite(x)) {
            throw ValidationError("deviation offsets must be finite");
         }
      }
   }

   /// Offsets with 0 added and duplicates removed.
   [[nodiscard]] std::vector<double> with_zero() const
   {
      std::vector<double> out = offsets;
      out.push_back(0.0);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
   }
};

struct VerifyOptions {
   double eps = kDefaultEpsilon;
   /// Harness self-test: negate every payment before utilities are computed.
   bool flip_payment_sign = false;
};

struct WorstCase {
   Instance instance;
   Buyer buyer = 0;
   Bids bids;
   std::string deviation;
   double truthful_utility = 0.0;
   double deviation_utility = 0.0;
};

struct EquilibriumReport {
   Mechanism mechanism = Mechanism::auction1;
   std::size_t instances_checked = 0;
   std::size_t deviations_checked = 0;
   double max_violation = 0.0;
   std::optional<WorstCase> worst_case;

   [[nodiscard]] bool passed(double eps = kDefaultEpsilon) const { return max_violation <= eps; }

   void merge(const EquilibriumReport& other)
   {
      instances_checked += other.instances_checked;
      deviations_checked += other.deviations_checked;
      if(other.worst_case && (!worst_case || other.max_violation > max_violation)) {
         max_violation = other.max_violation;
         worst_case = other.worst_case;
      }
   }
};

// ---------------------------------------------------------------------------
// Utilities under deviations

inline double buyer_utility(const Instance& inst, const AuctionOutcome& out, Buyer i,
                            const VerifyOptions& opts)
{
   const double pay = opts.flip_payment_sign ? -out.payment[i] : out.payment[i];
   return true_value(inst, out.allocation, i) - pay;
}

/// True utility of buyer i, averaged over every welfare-maximizing selection.
inline double expected_true_utility(const Instance& inst, const Bids& bids, Buyer i,
                                    const VerifyOptions& opts = {})
{
   if(bids.abstain && *bids.abstain == i) {
      return 0.0;
   }
   const auto first = run_mechanism(inst, bids, TieRule::lexicographic(), opts.eps);
   const std::size_t optima = first.diagnostics.optima.size();
   if(optima <= 1) {
      return buyer_utility(inst, first, i, opts);
   }
   double total = buyer_utility(inst, first, i, opts);
   for(std::size_t k = 1; k < optima; ++k) {
      total += buyer_utility(inst, run_mechanism(inst, bids, TieRule::forced(k), opts.eps), i, opts);
   }
   return total / static_cast<double>(optima);
}

inline std::size_t coordinate_count(const Instance& inst, const Bids& bids)
{
   if(bids.subsets) {
      return (std::size_t{1} << bids.subsets->goods) - 1;
   }
   if(bids.affine) {
      return 1;
   }
   return inst.goods();
}

inline void shift_coordinate(Bids& bids, Buyer i, std::size_t coord, double delta)
{
   if(bids.reports) {
      (*bids.reports)(i, coord) += delta;
   } else if(bids.coefficients) {
      bids.coefficients->coeff[coord](i, i) += delta;
   } else if(bids.subsets) {
      bids.subsets->bid[i][coord + 1] += delta;
   } else if(bids.affine) {
      (*bids.affine)[i].intercept += delta;
   }
}

inline bool nonnegative_valuations(const Instance& inst)
{
   if(inst.valuations) {
      return true;
   }
   const Matrix v = valuation_table(inst.model, inst.signals);
   for(Buyer i = 0; i < v.rows(); ++i) {
      for(Good k = 0; k < v.cols(); ++k) {
         if(v(i, k) < 0.0) {
            return false;
         }
      }
   }
   return true;
}

/// The exit strategy for buyer i, or nothing when it does not apply to this instance.
inline std::optional<Bids> exit_bids(const Instance& inst, const Bids& truthful, Buyer i)
{
   Bids out = truthful;
   switch(inst.mechanism) {
      case Mechanism::vcg:
         std::fill(out.subsets->bid[i].begin(), out.subsets->bid[i].end(), 0.0);
         return out;
      case Mechanism::auction1:
      case Mechanism::auction3:
         if(!nonnegative_valuations(inst)) {
            return std::nullopt;
         }
         out.abstain = i;
         return out;
      case Mechanism::auction2:
      case Mechanism::auction4:
      case Mechanism::dm2:
         for(std::size_t k = 0; k < coordinate_count(inst, out); ++k) {
            shift_coordinate(out, i, k, -kExitShift);
         }
         return out;
   }
   return std::nullopt;
}

inline std::string describe_offsets(const std::vector<double>& deltas)
{
   std::string text = "offsets (";
   for(std::size_t k = 0; k < deltas.size(); ++k) {
      text += (k ? ", " : "") + std::to_string(deltas[k]);
   }
   return text + ")";
}

/// Max over grid deviations of buyer i's true utility gain over truthful bidding, with every
/// other buyer truthful.
inline EquilibriumReport check_best_response(const Instance& inst, Buyer buyer,
                                             const DeviationGrid& grid = {},
                                             const VerifyOptions& opts = {})
{
   grid.check();
   check_instance_shape(inst);
   if(buyer >= inst.buyers()) {
      throw ShapeError("deviating buyer out of range");
   }
   const Bids truthful = truthful_bids(inst);
   const double base = expected_true_utility(inst, truthful, buyer, opts);

   EquilibriumReport report;
   report.mechanism = inst.mechanism;
   report.instances_checked = 1;
   report.max_violation = -std::numeric_limits<double>::infinity();

   auto consider = [&](const Bids& bids, const std::string& what) {
      const double u = expected_true_utility(inst, bids, buyer, opts);
      ++report.deviations_checked;
      const double gain = u - base;
      if(gain > report.max_violation) {
         report.max_violation = gain;
         report.worst_case = WorstCase{inst, buyer, bids, what, base, u};
      }
   };

   const auto offsets = grid.with_zero();
   const std::size_t coords = coordinate_count(inst, truthful);
   if(grid.mode == DeviationGrid::Mode::joint) {
      std::uint64_t total = 1;
      for(std::size_t k = 0; k < coords; ++k) {
         total *= offsets.size();
         if(total > kMaxGridPoints) {
            throw SizeGuardError("joint deviation grid too large; use per-coordinate mode");
         }
      }
      std::vector<std::size_t> digit(coords, 0);
      for(std::uint64_t code = 0; code < total; ++code) {
         Bids bids = truthful;
         std::vector<double> deltas(coords);
         for(std::size_t k = 0; k < coords; ++k) {
            deltas[k] = offsets[digit[k]];
            shift_coordinate(bids, buyer, k, deltas[k]);
         }
         consider(bids, describe_offsets(deltas));
         for(std::size_t k = coords; k-- > 0;) {
            if(++digit[k] < offsets.size()) {
               break;
            }
            digit[k] = 0;
         }
      }
   } else {
      consider(truthful, describe_offsets(std::vector<double>(coords, 0.0)));
      for(std::size_t k = 0; k < coords; ++k) {
         for(double delta : offsets) {
            if(delta == 0.0) {
               continue;
            }
            Bids bids = truthful;
            shift_coordinate(bids, buyer, k, delta);
            std::vector<double> deltas(coords, 0.0);
            deltas[k] = delta;
            consider(bids, describe_offsets(deltas));
         }
      }
   }
   if(grid.include_exit) {
      if(auto bids = exit_bids(inst, truthful, buyer)) {
         consider(*bids, "exit");
      }
   }
   return report;
}

// ---------------------------------------------------------------------------
// Random instances

struct Range {
   double lo = 0.0;
   double hi = 1.0;
};

struct InstanceRanges {
   Range slope{0.1, 3.0};
   Range intercept{-1.0, 1.0};
   Range c{1.1, 5.0};
   Range d{-2.0, 2.0};
   Range signal{-5.0, 5.0};
   /// Private set values for the subset-bid auction.
   Range set_value{0.0, 10.0};
};

/// Ranges whose draws always give nonnegative valuations.
inline InstanceRanges nonnegative_ranges()
{
   InstanceRanges r;
   r.intercept = {0.0, 1.0};
   r.d = {0.0, 2.0};
   r.signal = {0.0, 5.0};
   return r;
}

class Sampler {
  public:
   explicit Sampler(std::uint64_t seed) : rng_(seed) {}

   double uniform(Range r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng_); }
   std::size_t index(std::size_t lo, std::size_t hi)
   {
      return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
   }
   std::mt19937_64& engine() { return rng_; }

   LinearValuationModel model(std::size_t n, std::size_t m, const InstanceRanges& r = {})
   {
      LinearValuationModel out;
      out.n = n;
      out.m = m;
      for(Buyer i = 0; i < n; ++i) {
         out.f_slope.push_back(uniform(r.slope));
         out.f_intercept.push_back(uniform(r.intercept));
         out.c.push_back(uniform(r.c));
         out.d.push_back(uniform(r.d));
      }
      return out;
   }

   SignalProfile signals(std::size_t n, std::size_t m, const InstanceRanges& r = {})
   {
      SignalProfile s(n, m);
      for(Buyer i = 0; i < n; ++i) {
         for(Good k = 0; k < m; ++k) {
            s(i, k) = uniform(r.signal);
         }
      }
      return s;
   }

   vcg::SubsetBids set_values(std::size_t n, std::size_t m, const InstanceRanges& r = {})
   {
      vcg::SubsetBids out(n, m);
      for(auto& table : out.bid) {
         for(std::size_t mask = 1; mask < table.size(); ++mask) {
            table[mask] = uniform(r.set_value);
         }
      }
      return out;
   }

  private:
   std::mt19937_64 rng_;
};

struct SizeBounds {
   std::size_t n = 0;
   std::size_t m = 0;
};

/// Shape used when the caller gives none.
inline SizeBounds default_bounds(Mechanism mech)
{
   switch(mech) {
      case Mechanism::vcg: return {3, 2};
      case Mechanism::auction1:
      case Mechanism::auction3: return {3, 3};
      case Mechanism::auction2:
      case Mechanism::auction4: return {3, 2};
      case Mechanism::dm2: return {2, 1};
   }
   return {};
}

/// One random validated instance. Subset-bid instances use private set values with sizes
/// drawn up to the bounds; the others use exactly the bounds.
inline Instance random_instance(Mechanism mech, SizeBounds bounds, Sampler& sampler,
                                const InstanceRanges& ranges = {})
{
   Instance inst;
   inst.mechanism = mech;
   if(mech == Mechanism::vcg) {
      const std::size_t n = sampler.index(1, bounds.n);
      const std::size_t m = sampler.index(1, bounds.m);
      inst.valuations = sampler.set_values(n, m, ranges);
      return inst;
   }
   inst.model = sampler.model(bounds.n, bounds.m, ranges);
   inst.signals = sampler.signals(bounds.n, bounds.m, ranges);
   check_instance_shape(inst);
   return inst;
}

inline void check_bounds(Mechanism mech, SizeBounds bounds)
{
   if(bounds.n == 0 || bounds.m == 0) {
      throw ShapeError("sweep needs at least one buyer and one good");
   }
   const bool square = mech == Mechanism::auction1 || mech == Mechanism::auction3;
   const bool surplus = mech == Mechanism::auction2 || mech == Mechanism::auction4;
   if(square && bounds.n != bounds.m) {
      throw ShapeError(to_string(mech) + " sweeps need n = m");
   }
   if(surplus && bounds.n <= bounds.m) {
      throw ShapeError(to_string(mech) + " sweeps need n > m");
   }
   if(mech == Mechanism::dm2 && (bounds.n != 2 || bounds.m != 1)) {
      throw ShapeError("dm2 sweeps need n = 2, m = 1");
   }
   if(mech == Mechanism::vcg) {
      if(bounds.m > kMaxPartitionGoods || bounds.n > 6) {
         throw SizeGuardError("vcg sweep bounds exceed solver guards");
      }
   } else if(bounds.n > kMaxInjectiveBuyers) {
      throw SizeGuardError("sweep bounds exceed solver guards");
   }
}

inline EquilibriumReport sweep_random_instances(Mechanism mech, SizeBounds bounds,
                                                std::size_t count, std::uint64_t seed,
                                                const DeviationGrid& grid = {},
                                                const VerifyOptions& opts = {})
{
   check_bounds(mech, bounds);
   Sampler sampler(seed);
   EquilibriumReport total;
   total.mechanism = mech;
   for(std::size_t t = 0; t < count; ++t) {
      const Instance inst = random_instance(mech, bounds, sampler);
      for(Buyer i = 0; i < inst.buyers(); ++i) {
         auto one = check_best_response(inst, i, grid, opts);
         one.instances_checked = 0;
         total.merge(one);
      }
      ++total.instances_checked;
   }
   return total;
}

// ---------------------------------------------------------------------------
// Property suites

struct PropertyResult {
   std::string name;
   bool passed = true;
   std::size_t checked = 0;
   /// Largest observed deviation from the property (0 for exact boolean checks).
   double worst = 0.0;
   std::string note;

   void observe(double gap, double tol)
   {
      ++checked;
      worst = std::max(worst, gap);
      if(!(gap <= tol)) {
         passed = false;
      }
   }
   void expect(bool ok, const std::string& what = {})
   {
      ++checked;
      if(!ok) {
         if(passed && !what.empty()) {
            note = what;
         }
         passed = false;
      }
   }
};

struct SuiteReport {
   std::string suite;
   std::vector<PropertyResult> properties;

   [[nodiscard]] bool passed() const
   {
      return std::all_of(properties.begin(), properties.end(),
                         [](const PropertyResult& p) { return p.passed; });
   }
};

namespace suites {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
   double worst = 0.0;
   for(std::size_t k = 0; k < a.size(); ++k) {
      worst = std::max(worst, std::abs(a[k] - b[k]));
   }
   return worst;
}

inline SuiteReport model_invariants(std::uint64_t seed)
{
   SuiteReport r{"model-invariants", {}};
   PropertyResult crossing{"own signal moves own value by c*a, others' by a", true, 0, 0.0, {}};
   PropertyResult residual_free{"rival value gaps ignore the excluded buyer's signal", true, 0, 0.0, {}};
   PropertyResult unit_welfare{"unit-demand welfare is the sum of assigned pairs", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 200; ++t) {
      const std::size_t n = sampler.index(2, 4);
      const std::size_t m = sampler.index(1, n);
      const auto model = sampler.model(n, m);
      const auto s = sampler.signals(n, m);
      const Buyer i = sampler.index(0, n - 1);
      const Good k = sampler.index(0, m - 1);
      const double delta = sampler.uniform({-3.0, 3.0});
      auto moved = s;
      moved(i, k) += delta;
      for(Buyer j = 0; j < n; ++j) {
         const double change = eval_valuation(model, moved, j, k) - eval_valuation(model, s, j, k);
         const double expected = (j == i ? model.c[i] : 1.0) * model.f_slope[i] * delta;
         crossing.observe(std::abs(change - expected), 1e-9);
         if(j != i) {
            const double own_gap = (eval_valuation(model, moved, i, k) - eval_valuation(model, moved, j, k)) -
                                   (eval_valuation(model, s, i, k) - eval_valuation(model, s, j, k));
            crossing.observe(std::abs(own_gap - (model.c[i] - 1.0) * model.f_slope[i] * delta), 1e-9);
         }
      }
      for(Buyer a = 0; a < n; ++a) {
         for(Buyer b = 0; b < n; ++b) {
            if(a == i || b == i || a == b) {
               continue;
            }
            const double before = eval_valuation(model, s, a, k) - eval_valuation(model, s, b, k);
            const double after = eval_valuation(model, moved, a, k) - eval_valuation(model, moved, b, k);
            residual_free.observe(std::abs(before - after), 1e-9);
         }
      }
      const auto chosen = best_injective_assignment(AssignmentProblem{valuation_table(model, s)});
      double pairs = 0.0;
      for(Good g = 0; g < m; ++g) {
         pairs += eval_valuation(model, s, *chosen.allocation.assigned[g], g);
      }
      unit_welfare.observe(std::abs(pairs - welfare(model, s, chosen.allocation)), 1e-9);
   }
   r.properties = {crossing, residual_free, unit_welfare};
   return r;
}

inline SuiteReport vcg_payments(std::uint64_t seed)
{
   SuiteReport r{"vcg-payments", {}};
   PropertyResult nonneg{"payments are nonnegative", true, 0, 0.0, {}};
   PropertyResult independent{"payments ignore the buyer's own bid", true, 0, 0.0, {}};
   PropertyResult identity{"payment equals the externality identity", true, 0, 0.0, {}};
   PropertyResult symmetric{"mirrored optima give mirrored payments", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 200; ++t) {
      const std::size_t n = sampler.index(1, 3);
      const std::size_t m = sampler.index(1, 2);
      const auto bids = sampler.set_values(n, m);
      const auto rep = vcg::vcg_payment_properties(bids);
      nonneg.observe(std::max(0.0, -rep.worst_negative), kDefaultEpsilon);
      independent.observe(rep.worst_drift, kDefaultEpsilon);
      identity.observe(rep.worst_identity_gap, kDefaultEpsilon);
   }
   for(int t = 0; t < 50; ++t) {
      const std::size_t m = sampler.index(1, 2);
      auto bids = sampler.set_values(2, m);
      bids.bid[1] = bids.bid[0];
      const auto first = vcg::run_vcg(bids, TieRule::forced(0));
      auto sorted = first.payment;
      std::sort(sorted.begin(), sorted.end());
      for(std::size_t k = 1; k < first.diagnostics.optima.size(); ++k) {
         auto other = vcg::run_vcg(bids, TieRule::forced(k)).payment;
         std::sort(other.begin(), other.end());
         symmetric.observe(max_abs_diff(sorted, other), kDefaultEpsilon);
      }
      symmetric.expect(first.diagnostics.optima.size() >= 2, "symmetric instance had a unique optimum");
   }
   r.properties = {nonneg, independent, identity, symmetric};
   return r;
}

inline SuiteReport unit_demand_reduction(std::uint64_t seed)
{
   SuiteReport r{"unit-demand-reduction", {}};
   PropertyResult equal{"partition optimum equals injective optimum", true, 0, 0.0, {}};
   PropertyResult members{"selected assignment is among equal-valued optima", true, 0, 0.0, {}};
   Sampler sampler(seed);
   const auto ranges = nonnegative_ranges();
   for(int t = 0; t < 1000; ++t) {
      // cycle through every size pair with m <= n <= 4
      static constexpr std::size_t kSizes[][2] = {{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2},
                                                  {3, 3}, {4, 1}, {4, 2}, {4, 3}, {4, 4}};
      const std::size_t n = kSizes[t % 10][0];
      const std::size_t m = kSizes[t % 10][1];
      const auto model = sampler.model(n, m, ranges);
      const auto s = sampler.signals(n, m, ranges);
      const Matrix table = valuation_table(model, s);
      const auto partition = best_partition(unit_demand_partition(table));
      const auto injective = best_injective_assignment(AssignmentProblem{table});
      equal.observe(std::abs(partition.value - injective.value), 1e-9);
      equal.expect(unit_demand_reduction_check(model, s));
      bool found = false;
      for(const auto& a : injective.optima) {
         found = found || a == injective.allocation;
         members.observe(std::abs(welfare(model, s, a) - injective.value), 1e-9);
      }
      members.expect(found, "selected assignment missing from optima");
   }
   r.properties = {equal, members};
   return r;
}

inline SuiteReport auction1_payment_independence(std::uint64_t seed)
{
   SuiteReport r{"auction1-payment-independence", {}};
   PropertyResult independent{"scores ignore the buyer's own report", true, 0, 0.0, {}};
   PropertyResult utility{"winner utility equals the weighted welfare gap formula", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const auto model = sampler.model(3, 3);
      const auto s = sampler.signals(3, 3);
      for(Buyer i = 0; i < 3; ++i) {
         independent.expect(signal::auction1_payment_bid_independence(model, s, i, seed + t),
                            "score moved under own-report perturbation");
      }
      const auto out = signal::run_auction1(model, s);
      const auto& perms = out.diagnostics.permutations;
      const Matrix v = valuation_table(model, s);
      auto w = [&](std::size_t p) {
         double total = 0.0;
         for(Buyer j = 0; j < 3; ++j) {
            total += v(j, perms[p][j]);
         }
         return total;
      };
      for(Buyer i = 0; i < 3; ++i) {
         const auto& row = out.diagnostics.payment_table[i];
         const std::size_t best = std::max_element(row.begin(), row.end()) - row.begin();
         const double formula =
            signal::welfare_weight(model, i) * (out.welfare - w(best)) + v(i, perms[best][i]);
         utility.observe(std::abs(formula - out.utility[i]), 1e-9);
      }
   }
   r.properties = {independent, utility};
   return r;
}

inline SuiteReport auction2_payment_independence(std::uint64_t seed)
{
   SuiteReport r{"auction2-payment-independence", {}};
   PropertyResult independent{"winner payment ignores its own report", true, 0, 0.0, {}};
   PropertyResult loser{"buyers without a good pay nothing", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t m = sampler.index(1, 2);
      const std::size_t n = m + sampler.index(1, 2);
      const auto model = sampler.model(n, m);
      const auto s = sampler.signals(n, m);
      const auto base = signal::run_auction2(model, s);
      for(Buyer i = 0; i < n; ++i) {
         if(!base.allocation.good_of(i)) {
            loser.observe(std::abs(base.payment[i]), 0.0);
            continue;
         }
         for(int k = 0; k < 10; ++k) {
            auto moved = s;
            for(Good g = 0; g < m; ++g) {
               moved(i, g) += sampler.uniform({-0.5, 0.5});
            }
            const auto again = signal::run_auction2(model, moved);
            if(again.allocation == base.allocation) {
               independent.observe(std::abs(again.payment[i] - base.payment[i]), 1e-9);
            }
         }
      }
   }
   r.properties = {independent, loser};
   return r;
}

inline SuiteReport residual_invariance(std::uint64_t seed)
{
   SuiteReport r{"residual-invariance", {}};
   PropertyResult same{"residual optima ignore the excluded buyer's reports", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t m = sampler.index(1, 3);
      const std::size_t n = m + sampler.index(1, 2);
      const auto model = sampler.model(n, m);
      const auto s = sampler.signals(n, m);
      const Buyer i = sampler.index(0, n - 1);
      const auto base = signal::residual_optima(model, s, i);
      for(int k = 0; k < 50; ++k) {
         auto moved = s;
         for(Good g = 0; g < m; ++g) {
            moved(i, g) = sampler.uniform({-50.0, 50.0});
         }
         same.expect(signal::residual_optima(model, moved, i) == base, "residual optimum moved");
      }
   }
   r.properties = {same};
   return r;
}

inline SuiteReport truthful_bid_identity(std::uint64_t seed)
{
   SuiteReport r{"truthful-bid-identity", {}};
   PropertyResult identity{"truthful bid reproduces own value at the others' values", true, 0, 0.0, {}};
   PropertyResult unique{"independent pivot orders agree", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t n = sampler.index(2, 6);
      const auto model = sampler.model(n, 1);
      const Buyer i = sampler.index(0, n - 1);
      const double own = sampler.uniform({-5.0, 5.0});
      const auto row = bidfn::truthful_bid_coefficients(model, i, own);
      const auto partial = bidfn::truthful_weights(model.c, i, linalg::Pivoting::partial);
      const auto complete = bidfn::truthful_weights(model.c, i, linalg::Pivoting::complete);
      unique.observe(max_abs_diff(partial, complete), 1e-12);
      for(int k = 0; k < 20; ++k) {
         auto s = sampler.signals(n, 1);
         s(i, 0) = own;
         double bid = row[i];
         for(Buyer j = 0; j < n; ++j) {
            if(j != i) {
               bid += row[j] * eval_valuation(model, s, j, 0);
            }
         }
         identity.observe(std::abs(bid - eval_valuation(model, s, i, 0)), 1e-9);
      }
   }
   r.properties = {identity, unique};
   return r;
}

inline SuiteReport system_positivity(std::uint64_t seed)
{
   SuiteReport r{"system-positivity", {}};
   PropertyResult positive{"every solution component is strictly positive", true, 0, 0.0, {}};
   PropertyResult balanced{"(c_i - 1) x_i is the same for every i", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 500; ++t) {
      const std::size_t k = sampler.index(1, 6);
      std::vector<double> c(k);
      for(auto& x : c) {
         x = sampler.uniform({1.1, 5.0});
      }
      const Matrix a = bidfn::ratio_matrix(c, std::nullopt);
      const auto x = linalg::solve(a, std::vector<double>(k, 1.0));
      for(std::size_t j = 0; j < k; ++j) {
         positive.expect(x[j] > 0.0, "nonpositive solution component");
         balanced.observe(std::abs((c[j] - 1.0) * x[j] - (c[0] - 1.0) * x[0]), 1e-9);
      }
   }
   r.properties = {positive, balanced};
   return r;
}

inline SuiteReport fixed_point(std::uint64_t seed)
{
   SuiteReport r{"fixed-point", {}};
   PropertyResult solves{"validated bids have a fixed point with tiny residual", true, 0, 0.0, {}};
   PropertyResult negative{"reduced diagonal -c'_i + sum_j x_ij is negative", true, 0, 0.0, {}};
   PropertyResult shared{"off-diagonals agree across goods", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t n = sampler.index(2, 6);
      const std::size_t m = sampler.index(1, n);
      const auto model = sampler.model(n, m);
      auto bids = bidfn::truthful_bids(model, sampler.signals(n, m));
      for(auto& x : bids.coeff) {
         for(Buyer i = 0; i < n; ++i) {
            x(i, i) = sampler.uniform({-20.0, 20.0});
         }
      }
      const auto rep = bidfn::validate_consistency(bids);
      solves.expect(rep.valid, "diagonal-only change failed validation");
      if(!rep.valid) {
         continue;
      }
      for(const auto& x : bids.coeff) {
         try {
            solves.observe(bidfn::solve_fixed_point(x).residual, 1e-9);
         } catch(const SingularSystemError&) {
            solves.expect(false, "fixed point solve failed");
         }
         for(Buyer i = 0; i < n; ++i) {
            negative.expect(-rep.c_prime[i] + bidfn::off_diagonal_sum(x, i) < 0.0,
                            "reduced diagonal not negative");
            for(Buyer j = 0; j < n; ++j) {
               if(i != j) {
                  shared.observe(std::abs(x(i, j) - bids.coeff[0](i, j)), 1e-9);
               }
            }
         }
      }
   }
   r.properties = {solves, negative, shared};
   return r;
}

inline SuiteReport consistency_gate(std::uint64_t seed)
{
   SuiteReport r{"consistency-gate", {}};
   PropertyResult truthful{"truthful bids pass and recover c", true, 0, 0.0, {}};
   PropertyResult perturbed{"a perturbed off-diagonal blocks every trade", true, 0, 0.0, {}};
   PropertyResult zeroed{"a zero off-diagonal blocks every trade", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t n = sampler.index(2, 4);
      const std::size_t m = n == 2 || sampler.index(0, 1) ? n : n - 1;
      const auto model = sampler.model(n, m);
      const auto bids = bidfn::truthful_bids(model, sampler.signals(n, m));
      const auto rep = bidfn::validate_consistency(bids);
      truthful.expect(rep.valid, "truthful bids rejected");
      if(rep.valid) {
         truthful.observe(max_abs_diff(rep.c_prime, model.c), 1e-9);
      }
      const Buyer i = sampler.index(0, n - 1);
      const Buyer j = (i + sampler.index(1, n - 1)) % n;
      const Good g = sampler.index(0, m - 1);
      auto run = [&](const bidfn::BidProfile& b) {
         return n == m ? bidfn::run_auction3(b) : bidfn::run_auction4(b);
      };
      auto blocked = [&](const AuctionOutcome& out) {
         return out.diagnostics.rejected && out.allocation.empty() &&
                std::all_of(out.payment.begin(), out.payment.end(), [](double p) { return p == 0.0; });
      };
      auto bent = bids;
      bent.coeff[g](i, j) *= 1.0 + sampler.uniform({0.01, 0.5});
      perturbed.expect(blocked(run(bent)), "perturbed off-diagonal was accepted");
      auto zero = bids;
      zero.coeff[g](i, j) = 0.0;
      zeroed.expect(blocked(run(zero)), "zero off-diagonal was accepted");
   }
   r.properties = {truthful, perturbed, zeroed};
   return r;
}

inline SuiteReport auction3_reduction(std::uint64_t seed)
{
   SuiteReport r{"auction3-matches-auction1", {}};
   PropertyResult alloc{"same allocation", true, 0, 0.0, {}};
   PropertyResult pay{"same payments", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t n = t % 4 == 0 ? 2 : 3;
      const auto model = sampler.model(n, n);
      const auto s = sampler.signals(n, n);
      const auto a1 = signal::run_auction1(model, s);
      const auto a3 = bidfn::run_auction3(bidfn::truthful_bids(model, s));
      alloc.expect(a1.allocation == a3.allocation, "allocations differ");
      pay.observe(max_abs_diff(a1.payment, a3.payment), 1e-9);
   }
   r.properties = {alloc, pay};
   return r;
}

inline SuiteReport auction4_reduction(std::uint64_t seed)
{
   SuiteReport r{"auction4-matches-auction2", {}};
   PropertyResult alloc{"same allocation", true, 0, 0.0, {}};
   PropertyResult pay{"same payments", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 100; ++t) {
      const std::size_t m = t % 4 == 0 ? 1 : 2;
      const auto model = sampler.model(3, m);
      const auto s = sampler.signals(3, m);
      const auto a2 = signal::run_auction2(model, s);
      const auto a4 = bidfn::run_auction4(bidfn::truthful_bids(model, s));
      alloc.expect(a2.allocation == a4.allocation, "allocations differ");
      pay.observe(max_abs_diff(a2.payment, a4.payment), 1e-9);
   }
   r.properties = {alloc, pay};
   return r;
}

inline SuiteReport two_buyer_one_good(std::uint64_t seed)
{
   SuiteReport r{"two-buyer-one-good", {}};
   PropertyResult fixed{"truthful fixed point equals true values", true, 0, 0.0, {}};
   PropertyResult sign{"winning pays off exactly when the own value is higher", true, 0, 0.0, {}};
   Sampler sampler(seed);
   for(int t = 0; t < 200; ++t) {
      const auto model = sampler.model(2, 1);
      const auto s = sampler.signals(2, 1);
      const auto [b1, b2] = bidfn::truthful_affine_bids(model, s);
      const auto out = bidfn::run_dm_two_buyer(b1, b2);
      const double v1 = eval_valuation(model, s, 0, 0);
      const double v2 = eval_valuation(model, s, 1, 0);
      fixed.observe(max_abs_diff(out.diagnostics.fixed_points[0], {v1, v2}), 1e-9);
      const double price = b2.intercept / (1.0 - b2.slope);
      if(std::abs(v1 - v2) > 1e-6) {
         sign.expect((v1 - price > 0.0) == (v1 > v2), "winning utility sign mismatch");
      }
   }
   r.properties = {fixed, sign};
   return r;
}

}  // namespace suites

using SuiteFn = std::function<SuiteReport(std::uint64_t)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry()
{
   static const std::vector<std::pair<std::string, SuiteFn>> registry{
      {"model-invariants", suites::model_invariants},
      {"vcg-payments", suites::vcg_payments},
      {"unit-demand-reduction", suites::unit_demand_reduction},
      {"auction1-payment-independence", suites::auction1_payment_independence},
      {"auction2-payment-independence", suites::auction2_payment_independence},
      {"residual-invariance", suites::residual_invariance},
      {"truthful-bid-identity", suites::truthful_bid_identity},
      {"system-positivity", suites::system_positivity},
      {"fixed-point", suites::fixed_point},
      {"consistency-gate", suites::consistency_gate},
      {"auction3-matches-auction1", suites::auction3_reduction},
      {"auction4-matches-auction2", suites::auction4_reduction},
      {"two-buyer-one-good", suites::two_buyer_one_good},
   };
   return registry;
}

/// Short numbered aliases accepted alongside the descriptive names.
inline const std::map<std::string, std::string>& suite_aliases()
{
   static const std::map<std::string, std::string> aliases{
      {"lemma-2.1", "vcg-payments"},
      {"lemma-4.3", "unit-demand-reduction"},
      {"lemma-4.5", "auction1-payment-independence"},
      {"lemma-4.8", "auction2-payment-independence"},
      {"lemma-4.9", "residual-invariance"},
      {"lemma-5.1", "truthful-bid-identity"},
      {"lemma-5.2", "system-positivity"},
      {"lemma-5.3", "fixed-point"},
   };
   return aliases;
}

/// Canonical suite names selected by `name` ("all" selects every suite), or nothing when
/// the name is unknown.
inline std::optional<std::vector<std::string>> resolve_suite(const std::string& name)
{
   std::vector<std::string> out;
   if(name == "all") {
      for(const auto& [suite, fn] : suite_registry()) {
         out.push_back(suite);
      }
      return out;
   }
   const auto alias = suite_aliases().find(name);
   const std::string canonical = alias == suite_aliases().end() ? name : alias->second;
   for(const auto& [suite, fn] : suite_registry()) {
      if(suite == canonical) {
         return std::vector<std::string>{suite};
      }
   }
   return std::nullopt;
}

/// Runs the named suite(s). Throws std::invalid_argument for unknown names.
inline std::vector<SuiteReport> run_property_suite(const std::string& name, std::uint64_t seed = 1)
{
   const auto names = resolve_suite(name);
   if(!names) {
      throw std::invalid_argument("unknown property suite: " + name);
   }
   std::vector<SuiteReport> out;
   for(const auto& wanted : *names) {
      for(const auto& [suite, fn] : suite_registry()) {
         if(suite == wanted) {
            out.push_back(fn(seed));
         }
      }
   }
   return out;
}

}  // namespace auction::verify
