#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auction/bidfn_auctions.hpp"
#include "auction/model.hpp"
#include "auction/signal_auctions.hpp"
#include "auction/vcg.hpp"

// Uniform front door over every mechanism: a single instance type (model, true signals and,
// for the subset-bid auction, optional private set values), a single bid container, and one
// dispatch function.

namespace auction {

enum class Mechanism { vcg, auction1, auction2, auction3, auction4, dm2 };

inline constexpr std::array<Mechanism, 6> kAllMechanisms{Mechanism::vcg,      Mechanism::auction1,
                                                         Mechanism::auction2, Mechanism::auction3,
                                                         Mechanism::auction4, Mechanism::dm2};

inline std::string to_string(Mechanism m)
{
   switch(m) {
      case Mechanism::vcg: return "vcg";
      case Mechanism::auction1: return "auction1";
      case Mechanism::auction2: return "auction2";
      case Mechanism::auction3: return "auction3";
      case Mechanism::auction4: return "auction4";
      case Mechanism::dm2: return "dm2";
   }
   return "unknown";
}

inline std::optional<Mechanism> parse_mechanism(std::string_view name)
{
   for(Mechanism m : kAllMechanisms) {
      if(to_string(m) == name) {
         return m;
      }
   }
   return std::nullopt;
}

/// What a mechanism is run on. `valuations`, when set, replaces the model as the source of
/// true values for the subset-bid auction (private-value instances).
struct Instance {
   Mechanism mechanism = Mechanism::auction1;
   LinearValuationModel model;
   SignalProfile signals;
   std::optional<vcg::SubsetBids> valuations;

   [[nodiscard]] std::size_t buyers() const { return valuations ? valuations->buyers() : model.n; }
   [[nodiscard]] std::size_t goods() const { return valuations ? valuations->goods : model.m; }
};

/// Bids in the form the instance's mechanism expects; exactly one member is used.
/// `abstain` marks a buyer that stays out of the auction and so receives utility 0.
struct Bids {
   std::optional<SignalProfile> reports;
   std::optional<bidfn::BidProfile> coefficients;
   std::optional<vcg::SubsetBids> subsets;
   std::optional<std::array<bidfn::AffineBid, 2>> affine;
   std::optional<Buyer> abstain;
};

inline void check_instance_shape(const Instance& inst)
{
   const std::size_t n = inst.buyers();
   const std::size_t m = inst.goods();
   if(inst.valuations) {
      if(inst.mechanism != Mechanism::vcg) {
         throw ShapeError("private set values only apply to the vcg mechanism");
      }
      if(n == 0 || m == 0) {
         throw ShapeError("need at least one buyer and one good");
      }
      for(const auto& table : inst.valuations->bid) {
         if(table.size() != (std::size_t{1} << m)) {
            throw ShapeError("subset table must have 2^m entries");
         }
      }
      return;
   }
   inst.model.check_shape();
   check_signal_shape(inst.model, inst.signals);
   switch(inst.mechanism) {
      case Mechanism::vcg: break;
      case Mechanism::auction1:
      case Mechanism::auction3:
         if(n != m) {
            throw ShapeError(to_string(inst.mechanism) + " needs as many buyers as goods");
         }
         break;
      case Mechanism::auction2:
      case Mechanism::auction4:
         if(n <= m) {
            throw ShapeError(to_string(inst.mechanism) + " needs more buyers than goods");
         }
         break;
      case Mechanism::dm2:
         if(n != 2 || m != 1) {
            throw ShapeError("dm2 needs two buyers and one good");
         }
         break;
   }
}

/// Bids every buyer would submit if it reported truthfully.
inline Bids truthful_bids(const Instance& inst)
{
   check_instance_shape(inst);
   Bids bids;
   switch(inst.mechanism) {
      case Mechanism::vcg:
         bids.subsets = inst.valuations ? *inst.valuations : vcg::truthful_bids(inst.model, inst.signals);
         break;
      case Mechanism::auction1:
      case Mechanism::auction2: bids.reports = inst.signals; break;
      case Mechanism::auction3:
      case Mechanism::auction4:
         bids.coefficients = bidfn::truthful_bids(inst.model, inst.signals);
         break;
      case Mechanism::dm2: {
         const auto [first, second] = bidfn::truthful_affine_bids(inst.model, inst.signals);
         bids.affine = std::array<bidfn::AffineBid, 2>{first, second};
         break;
      }
   }
   return bids;
}

/// Runs the instance's mechanism on the given bids. Utilities in the result are
/// measured against the bids; see true_utility for real ones.
inline AuctionOutcome run_mechanism(const Instance& inst, const Bids& bids, const TieRule& tie = {},
                                    double eps = kDefaultEpsilon)
{
   check_instance_shape(inst);
   auto need = [&](bool present) {
      if(!present) {
         throw ShapeError("bids do not match mechanism " + to_string(inst.mechanism));
      }
   };
   switch(inst.mechanism) {
      case Mechanism::vcg:
         need(bids.subsets.has_value());
         if(bids.subsets->buyers() != inst.buyers() || bids.subsets->goods != inst.goods()) {
            throw ShapeError("subset bids do not match the instance size");
         }
         return vcg::run_vcg(*bids.subsets, tie, eps);
      case Mechanism::auction1:
         need(bids.reports.has_value());
         return signal::run_auction1(inst.model, *bids.reports, tie, eps);
      case Mechanism::auction2:
         need(bids.reports.has_value());
         return signal::run_auction2(inst.model, *bids.reports, tie, eps);
      case Mechanism::auction3:
      case Mechanism::auction4: {
         need(bids.coefficients.has_value());
         const auto& c = *bids.coefficients;
         bidfn::check_profile_shape(c);
         if(c.buyers() != inst.buyers() || c.goods() != inst.goods()) {
            throw ShapeError("bid coefficients do not match the instance size");
         }
         return inst.mechanism == Mechanism::auction3 ? bidfn::run_auction3(c, tie, eps)
                                                      : bidfn::run_auction4(c, tie, eps);
      }
      case Mechanism::dm2:
         need(bids.affine.has_value());
         return bidfn::run_dm_two_buyer((*bids.affine)[0], (*bids.affine)[1], tie, eps);
   }
   throw ShapeError("unknown mechanism");
}

/// Buyer i's value for what it received, from true signals or private set values.
inline double true_value(const Instance& inst, const Allocation& alloc, Buyer i)
{
   if(inst.valuations) {
      return inst.valuations->of(i, vcg::mask_of(alloc, i));
   }
   return eval_set_valuation(inst.model, inst.signals, i, alloc.owner_goods(i));
}

inline double true_utility(const Instance& inst, const AuctionOutcome& out, Buyer i)
{
   return true_value(inst, out.allocation, i) - out.payment[i];
}

/// Replaces bid-based utilities and welfare with their true counterparts.
inline void settle(const Instance& inst, AuctionOutcome& out)
{
   out.welfare = 0.0;
   for(Buyer i = 0; i < inst.buyers(); ++i) {
      const double value = true_value(inst, out.allocation, i);
      out.utility[i] = value - out.payment[i];
      out.welfare += value;
   }
}

}  // namespace auction
