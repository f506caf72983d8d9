#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "auction/bidfn_auctions.hpp"
#include "auction/signal_auctions.hpp"
#include "auction/verify.hpp"
#include "support.hpp"

using namespace auction;

namespace {

constexpr double kTol = 1e-9;

struct Check {
   bool ok = true;
   std::vector<std::string> lines;

   void near(double got, double want, const std::string& what, double tol = kTol)
   {
      if(!(std::abs(got - want) < tol)) {
         ok = false;
         char buf[256];
         std::snprintf(buf, sizeof buf, "%s: got %.12g, want %.12g", what.c_str(), got, want);
         lines.emplace_back(buf);
      }
   }

   void that(bool cond, const std::string& what)
   {
      if(!cond) {
         ok = false;
         lines.push_back(what);
      }
   }
};

double score_of(const AuctionOutcome& out, Buyer i, const std::vector<Good>& sigma)
{
   const auto& perms = out.diagnostics.permutations;
   for(std::size_t p = 0; p < perms.size(); ++p) {
      if(perms[p] == sigma) {
         return out.diagnostics.payment_table[i][p];
      }
   }
   return std::nan("");
}

// Two buyers, two goods; buyer 2 reports (2, 4) truthfully.
Check criterion1()
{
   Check c;
   const auto model = testing_support::example2();
   const SignalProfile truth{{1.0, 2.0}, {2.0, 4.0}};
   const auto out = signal::run_auction1(model, truth);
   c.near(score_of(out, 0, {0, 1}), 6.5, "P_1(A,B)");
   c.near(score_of(out, 0, {1, 0}), 4.0, "P_1(B,A)");

   const auto forced = signal::run_auction1(model, SignalProfile{{1.0, 10.0}, {2.0, 4.0}});
   c.that(forced.allocation == testing_support::owners({1, 0}), "forced reports did not yield (B,A)");
   c.near(forced.payment[0], 2.5, "payment under (B,A)");

   Instance inst;
   inst.mechanism = Mechanism::auction1;
   inst.model = model;
   for(double a : {-1.0, 0.0, 1.0, 2.5, 4.0}) {
      for(double b : {-2.0, 0.5, 1.0, 3.0, 6.0}) {
         inst.signals = SignalProfile{{a, b}, {2.0, 4.0}};
         const std::string at = " at s_1 = (" + std::to_string(a) + ", " + std::to_string(b) + ")";
         for(double lead : {0.0, 1.0, 3.0}) {
            Bids bids;
            bids.reports = SignalProfile{{lead, lead + 1.0}, {2.0, 4.0}};
            c.near(verify::expected_true_utility(inst, bids, 0), a + 1.0, "utility when A is won" + at);
            bids.reports = SignalProfile{{lead, lead + 2.0}, {2.0, 4.0}};
            c.near(verify::expected_true_utility(inst, bids, 0), b - 0.5, "utility when B is won" + at);
            bids.reports = SignalProfile{{lead, lead + 1.5}, {2.0, 4.0}};
            c.near(verify::expected_true_utility(inst, bids, 0), 0.5 * (a + b) - 0.25,
                   "expected utility on the tie" + at);
         }
      }
   }
   return c;
}

// Three buyers, two goods; buyers 2 and 3 report (2, 2) and (3, 6) truthfully.
Check criterion2()
{
   Check c;
   const auto model = testing_support::three_buyer();
   const auto straight = testing_support::owners({0, 2});
   const auto swapped = testing_support::owners({2, 0});
   const auto without = testing_support::owners({1, 2});
   for(double a = 0.25; a <= 12.0; a += 0.25) {
      for(double b = 0.25; b <= 12.0; b += 0.25) {
         const SignalProfile reports{{a, b}, {2.0, 2.0}, {3.0, 6.0}};
         const auto out = signal::run_auction2(model, reports);
         const auto& optima = out.diagnostics.optima;
         auto has = [&](const Allocation& x) { return std::find(optima.begin(), optima.end(), x) != optima.end(); };
         const std::string at = " at (" + std::to_string(a) + ", " + std::to_string(b) + ")";
         c.that(has(straight) == (a >= std::max(2.0, b - 4.0)), "region (A,-,B)" + at);
         c.that(has(swapped) == (b >= std::max(6.0, a + 4.0)), "region (B,-,A)" + at);
         c.that(has(without) == (a <= 2.0 && b <= 6.0), "region (-,A,B)" + at);

         const auto good = out.allocation.good_of(0);
         if(good == std::optional<Good>(0)) {
            c.near(*out.diagnostics.solved_signal[0], 2.0, "s*_1A" + at);
            c.near(out.payment[0], 4.0, "payment for A" + at);
         } else if(good == std::optional<Good>(1)) {
            c.near(*out.diagnostics.solved_signal[0], 6.0, "s*_1B" + at);
            c.near(out.payment[0], 9.0, "payment for B" + at);
         } else {
            c.near(out.payment[0], 0.0, "payment with nothing won" + at);
         }
      }
   }
   return c;
}

Check sweep(Mechanism mech, verify::SizeBounds bounds)
{
   Check c;
   const auto rep = verify::sweep_random_instances(mech, bounds, 200, 7);
   char buf[160];
   std::snprintf(buf, sizeof buf, "%s: %zu instances, %zu deviations, max gain %.3g", to_string(mech).c_str(),
                 rep.instances_checked, rep.deviations_checked, rep.max_violation);
   c.that(rep.max_violation <= kTol && rep.instances_checked == 200, buf);
   if(c.ok) {
      c.lines.emplace_back(buf);
   }
   return c;
}

Check criterion3()
{
   return sweep(Mechanism::vcg, {3, 2});
}

Check criterion4()
{
   Check c = sweep(Mechanism::auction1, {3, 3});
   const Check d = sweep(Mechanism::auction2, {3, 2});
   c.ok = c.ok && d.ok;
   c.lines.insert(c.lines.end(), d.lines.begin(), d.lines.end());
   return c;
}

Check criterion5()
{
   Check c;
   verify::Sampler sampler(5);
   for(int t = 0; t < 100; ++t) {
      const auto model = sampler.model(3, 3);
      const auto s = sampler.signals(3, 3);
      const auto a1 = signal::run_auction1(model, s);
      const auto a3 = bidfn::run_auction3(bidfn::truthful_bids(model, s));
      c.that(a1.allocation == a3.allocation, "auction3 allocation differs, draw " + std::to_string(t));
      for(Buyer i = 0; i < 3; ++i) {
         c.near(a3.payment[i], a1.payment[i], "auction3 payment, draw " + std::to_string(t));
      }
   }
   for(int t = 0; t < 100; ++t) {
      const auto model = sampler.model(3, 2);
      const auto s = sampler.signals(3, 2);
      const auto a2 = signal::run_auction2(model, s);
      const auto a4 = bidfn::run_auction4(bidfn::truthful_bids(model, s));
      c.that(a2.allocation == a4.allocation, "auction4 allocation differs, draw " + std::to_string(t));
      for(Buyer i = 0; i < 3; ++i) {
         c.near(a4.payment[i], a2.payment[i], "auction4 payment, draw " + std::to_string(t));
      }
   }
   return c;
}

Check criterion6()
{
   Check c;
   for(const char* name : {"vcg-payments", "unit-demand-reduction", "auction1-payment-independence",
                           "auction2-payment-independence", "residual-invariance", "truthful-bid-identity",
                           "system-positivity", "fixed-point"}) {
      for(const auto& rep : verify::run_property_suite(name, 1)) {
         for(const auto& p : rep.properties) {
            c.that(p.passed && p.checked > 0, std::string(name) + " / " + p.name + (p.note.empty() ? "" : ": " + p.note));
         }
      }
   }
   return c;
}

// Grid sweeps and oracle equivalences stand in for the continuous equilibrium statements.
Check criterion7()
{
   Check c;
   for(const auto& part : {criterion3(), criterion4(), criterion5()}) {
      c.ok = c.ok && part.ok;
      if(!part.ok) {
         c.lines.insert(c.lines.end(), part.lines.begin(), part.lines.end());
      }
   }
   c.lines.insert(c.lines.begin(), "equilibrium claims checked as grid best responses (criteria 3, 4) "
                                         "plus truthful-bid reductions (criterion 5)");
   return c;
}

struct Criterion {
   int id;
   double budget_seconds;
   std::function<Check()> run;
};

const std::vector<Criterion>& criteria()
{
   static const std::vector<Criterion> list{{1, 1.0, criterion1},  {2, 1.0, criterion2},  {3, 30.0, criterion3},
                                            {4, 60.0, criterion4}, {5, 60.0, criterion5}, {6, 60.0, criterion6},
                                            {7, 150.0, criterion7}};
   return list;
}

bool run_one(const Criterion& cr)
{
   const auto start = std::chrono::steady_clock::now();
   Check c = cr.run();
   const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
   if(secs >= cr.budget_seconds) {
      c.ok = false;
      c.lines.push_back("runtime over budget");
   }
   std::printf("criterion %d: %s (%.3f s, budget %.0f s)\n", cr.id, c.ok ? "PASS" : "FAIL", secs, cr.budget_seconds);
   const std::size_t shown = std::min<std::size_t>(c.lines.size(), 8);
   for(std::size_t k = 0; k < shown; ++k) {
      std::printf("  %s\n", c.lines[k].c_str());
   }
   if(c.lines.size() > shown) {
      std::printf("  ... %zu more\n", c.lines.size() - shown);
   }
   return c.ok;
}

}  // namespace

int main(int argc, char** argv)
{
   bool all = true;
   if(argc > 1) {
      const int id = std::atoi(argv[1]);
      for(const auto& cr : criteria()) {
         if(cr.id == id) {
            return run_one(cr) ? 0 : 1;
         }
      }
      std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
      return 2;
   }
   for(const auto& cr : criteria()) {
      all = run_one(cr) && all;
   }
   return all ? 0 : 1;
}
