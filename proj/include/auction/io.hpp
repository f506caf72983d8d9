#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "auction/mechanism.hpp"
#include "auction/verify.hpp"

// Scenario files and outcome reports.
//
// A scenario is one JSON object:
//
//   mechanism   "vcg" | "auction1" | "auction2" | "auction3" | "auction4" | "dm2"
//   model       {n, m, f_slope, f_intercept?, c, d?}       (omitted for private-value vcg)
//   signals     [[s_i1, ..., s_im], ...]                   (omitted for private-value vcg)
//   valuations  [[{goods, value}, ...] per buyer]          private set values, vcg only
//   bids        {reports | coefficients | subsets | affine, abstain?}
//   tie         "lex" | "random"
//   seed        integer, drives the random tie rule
//   epsilon     comparison tolerance
//   deviator    buyer whose bids deviate; the report then carries its utility gain
//   flip_payment_sign   harness self-test switch
//
// Unknown fields are rejected at every level. Reports are written with sorted keys and every
// real rounded to 12 significant digits.

namespace auction::io {

using nlohmann::json;

inline double round12(double x)
{
   if(!std::isfinite(x)) {
      return x;
   }
   char buf[40];
   std::snprintf(buf, sizeof buf, "%.12g", x);
   return std::stod(buf);
}

inline std::vector<double> round12(std::vector<double> v)
{
   for(double& x : v) {
      x = round12(x);
   }
   return v;
}

// ---------------------------------------------------------------------------
// Reading helpers

namespace detail {

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
   if(!j.is_object()) {
      throw ParseError(where + " must be an object");
   }
   const std::set<std::string> ok(allowed.begin(), allowed.end());
   for(const auto& [key, value] : j.items()) {
      if(!ok.count(key)) {
         throw ParseError("unknown field '" + key + "' in " + where);
      }
   }
}

inline const json& required(const json& j, const char* key, const std::string& where)
{
   if(!j.contains(key)) {
      throw ParseError("missing field '" + std::string(key) + "' in " + where);
   }
   return j.at(key);
}

inline double real(const json& j, const std::string& where)
{
   if(!j.is_number()) {
      throw ParseError(where + " must be a number");
   }
   return j.get<double>();
}

inline std::size_t index(const json& j, const std::string& where)
{
   if(!j.is_number_integer() || j.get<long long>() < 0) {
      throw ParseError(where + " must be a nonnegative integer");
   }
   return j.get<std::size_t>();
}

inline std::vector<double> reals(const json& j, const std::string& where)
{
   if(!j.is_array()) {
      throw ParseError(where + " must be an array");
   }
   std::vector<double> out;
   for(std::size_t k = 0; k < j.size(); ++k) {
      out.push_back(real(j[k], where + "[" + std::to_string(k) + "]"));
   }
   return out;
}

inline Matrix matrix(const json& j, const std::string& where)
{
   if(!j.is_array() || j.empty()) {
      throw ParseError(where + " must be a nonempty array of rows");
   }
   std::vector<std::vector<double>> rows;
   for(std::size_t r = 0; r < j.size(); ++r) {
      rows.push_back(reals(j[r], where + "[" + std::to_string(r) + "]"));
   }
   const std::size_t cols = rows.front().size();
   Matrix out(rows.size(), cols);
   for(std::size_t r = 0; r < rows.size(); ++r) {
      if(rows[r].size() != cols) {
         throw ShapeError(where + " has rows of different lengths");
      }
      out.set_row(r, rows[r]);
   }
   return out;
}

inline json matrix_json(const Matrix& m)
{
   json out = json::array();
   for(std::size_t r = 0; r < m.rows(); ++r) {
      out.push_back(m.row(r));
   }
   return out;
}

}  // namespace detail

inline LinearValuationModel model_from_json(const json& j)
{
   detail::only_keys(j, {"n", "m", "f_slope", "f_intercept", "c", "d"}, "model");
   LinearValuationModel model;
   model.n = detail::index(detail::required(j, "n", "model"), "model.n");
   model.m = detail::index(detail::required(j, "m", "model"), "model.m");
   model.f_slope = detail::reals(detail::required(j, "f_slope", "model"), "model.f_slope");
   model.c = detail::reals(detail::required(j, "c", "model"), "model.c");
   model.f_intercept = j.contains("f_intercept") ? detail::reals(j["f_intercept"], "model.f_intercept")
                                                 : std::vector<double>(model.n, 0.0);
   model.d = j.contains("d") ? detail::reals(j["d"], "model.d") : std::vector<double>(model.n, 0.0);
   return model;
}

inline json model_to_json(const LinearValuationModel& model)
{
   return json{{"n", model.n},
               {"m", model.m},
               {"f_slope", model.f_slope},
               {"f_intercept", model.f_intercept},
               {"c", model.c},
               {"d", model.d}};
}

inline vcg::SubsetBids subsets_from_json(const json& j, std::size_t goods, const std::string& where)
{
   if(!j.is_array() || j.empty()) {
      throw ParseError(where + " must be a nonempty array (one list per buyer)");
   }
   if(goods == 0 || goods > kMaxPartitionGoods) {
      throw ShapeError(where + ": goods count out of range");
   }
   vcg::SubsetBids out(j.size(), goods);
   for(std::size_t i = 0; i < j.size(); ++i) {
      const std::string who = where + "[" + std::to_string(i) + "]";
      if(!j[i].is_array()) {
         throw ParseError(who + " must be an array of {goods, value}");
      }
      for(const auto& entry : j[i]) {
         detail::only_keys(entry, {"goods", "value"}, who);
         const auto& list = detail::required(entry, "goods", who);
         if(!list.is_array()) {
            throw ParseError(who + ".goods must be an array");
         }
         std::uint32_t mask = 0;
         for(const auto& g : list) {
            const std::size_t k = detail::index(g, who + ".goods");
            if(k >= goods) {
               throw ShapeError(who + " names good " + std::to_string(k) + " out of range");
            }
            mask |= (1u << k);
         }
         const double value = detail::real(detail::required(entry, "value", who), who + ".value");
         if(mask == 0) {
            if(value != 0.0) {
               throw ShapeError(who + ": the empty set is always worth 0");
            }
            continue;
         }
         out.bid[i][mask] = value;
      }
   }
   return out;
}

inline json subsets_to_json(const vcg::SubsetBids& bids)
{
   json out = json::array();
   for(std::size_t i = 0; i < bids.buyers(); ++i) {
      json list = json::array();
      for(std::uint32_t mask = 1; mask < bids.bid[i].size(); ++mask) {
         json goods = json::array();
         for(Good k = 0; k < bids.goods; ++k) {
            if(mask & (1u << k)) {
               goods.push_back(k);
            }
         }
         list.push_back({{"goods", goods}, {"value", bids.bid[i][mask]}});
      }
      out.push_back(list);
   }
   return out;
}

/// Goods count of a subset-valuation list: one past the highest good named, at least 1.
inline std::size_t infer_goods(const json& j)
{
   std::size_t goods = 1;
   if(j.is_array()) {
      for(const auto& buyer : j) {
         if(!buyer.is_array()) {
            continue;
         }
         for(const auto& entry : buyer) {
            if(entry.is_object() && entry.contains("goods") && entry["goods"].is_array()) {
               for(const auto& g : entry["goods"]) {
                  if(g.is_number_integer() && g.get<long long>() >= 0) {
                     goods = std::max(goods, g.get<std::size_t>() + 1);
                  }
               }
            }
         }
      }
   }
   return goods;
}

// ---------------------------------------------------------------------------
// Scenario

struct Scenario {
   Instance instance;
   std::optional<Bids> bids;
   std::string tie = "lex";
   std::uint64_t seed = 0;
   double epsilon = kDefaultEpsilon;
   std::optional<Buyer> deviator;
   bool flip_payment_sign = false;

   [[nodiscard]] TieRule tie_rule() const
   {
      return tie == "random" ? TieRule::seeded_uniform(seed) : TieRule::lexicographic();
   }
};

inline Bids bids_from_json(const json& j, const Instance& inst)
{
   detail::only_keys(j, {"reports", "coefficients", "subsets", "affine", "abstain"}, "bids");
   Bids bids;
   int forms = 0;
   if(j.contains("reports")) {
      bids.reports = detail::matrix(j["reports"], "bids.reports");
      ++forms;
   }
   if(j.contains("coefficients")) {
      const auto& list = j["coefficients"];
      if(!list.is_array() || list.empty()) {
         throw ParseError("bids.coefficients must be a nonempty array (one matrix per good)");
      }
      bidfn::BidProfile profile;
      for(std::size_t a = 0; a < list.size(); ++a) {
         profile.coeff.push_back(detail::matrix(list[a], "bids.coefficients[" + std::to_string(a) + "]"));
      }
      bids.coefficients = std::move(profile);
      ++forms;
   }
   if(j.contains("subsets")) {
      bids.subsets = subsets_from_json(j["subsets"], inst.goods(), "bids.subsets");
      ++forms;
   }
   if(j.contains("affine")) {
      const auto& list = j["affine"];
      if(!list.is_array() || list.size() != 2) {
         throw ShapeError("bids.affine needs exactly two bid functions");
      }
      std::array<bidfn::AffineBid, 2> pair{};
      for(std::size_t k = 0; k < 2; ++k) {
         const std::string where = "bids.affine[" + std::to_string(k) + "]";
         detail::only_keys(list[k], {"intercept", "slope"}, where);
         pair[k].intercept = detail::real(detail::required(list[k], "intercept", where), where);
         pair[k].slope = detail::real(detail::required(list[k], "slope", where), where);
      }
      bids.affine = pair;
      ++forms;
   }
   if(forms != 1) {
      throw ParseError("bids must hold exactly one of reports, coefficients, subsets, affine");
   }
   if(j.contains("abstain")) {
      bids.abstain = detail::index(j["abstain"], "bids.abstain");
   }
   return bids;
}

inline json bids_to_json(const Bids& bids)
{
   json out = json::object();
   if(bids.reports) {
      out["reports"] = detail::matrix_json(*bids.reports);
   }
   if(bids.coefficients) {
      json list = json::array();
      for(const auto& x : bids.coefficients->coeff) {
         list.push_back(detail::matrix_json(x));
      }
      out["coefficients"] = list;
   }
   if(bids.subsets) {
      out["subsets"] = subsets_to_json(*bids.subsets);
   }
   if(bids.affine) {
      json list = json::array();
      for(const auto& b : *bids.affine) {
         list.push_back({{"intercept", b.intercept}, {"slope", b.slope}});
      }
      out["affine"] = list;
   }
   if(bids.abstain) {
      out["abstain"] = *bids.abstain;
   }
   return out;
}

inline Scenario scenario_from_json(const json& j)
{
   detail::only_keys(j,
                     {"mechanism", "model", "signals", "valuations", "bids", "tie", "seed", "epsilon",
                      "deviator", "flip_payment_sign"},
                     "scenario");
   Scenario sc;
   const auto& mech = detail::required(j, "mechanism", "scenario");
   if(!mech.is_string()) {
      throw ParseError("mechanism must be a string");
   }
   const auto parsed = parse_mechanism(mech.get<std::string>());
   if(!parsed) {
      throw ParseError("unknown mechanism '" + mech.get<std::string>() + "'");
   }
   sc.instance.mechanism = *parsed;

   if(j.contains("valuations")) {
      if(j.contains("model") || j.contains("signals")) {
         throw ParseError("valuations replace model and signals; give one or the other");
      }
      sc.instance.valuations = subsets_from_json(j["valuations"], infer_goods(j["valuations"]), "valuations");
   } else {
      sc.instance.model = model_from_json(detail::required(j, "model", "scenario"));
      sc.instance.signals = detail::matrix(detail::required(j, "signals", "scenario"), "signals");
   }
   if(j.contains("tie")) {
      if(!j["tie"].is_string() || (j["tie"] != "lex" && j["tie"] != "random")) {
         throw ParseError("tie must be \"lex\" or \"random\"");
      }
      sc.tie = j["tie"].get<std::string>();
   }
   if(j.contains("seed")) {
      sc.seed = detail::index(j["seed"], "seed");
   }
   if(j.contains("epsilon")) {
      sc.epsilon = detail::real(j["epsilon"], "epsilon");
      if(!(sc.epsilon >= 0.0) || !std::isfinite(sc.epsilon)) {
         throw ParseError("epsilon must be a finite nonnegative number");
      }
   }
   if(j.contains("deviator")) {
      sc.deviator = detail::index(j["deviator"], "deviator");
   }
   if(j.contains("flip_payment_sign")) {
      if(!j["flip_payment_sign"].is_boolean()) {
         throw ParseError("flip_payment_sign must be a boolean");
      }
      sc.flip_payment_sign = j["flip_payment_sign"].get<bool>();
   }
   check_instance_shape(sc.instance);
   if(j.contains("bids")) {
      sc.bids = bids_from_json(j["bids"], sc.instance);
   }
   return sc;
}

inline json scenario_to_json(const Scenario& sc)
{
   json out{{"mechanism", to_string(sc.instance.mechanism)},
            {"tie", sc.tie},
            {"seed", sc.seed},
            {"epsilon", sc.epsilon}};
   if(sc.instance.valuations) {
      out["valuations"] = subsets_to_json(*sc.instance.valuations);
   } else {
      out["model"] = model_to_json(sc.instance.model);
      out["signals"] = detail::matrix_json(sc.instance.signals);
   }
   if(sc.bids) {
      out["bids"] = bids_to_json(*sc.bids);
   }
   if(sc.deviator) {
      out["deviator"] = *sc.deviator;
   }
   if(sc.flip_payment_sign) {
      out["flip_payment_sign"] = true;
   }
   return out;
}

inline json parse_text(const std::string& text)
{
   try {
      return json::parse(text);
   } catch(const json::exception& e) {
      throw ParseError(std::string("malformed scenario: ") + e.what());
   }
}

inline Scenario load_scenario(const std::string& path)
{
   std::ifstream in(path);
   if(!in) {
      throw ParseError("cannot open scenario file " + path);
   }
   std::stringstream buf;
   buf << in.rdbuf();
   try {
      return scenario_from_json(parse_text(buf.str()));
   } catch(const json::exception& e) {
      throw ParseError(std::string("bad scenario field: ") + e.what());
   }
}

// ---------------------------------------------------------------------------
// Outcome report

struct DeviationSummary {
   Buyer buyer = 0;
   double truthful_utility = 0.0;
   double deviation_utility = 0.0;
   double gain = 0.0;

   bool operator==(const DeviationSummary&) const = default;
};

struct OutcomeReport {
   std::string mechanism;
   std::vector<std::optional<Buyer>> allocation;
   std::vector<double> payments;
   std::vector<double> utilities;
   double welfare = 0.0;
   Diagnostics diagnostics;
   std::vector<std::string> warnings;
   std::optional<DeviationSummary> deviation;

   bool operator==(const OutcomeReport&) const = default;
};

inline Diagnostics rounded(Diagnostics d)
{
   for(auto& row : d.payment_table) {
      row = round12(row);
   }
   for(auto& row : d.fixed_points) {
      row = round12(row);
   }
   d.c_prime = round12(d.c_prime);
   for(auto* list : {&d.solved_signal, &d.solved_diagonal}) {
      for(auto& x : *list) {
         if(x) {
            x = round12(*x);
         }
      }
   }
   return d;
}

/// Runs a scenario end to end: synthesizes truthful bids when none are given, validates
/// the model, runs the mechanism, and settles utilities against the true signals.
inline OutcomeReport run_scenario(const Scenario& sc)
{
   const Instance& inst = sc.instance;
   check_instance_shape(inst);
   std::vector<std::string> warnings;
   if(!inst.valuations) {
      const auto report = validate_model(inst.model, inst.signals);
      if(!report.valid()) {
         std::string text;
         for(const auto& e : report.errors) {
            text += (text.empty() ? "" : "; ") + e.message;
         }
         throw ValidationError(text);
      }
      for(const auto& w : report.warnings) {
         warnings.push_back(w.message);
      }
   }
   const Bids bids = sc.bids ? *sc.bids : truthful_bids(inst);
   if(bids.abstain && *bids.abstain >= inst.buyers()) {
      throw ShapeError("abstaining buyer out of range");
   }
   AuctionOutcome out = run_mechanism(inst, bids, sc.tie_rule(), sc.epsilon);
   if(sc.flip_payment_sign) {
      for(double& p : out.payment) {
         p = -p;
      }
   }
   settle(inst, out);

   OutcomeReport rep;
   rep.mechanism = to_string(inst.mechanism);
   rep.allocation = out.allocation.assigned;
   rep.payments = round12(out.payment);
   rep.utilities = round12(out.utility);
   rep.welfare = round12(out.welfare);
   rep.diagnostics = rounded(out.diagnostics);
   rep.warnings = warnings;

   if(sc.deviator) {
      if(*sc.deviator >= inst.buyers()) {
         throw ShapeError("deviator out of range");
      }
      const verify::VerifyOptions opts{sc.epsilon, sc.flip_payment_sign};
      DeviationSummary dev;
      dev.buyer = *sc.deviator;
      dev.truthful_utility = verify::expected_true_utility(inst, truthful_bids(inst), dev.buyer, opts);
      dev.deviation_utility = verify::expected_true_utility(inst, bids, dev.buyer, opts);
      dev.gain = round12(dev.deviation_utility - dev.truthful_utility);
      dev.truthful_utility = round12(dev.truthful_utility);
      dev.deviation_utility = round12(dev.deviation_utility);
      rep.deviation = dev;
   }
   return rep;
}

// --- report JSON

inline json allocation_json(const std::vector<std::optional<Buyer>>& a)
{
   json out = json::array();
   for(const auto& owner : a) {
      out.push_back(owner ? json(*owner) : json(nullptr));
   }
   return out;
}

inline std::vector<std::optional<Buyer>> allocation_from(const json& j)
{
   std::vector<std::optional<Buyer>> out;
   for(const auto& x : j) {
      out.push_back(x.is_null() ? std::nullopt : std::optional<Buyer>(x.get<Buyer>()));
   }
   return out;
}

inline json optional_reals_json(const std::vector<std::optional<double>>& v)
{
   json out = json::array();
   for(const auto& x : v) {
      out.push_back(x ? json(*x) : json(nullptr));
   }
   return out;
}

inline std::vector<std::optional<double>> optional_reals_from(const json& j)
{
   std::vector<std::optional<double>> out;
   for(const auto& x : j) {
      out.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
   }
   return out;
}

inline json diagnostics_json(const Diagnostics& d)
{
   json optima = json::array();
   for(const auto& a : d.optima) {
      optima.push_back(allocation_json(a.assigned));
   }
   json residual = json::array();
   for(const auto& a : d.residual) {
      residual.push_back(a ? allocation_json(a->assigned) : json(nullptr));
   }
   return json{{"optima", optima},
               {"selected_optimum", d.selected_optimum},
               {"permutations", d.permutations},
               {"payment_table", d.payment_table},
               {"fixed_points", d.fixed_points},
               {"c_prime", d.c_prime},
               {"solved_signal", optional_reals_json(d.solved_signal)},
               {"solved_diagonal", optional_reals_json(d.solved_diagonal)},
               {"residual", residual},
               {"rejected", d.rejected},
               {"violations", d.violations}};
}

inline Diagnostics diagnostics_from(const json& j)
{
   Diagnostics d;
   for(const auto& a : j.at("optima")) {
      Allocation alloc;
      alloc.assigned = allocation_from(a);
      d.optima.push_back(alloc);
   }
   d.selected_optimum = j.at("selected_optimum").get<std::size_t>();
   d.permutations = j.at("permutations").get<std::vector<std::vector<Good>>>();
   d.payment_table = j.at("payment_table").get<std::vector<std::vector<double>>>();
   d.fixed_points = j.at("fixed_points").get<std::vector<std::vector<double>>>();
   d.c_prime = j.at("c_prime").get<std::vector<double>>();
   d.solved_signal = optional_reals_from(j.at("solved_signal"));
   d.solved_diagonal = optional_reals_from(j.at("solved_diagonal"));
   for(const auto& a : j.at("residual")) {
      if(a.is_null()) {
         d.residual.push_back(std::nullopt);
      } else {
         Allocation alloc;
         alloc.assigned = allocation_from(a);
         d.residual.push_back(alloc);
      }
   }
   d.rejected = j.at("rejected").get<bool>();
   d.violations = j.at("violations").get<std::vector<std::string>>();
   return d;
}

inline json report_to_json(const OutcomeReport& r)
{
   json out{{"mechanism", r.mechanism},
            {"allocation", allocation_json(r.allocation)},
            {"payments", r.payments},
            {"utilities", r.utilities},
            {"welfare", r.welfare},
            {"diagnostics", diagnostics_json(r.diagnostics)},
            {"warnings", r.warnings}};
   if(r.deviation) {
      out["deviation"] = {{"buyer", r.deviation->buyer},
                          {"truthful_utility", r.deviation->truthful_utility},
                          {"deviation_utility", r.deviation->deviation_utility},
                          {"gain", r.deviation->gain}};
   }
   return out;
}

inline OutcomeReport report_from_json(const json& j)
{
   OutcomeReport r;
   r.mechanism = j.at("mechanism").get<std::string>();
   r.allocation = allocation_from(j.at("allocation"));
   r.payments = j.at("payments").get<std::vector<double>>();
   r.utilities = j.at("utilities").get<std::vector<double>>();
   r.welfare = j.at("welfare").get<double>();
   r.diagnostics = diagnostics_from(j.at("diagnostics"));
   r.warnings = j.at("warnings").get<std::vector<std::string>>();
   if(j.contains("deviation")) {
      const auto& d = j["deviation"];
      r.deviation = DeviationSummary{d.at("buyer").get<Buyer>(), d.at("truthful_utility").get<double>(),
                                     d.at("deviation_utility").get<double>(), d.at("gain").get<double>()};
   }
   return r;
}

// --- text rendering

inline std::string fmt(double x)
{
   char buf[40];
   std::snprintf(buf, sizeof buf, "%.12g", x);
   return buf;
}

inline std::string allocation_text(const std::vector<std::optional<Buyer>>& a)
{
   std::string text;
   for(Good k = 0; k < a.size(); ++k) {
      text += (k ? ", " : "") + std::string("good ") + std::to_string(k) + " -> " +
              (a[k] ? "buyer " + std::to_string(*a[k]) : std::string("unassigned"));
   }
   return text;
}

inline std::string report_to_text(const OutcomeReport& r)
{
   std::ostringstream out;
   out << "mechanism: " << r.mechanism << "\n";
   out << "allocation: " << allocation_text(r.allocation) << "\n";
   if(r.diagnostics.rejected) {
      out << "bids rejected, nothing traded\n";
      for(const auto& v : r.diagnostics.violations) {
         out << "  violation: " << v << "\n";
      }
   }
   for(Buyer i = 0; i < r.payments.size(); ++i) {
      out << "buyer " << i << ": payment " << fmt(r.payments[i]) << ", utility " << fmt(r.utilities[i])
          << "\n";
   }
   out << "welfare: " << fmt(r.welfare) << "\n";
   const auto& d = r.diagnostics;
   if(!d.payment_table.empty()) {
      out << "score table:\n";
      for(std::size_t p = 0; p < d.permutations.size(); ++p) {
         out << "  buyer->good (";
         for(std::size_t i = 0; i < d.permutations[p].size(); ++i) {
            out << (i ? " " : "") << d.permutations[p][i];
         }
         out << "):";
         for(const auto& row : d.payment_table) {
            out << " " << fmt(row[p]);
         }
         out << "\n";
      }
   }
   for(std::size_t a = 0; a < d.fixed_points.size(); ++a) {
      out << "fixed point, good " << a << ":";
      for(double v : d.fixed_points[a]) {
         out << " " << fmt(v);
      }
      out << "\n";
   }
   for(Buyer i = 0; i < d.solved_signal.size(); ++i) {
      if(d.solved_signal[i]) {
         out << "buyer " << i << " indifference signal: " << fmt(*d.solved_signal[i]) << "\n";
      }
   }
   for(Buyer i = 0; i < d.solved_diagonal.size(); ++i) {
      if(d.solved_diagonal[i]) {
         out << "buyer " << i << " indifference diagonal: " << fmt(*d.solved_diagonal[i]) << "\n";
      }
   }
   for(const auto& w : r.warnings) {
      out << "warning: " << w << "\n";
   }
   if(r.deviation) {
      out << "deviation by buyer " << r.deviation->buyer << ": truthful utility "
          << fmt(r.deviation->truthful_utility) << ", deviation utility "
          << fmt(r.deviation->deviation_utility) << ", gain " << fmt(r.deviation->gain) << "\n";
   }
   return out.str();
}

// ---------------------------------------------------------------------------
// Verification reports

/// A scenario that replays a worst case: true signals, the deviating bids, and the deviator.
inline Scenario reproducer(const verify::WorstCase& w, const verify::VerifyOptions& opts)
{
   Scenario sc;
   sc.instance = w.instance;
   sc.bids = w.bids;
   sc.deviator = w.buyer;
   sc.epsilon = opts.eps;
   sc.flip_payment_sign = opts.flip_payment_sign;
   return sc;
}

inline json equilibrium_to_json(const verify::EquilibriumReport& r, const verify::VerifyOptions& opts)
{
   json out{{"mechanism", to_string(r.mechanism)},
            {"instances_checked", r.instances_checked},
            {"deviations_checked", r.deviations_checked},
            {"max_violation", round12(r.max_violation)},
            {"passed", r.passed(opts.eps)}};
   if(r.worst_case) {
      out["worst_case"] = {{"buyer", r.worst_case->buyer},
                           {"deviation", r.worst_case->deviation},
                           {"truthful_utility", round12(r.worst_case->truthful_utility)},
                           {"deviation_utility", round12(r.worst_case->deviation_utility)},
                           {"scenario", scenario_to_json(reproducer(*r.worst_case, opts))}};
   }
   return out;
}

inline json suites_to_json(const std::vector<verify::SuiteReport>& reports)
{
   json list = json::array();
   bool all = true;
   for(const auto& s : reports) {
      json props = json::array();
      for(const auto& p : s.properties) {
         json entry{{"name", p.name}, {"passed", p.passed}, {"checked", p.checked}, {"worst", round12(p.worst)}};
         if(!p.note.empty()) {
            entry["note"] = p.note;
         }
         props.push_back(entry);
      }
      list.push_back({{"suite", s.suite}, {"passed", s.passed()}, {"properties", props}});
      all = all && s.passed();
   }
   return json{{"passed", all}, {"suites", list}};
}

}  // namespace auction::io
