#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "auction/io.hpp"
#include "auction/verify.hpp"

namespace {

enum ExitCode : int {
   kOk = 0,
   kViolation = 1,
   kParse = 2,
   kShape = 3,
   kValidation = 4,
};

using auction::io::json;

int report_error(const std::string& kind, const std::string& message, int code)
{
   const json err{{"error", {{"kind", kind}, {"message", message}}}};
   std::cerr << err.dump(2) << "\n";
   return code;
}

template <typename Fn>
int guarded(Fn&& fn)
{
   try {
      return fn();
   } catch(const auction::ParseError& e) {
      return report_error("parse", e.what(), kParse);
   } catch(const json::exception& e) {
      return report_error("parse", e.what(), kParse);
   } catch(const auction::ShapeError& e) {
      return report_error("shape", e.what(), kShape);
   } catch(const auction::SizeGuardError& e) {
      return report_error("shape", e.what(), kShape);
   } catch(const auction::ValidationError& e) {
      return report_error("validation", e.what(), kValidation);
   } catch(const auction::SingularSystemError& e) {
      return report_error("validation", e.what(), kValidation);
   }
}

int cmd_run(const std::string& path, const std::string& format)
{
   return guarded([&] {
      const auto scenario = auction::io::load_scenario(path);
      const auto report = auction::io::run_scenario(scenario);
      if(format == "text") {
         std::cout << auction::io::report_to_text(report);
      } else {
         std::cout << auction::io::report_to_json(report).dump(2) << "\n";
      }
      return int{kOk};
   });
}

struct VerifyArgs {
   std::string mechanism;
   std::size_t count = 100;
   std::uint64_t seed = 1;
   std::size_t n = 0;
   std::size_t m = 0;
   std::string format = "json";
   std::string dump = "reproducer.json";
   std::string grid = "joint";
   bool flip_payment_sign = false;
};

int cmd_verify(const VerifyArgs& args)
{
   return guarded([&] {
      const auto mech = auction::parse_mechanism(args.mechanism);
      if(!mech) {
         throw auction::ShapeError("unknown mechanism '" + args.mechanism + "'");
      }
      auto bounds = auction::verify::default_bounds(*mech);
      if(args.n) {
         bounds.n = args.n;
      }
      if(args.m) {
         bounds.m = args.m;
      }
      auction::verify::DeviationGrid grid;
      grid.mode = args.grid == "per-coordinate" ? auction::verify::DeviationGrid::Mode::per_coordinate
                                                : auction::verify::DeviationGrid::Mode::joint;
      const auction::verify::VerifyOptions opts{auction::kDefaultEpsilon, args.flip_payment_sign};
      const auto report = auction::verify::sweep_random_instances(*mech, bounds, args.count, args.seed, grid, opts);
      const bool ok = report.passed(opts.eps);
      if(args.format == "text") {
         std::cout << args.mechanism << ": " << report.instances_checked << " instances, "
                   << report.deviations_checked << " deviations, max violation "
                   << auction::io::fmt(report.max_violation) << (ok ? " PASS" : " FAIL") << "\n";
      } else {
         std::cout << auction::io::equilibrium_to_json(report, opts).dump(2) << "\n";
      }
      if(!ok && report.worst_case) {
         const auto sc = auction::io::reproducer(*report.worst_case, opts);
         std::ofstream out(args.dump);
         out << auction::io::scenario_to_json(sc).dump(2) << "\n";
         std::cerr << "violation reproducer written to " << args.dump << "\n";
      }
      return ok ? int{kOk} : int{kViolation};
   });
}

int cmd_properties(const std::string& suite, std::uint64_t seed, const std::string& format)
{
   if(!auction::verify::resolve_suite(suite)) {
      std::string known;
      for(const auto& [name, fn] : auction::verify::suite_registry()) {
         known += " " + name;
      }
      for(const auto& [alias, name] : auction::verify::suite_aliases()) {
         known += " " + alias;
      }
      return report_error("shape", "unknown suite '" + suite + "'; known: all" + known, kShape);
   }
   return guarded([&] {
      const auto reports = auction::verify::run_property_suite(suite, seed);
      const auto doc = auction::io::suites_to_json(reports);
      if(format == "text") {
         for(const auto& s : reports) {
            std::cout << s.suite << ": " << (s.passed() ? "PASS" : "FAIL") << "\n";
            for(const auto& p : s.properties) {
               std::cout << "  " << (p.passed ? "pass" : "FAIL") << "  " << p.name << " (" << p.checked
                         << " checks, worst " << auction::io::fmt(p.worst) << ")"
                         << (p.note.empty() ? "" : " " + p.note) << "\n";
            }
         }
      } else {
         std::cout << doc.dump(2) << "\n";
      }
      return doc["passed"].get<bool>() ? int{kOk} : int{kViolation};
   });
}

}  // namespace

int main(int argc, char** argv)
{
   CLI::App app{"Efficient auction engine: run scenarios, sweep equilibria, check properties"};
   app.require_subcommand(1);

   std::string run_path;
   std::string run_format = "json";
   auto* run = app.add_subcommand("run", "Run a scenario file and print the outcome report");
   run->add_option("file", run_path, "Scenario file")->required();
   run->add_option("--format", run_format, "Output format")->check(CLI::IsMember({"json", "text"}));

   VerifyArgs va;
   auto* verify = app.add_subcommand("verify", "Random best-response sweep for one mechanism");
   verify->add_option("mechanism", va.mechanism, "vcg, auction1, auction2, auction3, auction4 or dm2")->required();
   verify->add_option("--count", va.count, "Number of random instances");
   verify->add_option("--seed", va.seed, "Random seed");
   verify->add_option("--n", va.n, "Buyers (upper bound for vcg)");
   verify->add_option("--m", va.m, "Goods (upper bound for vcg)");
   verify->add_option("--format", va.format, "Output format")->check(CLI::IsMember({"json", "text"}));
   verify->add_option("--dump", va.dump, "Where to write the reproducer on a violation");
   verify->add_option("--grid", va.grid, "Deviation grid mode")
      ->check(CLI::IsMember({"joint", "per-coordinate"}));
   verify->add_flag("--flip-payment-sign", va.flip_payment_sign, "Harness self-test: negate payments");

   std::string suite;
   std::uint64_t suite_seed = 1;
   std::string suite_format = "text";
   auto* props = app.add_subcommand("properties", "Run a named property suite (or all)");
   props->add_option("suite", suite, "Suite name")->required();
   props->add_option("--seed", suite_seed, "Random seed");
   props->add_option("--format", suite_format, "Output format")->check(CLI::IsMember({"json", "text"}));

   try {
      app.parse(argc, argv);
   } catch(const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : kParse;
   }

   if(*run) {
      return cmd_run(run_path, run_format);
   }
   if(*verify) {
      return cmd_verify(va);
   }
   return cmd_properties(suite, suite_seed, suite_format);
}
