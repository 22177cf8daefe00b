#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fpopt/errors.hpp"
#include "fpopt/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string day_text;
};

std::optional<std::int32_t> parse_day_arg(const std::string& text) {
  if (text.empty()) {
    return std::nullopt;
  }
  const auto day = fpopt::parse_civil_day(text);
  if (!day) {
    throw fpopt::ConfigError("--day: cannot parse \"" + text +
                             "\" (expected YYYY-MM-DD)");
  }
  return day;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic-fingerprint dayparting pipeline"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string subcommand;
  for (const char* name :
       {"ingest", "train", "rules", "assign", "simulate", "report", "daily"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "pipeline config file")
        ->required();
    sub->add_option("--day", args.day_text, "civil day YYYY-MM-DD");
    sub->callback([&subcommand, name] { subcommand = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const fpopt::PipelineConfig config = fpopt::load_config(args.config_path);
    const auto day = parse_day_arg(args.day_text);
    if (subcommand == "ingest") {
      fpopt::pipeline::cmd_ingest(config, std::cout);
    } else if (subcommand == "train") {
      fpopt::pipeline::cmd_train(config, std::cout);
    } else if (subcommand == "rules") {
      fpopt::pipeline::cmd_rules(config, std::cout);
    } else if (subcommand == "assign") {
      fpopt::pipeline::cmd_assign(config, day, std::cout);
    } else if (subcommand == "simulate") {
      fpopt::pipeline::cmd_simulate(config, std::cout);
    } else if (subcommand == "report") {
      fpopt::pipeline::cmd_report(config, std::cout);
    } else if (subcommand == "daily") {
      fpopt::pipeline::cmd_daily(config, day, std::cout);
    }
  } catch (const fpopt::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
