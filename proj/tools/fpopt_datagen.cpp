#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fpopt/io.hpp"
#include "fpopt/synth.hpp"

// Writes the bundled synthetic click stream used by the demo config and the
// acceptance suite. Defaults: ~1,000 domains, ~100k events over 60 days.
int main(int argc, char** argv) {
  CLI::App app{"Synthetic click-stream generator"};

  fpopt::SynthParams params;
  std::string out_path = "synthetic_events.csv";
  std::string start_date = "2021-03-01";
  app.add_option("--out", out_path, "output CSV path");
  app.add_option("--seed", params.seed, "generator seed");
  app.add_option("--day-domains", params.day_domains,
                 "number of day-peaking domains");
  app.add_option("--night-domains", params.night_domains,
                 "number of night-peaking domains");
  app.add_option("--min-clicks", params.min_clicks_per_domain,
                 "minimum clicks per domain");
  app.add_option("--max-clicks", params.max_clicks_per_domain,
                 "maximum clicks per domain");
  app.add_option("--start-date", start_date, "first civil day YYYY-MM-DD");
  app.add_option("--days", params.n_days, "number of days to cover");

  CLI11_PARSE(app, argc, argv);

  const auto day = fpopt::parse_civil_day(start_date);
  if (!day) {
    std::cerr << "error: --start-date: expected YYYY-MM-DD\n";
    return 2;
  }
  params.start_day = *day;

  const auto events = fpopt::generate_events(params);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return 1;
  }
  fpopt::serialize_events(events, out, fpopt::EventFormat::kCsv);
  std::cout << "wrote " << events.size() << " events for "
            << params.day_domains + params.night_domains << " domains to "
            << out_path << '\n';
  return 0;
}
