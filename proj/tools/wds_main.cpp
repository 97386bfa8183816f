#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wds/harness.hpp"

namespace {

void add_experiment(CLI::App& app, const std::string& name, const std::string& desc,
                    std::vector<std::pair<std::string, wds::ExperimentConfig>>& jobs) {
  auto* sub = app.add_subcommand(name, desc);
  auto config_path = std::make_shared<std::string>();
  auto seed = std::make_shared<std::string>();
  auto out_dir = std::make_shared<std::string>("out");
  sub->add_option("--config", *config_path, "flat key=value experiment file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", *seed, "override the master seed");
  sub->add_option("--out", *out_dir, "output directory");
  sub->callback([&jobs, name, config_path, seed, out_dir] {
    wds::ExperimentConfig cfg = wds::ExperimentConfig::from_file(*config_path, name);
    if (!seed->empty()) cfg.seed = std::stoull(*seed);
    cfg.out_dir = *out_dir;
    jobs.emplace_back(name, std::move(cfg));
  });
}

int fail(const std::string& kind, const std::string& message) {
  nlohmann::json err;
  err["status"] = "error";
  err["kind"] = kind;
  err["message"] = message;
  std::fprintf(stderr, "%s\n", err.dump().c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveform-defined security experiment runner"};
  app.require_subcommand(1);
  std::vector<std::pair<std::string, wds::ExperimentConfig>> jobs;
  add_experiment(app, "ber", "Monte Carlo bit error rate sweep", jobs);
  add_experiment(app, "classify", "train and evaluate the format classifier", jobs);
  add_experiment(app, "mapping-ber", "BER under classifier-driven alpha mapping", jobs);
  add_experiment(app, "complexity", "closed-form operation-count table", jobs);
  add_experiment(app, "gen-dataset", "generate a labeled symbol dataset", jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    return fail("cli", e.what());
  }

  for (auto& [name, cfg] : jobs) {
    try {
      std::string primary = wds::run_experiment(cfg);
      std::printf("%s: wrote %s\n", name.c_str(), primary.c_str());
    } catch (const std::exception& e) {
      return fail(name, e.what());
    }
  }
  return 0;
}
