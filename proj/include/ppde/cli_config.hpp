#ifndef PPDE_CLI_CONFIG_HPP
#define PPDE_CLI_CONFIG_HPP

#include "ppde/serialize.hpp"

namespace ppde {

/// Schema-validated experiment description. The raw objects/numeric blocks
/// are kept as JSON; each command interprets the objects it needs.
struct ExperimentConfig {
  int schema_version = 1;
  std::string command;
  TimeGrid tg;
  SpatialGrid q;
  ojson objects;
  ojson numeric;
  ojson resolved;  // the full validated config, embedded in every report
};

/// Validates the top-level schema: keys exactly {schema_version, command,
/// grid, objects, numeric}, a whitelisted numeric block with a mandatory
/// seed, and positive grid extents. Throws ConfigError with a field path.
ExperimentConfig parse_config(const ojson& j);

ExperimentConfig load_config(const std::string& path);

/// Runs the configured command and writes report.json (always), plus
/// ledger.csv / plotdata.csv / solution.jsonl where applicable.
/// Returns 0 when all checks pass, 1 when a check fails, 2 on
/// precondition or configuration errors (the report then carries an
/// error object instead of a result).
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// `ppde-lab <command> --config path.json [--out dir] [--threads n] [--seed s]`
int run_cli(int argc, char** argv);

}  // namespace ppde

#endif
