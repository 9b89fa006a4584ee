// Copyright 2026 The mecafuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mecafuse/harness/commands.h"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "mecafuse/errors.h"

namespace mecafuse::harness {
namespace {

namespace fs = std::filesystem;

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path.string());
  file << contents;
  if (!file) throw Error("failed writing " + path.string());
}

std::string RenderLog(std::span<const TrajectoryRecord> records) {
  std::ostringstream out;
  WriteTrajectoryLog(out, records);
  return out.str();
}

// Writes trajectory.csv, one errors_<estimator>.csv per estimator and
// summary.txt into `dir`. Returns the summary table.
std::string WriteRunOutputs(const fs::path& dir,
                            std::span<const TrajectoryRecord> records) {
  fs::create_directories(dir);
  WriteFile(dir / "trajectory.csv", RenderLog(records));
  const std::vector<EstimatorErrors> report = EvaluateRecords(records);
  for (const EstimatorErrors& e : report) {
    std::ostringstream series;
    WriteErrorSeries(series, e.series);
    WriteFile(dir / fmt::format("errors_{}.csv", EstimatorName(e.estimator)),
              series.str());
  }
  const std::string table = FormatSummaryTable(report);
  WriteFile(dir / "summary.txt", table);
  return table;
}

TrajectoryLog LoadLog(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open log " + path.string());
  return ReadTrajectoryLog(in);
}

// Runs `body`, mapping invalid input to exit code 2 and any other failure
// to exit code 1.
template <typename Body>
int Guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
}

}  // namespace

std::string FormatSummaryTable(std::span<const EstimatorErrors> report) {
  std::string table = fmt::format("{:<10} {:>8} {:>12} {:>12} {:>12}\n",
                                  "estimator", "samples", "max_m", "rmse_m",
                                  "final_m");
  for (const EstimatorErrors& e : report) {
    table += fmt::format("{:<10} {:>8} {:>12.6f} {:>12.6f} {:>12.6f}\n",
                         EstimatorName(e.estimator), e.summary.samples,
                         e.summary.max, e.summary.rmse, e.summary.final);
  }
  return table;
}

std::string FormatMonteCarloTable(std::span<const RunResult> runs) {
  struct Totals {
    std::size_t runs = 0;
    double max = 0.0;
    double rmse = 0.0;
    double final = 0.0;
  };
  std::map<Estimator, Totals> totals;
  for (const RunResult& run : runs) {
    for (const EstimatorErrors& e : EvaluateRecords(run.records)) {
      Totals& t = totals[e.estimator];
      ++t.runs;
      t.max += e.summary.max;
      t.rmse += e.summary.rmse;
      t.final += e.summary.final;
    }
  }
  std::string table = fmt::format("{:<10} {:>8} {:>12} {:>12} {:>12}\n",
                                  "estimator", "runs", "mean_max_m",
                                  "mean_rmse_m", "mean_final_m");
  for (const auto& [estimator, t] : totals) {
    const double n = static_cast<double>(t.runs);
    table += fmt::format("{:<10} {:>8} {:>12.6f} {:>12.6f} {:>12.6f}\n",
                         EstimatorName(estimator), t.runs, t.max / n,
                         t.rmse / n, t.final / n);
  }
  return table;
}

int CmdSimulate(const SimulateOptions& options, std::ostream& out,
                std::ostream& err) {
  ExperimentConfig config;
  if (const int code = Guarded(err, [&] {
        config = LoadConfig(options.config);
        if (options.seed) config.seed = *options.seed;
        if (options.runs) {
          if (*options.runs < 1) throw ConfigError("--runs", "must be >= 1");
          config.runs = *options.runs;
        }
        return kExitOk;
      });
      code != kExitOk) {
    return code;
  }

  try {
    fs::create_directories(options.out_dir);
    WriteFile(options.out_dir / "config.ini", FormatConfig(config));
    const std::vector<RunResult> runs = RunMonteCarlo(config);
    for (const RunResult& run : runs) {
      if (run.fix_solver_failures > 0) {
        err << fmt::format("warning: seed {}: {} IPS fixes dropped after "
                           "trilateration failure\n",
                           run.seed, run.fix_solver_failures);
      }
    }

    if (runs.size() == 1) {
      const std::string table =
          WriteRunOutputs(options.out_dir, runs.front().records);
      out << table;
      return kExitOk;
    }

    std::string per_run = "run,seed,estimator,samples,max_m,rmse_m,final_m\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      WriteRunOutputs(options.out_dir / fmt::format("run_{:04d}", i),
                      runs[i].records);
      for (const EstimatorErrors& e : EvaluateRecords(runs[i].records)) {
        per_run += fmt::format("{},{},{},{},{},{},{}\n", i, runs[i].seed,
                               EstimatorName(e.estimator), e.summary.samples,
                               e.summary.max, e.summary.rmse, e.summary.final);
      }
    }
    WriteFile(options.out_dir / "montecarlo.csv", per_run);
    const std::string table = FormatMonteCarloTable(runs);
    WriteFile(options.out_dir / "summary.txt", table);
    out << table;
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
}

int CmdFuse(const FuseOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  ReplayInput input;
  if (const int code = Guarded(err, [&] {
        config = LoadConfig(options.config);
        input = ReplayInputFromLog(LoadLog(options.input));
        return kExitOk;
      });
      code != kExitOk) {
    return code;
  }
  return Guarded(err, [&] {
    const std::vector<TrajectoryRecord> records =
        RunEstimators(input.events, input.truth, config.filter,
                      config.initial_variance);
    fs::create_directories(options.out_dir);
    WriteFile(options.out_dir / "config.ini", FormatConfig(config));
    out << WriteRunOutputs(options.out_dir, records);
    return kExitOk;
  });
}

int CmdMetrics(const std::filesystem::path& input, std::ostream& out,
               std::ostream& err) {
  return Guarded(err, [&] {
    const TrajectoryLog log = LoadLog(input);
    out << FormatSummaryTable(EvaluateRecords(log.records));
    return kExitOk;
  });
}

}  // namespace mecafuse::harness
