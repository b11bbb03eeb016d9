#pragma once
// Command-line front end. Each subcommand is reachable through run_cli so the
// test-suite can drive it in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordsoft/json_io.hpp"
#include "ordsoft/protocol.hpp"

namespace ordsoft::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Bad flags or an invalid parameter combination (exit code 1).
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Second task of a joint sweep: same features, another grading axis.
struct JointTask {
    std::string task;
    std::filesystem::path dataset;
    int classes = 0;
};

struct ExperimentConfig {
    std::string task = "task";
    std::filesystem::path dataset;
    int classes = 0;  // 0: inferred from the labels
    std::vector<Strategy> strategies;
    SearchSpace space;
    TrainConfig base;
    int n_seeds = 20;
    std::uint64_t root_seed = 0;
    double train_fraction = 0.7;
    double validation_fraction = 0.3;
    std::filesystem::path output_dir = "results";
    std::optional<JointTask> joint;

    void validate() const;
};

// Relative dataset paths resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const io::json& j, const std::filesystem::path& base_dir = {});
io::json to_json(const ExperimentConfig& c);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// One record per line, in the order given.
std::string to_jsonl(const std::vector<RunResult>& runs);
std::vector<RunResult> read_jsonl(const std::filesystem::path& path);

// Summary document for a list of records.
io::json summary_json(const std::vector<RunResult>& runs);

// Analysis of predicted contingency tables named <strategy>_seed<N>.csv.
io::json analyze_tables(const joint::ContingencyTable& truth, const std::vector<std::filesystem::path>& predicted,
                        double epsilon);

// Parses and runs one command line; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordsoft::cli
