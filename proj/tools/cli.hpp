#pragma once

#include "dofkit/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dofkit::cli {

enum class Command { topology, tdma_search, tdma_canonical, demand_bound, lin_eval, converse_sample, lemma1, sweep };
enum class Format { json, csv };
enum class SchemeSource { canonical, optimal, random, file };

std::string to_string(Command c);

struct ExperimentConfig {
    Command command = Command::topology;
    int K = 0;
    int L = 0;
    Topology::Mode mode = Topology::Mode::cyclic;
    int M = 1;
    int n = 1;
    int trials = 1;
    int realizations = 3;
    std::optional<std::uint64_t> seed;
    std::optional<double> density;
    std::string coherence = "time-varying";
    SchemeSource scheme = SchemeSource::canonical;
    std::string scheme_file;
    std::vector<int> receivers_b;        ///< lemma1 / converse-sample set B; empty means even indices
    std::vector<int> assignment;         ///< demand-bound: explicit t_1..t_K
    std::vector<std::pair<int, int>> edges; ///< topology: hand-built (rx, tx) pairs
    std::vector<int> sweep_L;
    int K_multiple = 1;
    bool with_bound = true;
    std::string output;
    Format format = Format::json;
    bool decimal = false;
    bool strict = false;
};

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kValidationError = 2,
    kResourceLimit = 3,
    kUnstable = 4,
};

/// Bad command line: unknown flag, missing seed, malformed or out-of-cap value.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& what, ExitCode code = kValidationError) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// argv[0] is the program name. Throws UsageError.
ExperimentConfig parse_args(const std::vector<std::string>& argv);

/// Runs the experiment. Results go to `config.output` when set, otherwise to
/// $DOFKIT_OUT_DIR/<command>.<ext> when that variable is set, otherwise to
/// `out`. Diagnostics go to `diag`. Returns an ExitCode.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& diag);

} // namespace dofkit::cli
