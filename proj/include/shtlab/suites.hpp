#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shtlab/check.hpp"
#include "shtlab/config.hpp"
#include "shtlab/grids.hpp"
#include "shtlab/lattice.hpp"
#include "shtlab/selfimprove.hpp"
#include "shtlab/space.hpp"

namespace shtlab {

inline constexpr const char* kLibraryVersion = "shtlab 1.0.0";

/// Columns of numbers for external plotting.
struct PlotTable {
    std::string name;  // file stem, e.g. "r_sweep"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunResult {
    SuiteReport report;
    std::vector<PlotTable> plots;
};

/// Space, grid system and lattice for one run, plus the operator-norm
/// estimates and self-improvement parameters computed on first use.
class RunContext {
public:
    explicit RunContext(RunConfig config);

    const RunConfig& config() const noexcept { return config_; }
    const Space& space() const noexcept { return space_; }
    const AdjacentGridSystem& system() const noexcept { return system_; }
    const ExponentFunction& exponent() const noexcept { return p_; }
    const Lattice& lattice() const noexcept { return lattice_; }

    const NormEstimate& norm_md();
    const NormEstimate& norm_m();
    const SelfImprovementParams& params();

    /// Seeded sample families; each draws from its own stream.
    std::vector<Sample> indicators() const;
    std::vector<Sample> random_functions(std::size_t count, std::uint64_t stream) const;
    std::vector<Sample> rdf_weights(std::size_t count, double epsilon) const;

private:
    RunConfig config_;
    Space space_;
    AdjacentGridSystem system_;
    ExponentFunction p_;
    Lattice lattice_;
    std::optional<NormEstimate> norm_md_;
    std::optional<NormEstimate> norm_m_;
    std::optional<SelfImprovementParams> params_;
};

void run_axioms(RunContext& ctx, RunResult& out);
void run_equivalence(RunContext& ctx, RunResult& out);
void run_modular(RunContext& ctx, RunResult& out);
void run_norms(RunContext& ctx, RunResult& out);
void run_rdf(RunContext& ctx, RunResult& out);
void run_reverse_holder(RunContext& ctx, RunResult& out);
void run_selfimprove(RunContext& ctx, RunResult& out);

/// Runs config.suite ("all" runs every suite in order) and fills provenance.
RunResult run_theorem_suite(const RunConfig& config);

}  // namespace shtlab
