#pragma once

#include <map>
#include <string>
#include <vector>

#include "npcure/bandwidth.hpp"
#include "npcure/sample.hpp"
#include "npcure/sim.hpp"

namespace npcure {

// Reals round-trip exactly at 17 significant digits.
std::string format_real(double v);

struct DatasetRow {
    double covariate = 0.0;
    double time = 0.0;
    int status = 0;
    std::string group;  // empty when the file has no group column
};

struct Dataset {
    std::vector<DatasetRow> rows;
    bool has_group = false;

    std::vector<std::string> group_labels() const;
    // Observations of one group ("" selects the whole file).
    SurvivalSample sample_for(const std::string& group) const;
};

// CSV with header; columns time, status, covariate, optional group.
// Throws ParseError with the offending row number.
Dataset read_dataset(const std::string& path);

void write_dataset(const std::string& path, const SurvivalSample& sample);

// Flat key-value run configuration for the benchmark command. Unknown keys
// are rejected.
struct BenchmarkPlanFile {
    ExperimentPlan plan;
    BootstrapConfig config;
    bool run_bootstrap = true;
    bool run_mise = true;

    static BenchmarkPlanFile parse(const std::string& path);
    std::map<std::string, std::string> echo() const;  // effective configuration
};

void write_incidence_mse_csv(const std::string& path,
                             const std::vector<IncidenceMseReport>& reports);
void write_latency_mise_csv(const std::string& path,
                            const std::vector<LatencyMiseReport>& reports);
void write_bootstrap_csv(const std::string& path,
                         const std::vector<BootstrapStudyReport>& reports);

}  // namespace npcure
