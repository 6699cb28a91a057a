#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedscreen/dataset.hpp"
#include "fedscreen/metrics.hpp"
#include "fedscreen/model.hpp"

namespace fedscreen::fed {

struct RoundConfig {
    int total_users = 10;
    int participants_per_round = 10;
    int rounds = 50;
    int local_epochs = 90;
    model::TrainingConfig training;
    std::uint64_t selection_seed = 0;
    bool parallel = false;

    void validate() const;
};

struct ClientState {
    int client_id = 0;
    data::Dataset shard;
    std::optional<model::ParameterVector> last_params;

    std::size_t shard_size() const { return shard.records.size(); }
};

struct GlobalModel {
    model::ParameterVector params;
    int round_index = 0;
    model::NetworkSpec spec;
};

struct RoundReport {
    int round_index = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double mean_global_loss = 0.0;
    std::vector<int> participant_ids;
};

// Deterministic draw of k distinct ids from [0, n), keyed on (seed, round),
// returned ascending. k = n short-circuits to the full roster.
std::vector<int> select_participants(int round, int n, int k, std::uint64_t seed);

// Shard-size-weighted coordinate mean. Weights are n_i over the sum of the
// participating sizes, and terms are added in the order given, so callers
// fix the reduction order (ascending client id everywhere here).
model::ParameterVector aggregate(
    const std::vector<std::pair<model::ParameterVector, std::size_t>>& locals);

// One communication round: broadcast, local training (serial or one thread
// per client), aggregation, then evaluation on the test set. Clients are
// stateless across rounds; they always start from the broadcast params.
std::pair<GlobalModel, RoundReport> run_round(const GlobalModel& global,
                                              const std::vector<ClientState*>& selected,
                                              const RoundConfig& config,
                                              const data::Dataset& testset);

struct ExperimentSetup {
    RoundConfig round;
    model::NetworkSpec spec;
    data::SplitSpec split;
    std::uint64_t partition_seed = 0;
    std::uint64_t init_seed = 0;
};

struct ExperimentResult {
    std::vector<RoundReport> reports;
    GlobalModel model;
    data::NormalizationStats stats;
    // Held-out rows in their original scale, so they can be re-normalized
    // bit-identically from the stored stats later.
    data::Dataset raw_test;
};

// Full pipeline on raw data: normalize, split, partition over the clients,
// initialize, then run every round.
ExperimentResult run_experiment(const ExperimentSetup& setup, const data::Dataset& raw);

void write_reports_csv(const std::string& path, const std::vector<RoundReport>& reports);

}  // namespace fedscreen::fed
