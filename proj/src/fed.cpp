#include "fedscreen/fed.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fedscreen/csv.hpp"
#include "fedscreen/seeds.hpp"

namespace fedscreen::fed {

void RoundConfig::validate() const {
    if (total_users < 1) throw std::invalid_argument("need at least one user");
    if (participants_per_round < 1 || participants_per_round > total_users) {
        throw std::invalid_argument("participants per round must lie in [1, total users]");
    }
    if (rounds < 1) throw std::invalid_argument("need at least one round");
    if (local_epochs < 1) throw std::invalid_argument("need at least one local epoch");
    training.validate();
}

std::vector<int> select_participants(int round, int n, int k, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one user");
    if (k < 1 || k > n) throw std::invalid_argument("cannot select " + std::to_string(k) +
                                                    " participants out of " + std::to_string(n));

    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    if (k == n) return ids;

    std::mt19937_64 rng(seeds::mix64(seed + seeds::kGamma * (static_cast<std::uint64_t>(round) + 1)));
    for (int i = 0; i < k; ++i) {
        auto j = static_cast<std::size_t>(i) +
                 seeds::bounded(rng, static_cast<std::uint64_t>(n - i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    }
    ids.resize(static_cast<std::size_t>(k));
    std::sort(ids.begin(), ids.end());
    return ids;
}

model::ParameterVector aggregate(
    const std::vector<std::pair<model::ParameterVector, std::size_t>>& locals) {
    if (locals.empty()) throw std::invalid_argument("nothing to aggregate");

    const model::ParameterVector& first = locals.front().first;
    std::size_t total = 0;
    for (const auto& [params, size] : locals) {
        if (params.fingerprint != first.fingerprint ||
            params.values.size() != first.values.size()) {
            throw std::invalid_argument("cannot aggregate parameter vectors of different shape");
        }
        if (size == 0) throw std::invalid_argument("shard sizes must be positive");
        total += size;
    }

    model::ParameterVector out;
    out.fingerprint = first.fingerprint;
    out.values.resize(first.values.size());

    // Seed the accumulator with the first term rather than zero: with a
    // single participant the weight is exactly 1.0 and the result stays
    // bit-identical to the input.
    const double w0 = static_cast<double>(locals.front().second) / static_cast<double>(total);
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        out.values[j] = w0 * first.values[j];
    }
    for (std::size_t i = 1; i < locals.size(); ++i) {
        const double w =
            static_cast<double>(locals[i].second) / static_cast<double>(total);
        const std::vector<double>& v = locals[i].first.values;
        for (std::size_t j = 0; j < out.values.size(); ++j) {
            out.values[j] += w * v[j];
        }
    }
    return out;
}

std::pair<GlobalModel, RoundReport> run_round(const GlobalModel& global,
                                              const std::vector<ClientState*>& selected,
                                              const RoundConfig& config,
                                              const data::Dataset& testset) {
    if (selected.empty()) throw std::invalid_argument("a round needs at least one participant");
    if (testset.records.empty()) throw std::invalid_argument("test set is empty");
    if (!testset.normalized()) throw std::invalid_argument("test set must be normalized");
    if (config.local_epochs < 0) throw std::invalid_argument("negative epoch count");

    std::vector<ClientState*> clients = selected;
    std::sort(clients.begin(), clients.end(),
              [](const ClientState* a, const ClientState* b) {
                  return a->client_id < b->client_id;
              });

    std::vector<model::TrainResult> results(clients.size());
    auto train_one = [&](std::size_t i) {
        model::TrainingConfig cfg = config.training;
        cfg.epochs = config.local_epochs;
        cfg.seed = seeds::client_training_seed(config.training.seed, global.round_index,
                                               clients[i]->client_id);
        results[i] = model::train_local(global.params, global.spec, clients[i]->shard, cfg);
    };

    if (config.parallel && clients.size() > 1) {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> failures(clients.size());
        workers.reserve(clients.size());
        for (std::size_t i = 0; i < clients.size(); ++i) {
            workers.emplace_back([&, i] {
                try {
                    train_one(i);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            });
        }
        for (std::thread& w : workers) w.join();
        for (const std::exception_ptr& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
    } else {
        for (std::size_t i = 0; i < clients.size(); ++i) train_one(i);
    }

    std::vector<std::pair<model::ParameterVector, std::size_t>> locals;
    locals.reserve(clients.size());
    for (std::size_t i = 0; i < clients.size(); ++i) {
        clients[i]->last_params = results[i].params;
        locals.emplace_back(std::move(results[i].params), clients[i]->shard_size());
    }

    GlobalModel next;
    next.spec = global.spec;
    next.params = aggregate(locals);
    next.round_index = global.round_index + 1;

    std::vector<int> truth;
    std::vector<int> guessed;
    truth.reserve(testset.records.size());
    guessed.reserve(testset.records.size());
    for (const data::FeatureRecord& rec : testset.records) {
        truth.push_back(rec.label);
        guessed.push_back(model::predict(next.params, next.spec, rec.features));
    }
    const metrics::MetricsReport scores = metrics::report(metrics::confusion(truth, guessed));

    RoundReport report;
    report.round_index = global.round_index;
    report.accuracy = scores.accuracy;
    report.precision = scores.precision;
    report.recall = scores.recall;
    report.f1 = scores.f1;
    report.mean_global_loss = model::loss(next.params, next.spec, testset.records);
    for (const ClientState* c : clients) report.participant_ids.push_back(c->client_id);

    return {std::move(next), std::move(report)};
}

ExperimentResult run_experiment(const ExperimentSetup& setup, const data::Dataset& raw) {
    setup.round.validate();
    setup.spec.validate();
    if (raw.normalized()) {
        throw std::invalid_argument("experiment input must be raw, not already normalized");
    }

    data::Dataset normalized = data::normalize(raw);
    auto [train, test] = data::split(normalized, setup.split);
    auto [raw_train, raw_test] = data::split(raw, setup.split);
    (void)raw_train;

    std::vector<data::Dataset> shards =
        data::partition(train, setup.round.total_users, setup.partition_seed);

    std::vector<ClientState> clients(shards.size());
    for (std::size_t i = 0; i < shards.size(); ++i) {
        clients[i].client_id = static_cast<int>(i);
        clients[i].shard = std::move(shards[i]);
    }

    ExperimentResult result;
    result.stats = *normalized.stats;
    result.raw_test = std::move(raw_test);
    result.model.spec = setup.spec;
    result.model.params = model::init_params(setup.spec, setup.init_seed);
    result.model.round_index = 0;

    for (int round = 0; round < setup.round.rounds; ++round) {
        std::vector<int> chosen =
            select_participants(round, setup.round.total_users,
                                setup.round.participants_per_round, setup.round.selection_seed);
        std::vector<ClientState*> selected;
        selected.reserve(chosen.size());
        for (int id : chosen) selected.push_back(&clients[static_cast<std::size_t>(id)]);

        auto [next, report] = run_round(result.model, selected, setup.round, test);
        result.model = std::move(next);
        result.reports.push_back(std::move(report));
    }
    return result;
}

void write_reports_csv(const std::string& path, const std::vector<RoundReport>& reports) {
    std::ofstream out(path);
    if (!out.is_open()) throw std::runtime_error("cannot open " + path + " for writing");
    out << "round,accuracy,precision,recall,f1,loss,participants\n";
    for (const RoundReport& r : reports) {
        std::string participants;
        for (std::size_t i = 0; i < r.participant_ids.size(); ++i) {
            if (i > 0) participants += ';';
            participants += std::to_string(r.participant_ids[i]);
        }
        out << r.round_index << ',' << csv::format_fixed(r.accuracy, 6) << ','
            << csv::format_fixed(r.precision, 6) << ',' << csv::format_fixed(r.recall, 6) << ','
            << csv::format_fixed(r.f1, 6) << ',' << csv::format_fixed(r.mean_global_loss, 6)
            << ',' << participants << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace fedscreen::fed
