#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fedscreen/csv.hpp"
#include "fedscreen/dataset.hpp"
#include "fedscreen/fed.hpp"
#include "fedscreen/gate.hpp"
#include "fedscreen/metrics.hpp"
#include "fedscreen/model.hpp"
#include "fedscreen/seeds.hpp"
#include "fedscreen/ube.hpp"

namespace csv = fedscreen::csv;
namespace data = fedscreen::data;
namespace fed = fedscreen::fed;
namespace gate = fedscreen::gate;
namespace metrics = fedscreen::metrics;
namespace model = fedscreen::model;
namespace seeds = fedscreen::seeds;
namespace ube = fedscreen::ube;

namespace {

std::array<double, 3> parse_mix(const std::string& text) {
    auto fields = csv::split_line(text);
    if (fields.size() != 3) {
        throw std::runtime_error("class mix needs three comma-separated ratios, got '" + text +
                                 "'");
    }
    std::array<double, 3> mix{};
    for (int i = 0; i < 3; ++i) mix[i] = csv::parse_double(fields[i], "class mix");
    return mix;
}

std::string pack_stats(const std::array<double, data::kFeatureCount>& values) {
    std::string out;
    for (int c = 0; c < data::kFeatureCount; ++c) {
        if (c > 0) out += ' ';
        out += csv::format_hex(values[c]);
    }
    return out;
}

std::array<double, data::kFeatureCount> unpack_stats(const std::string& packed,
                                                     const std::string& what) {
    std::istringstream tokens(packed);
    std::array<double, data::kFeatureCount> values{};
    std::string field;
    for (int c = 0; c < data::kFeatureCount; ++c) {
        if (!(tokens >> field)) throw std::runtime_error(what + ": truncated stats");
        values[c] = csv::parse_hex(field, what);
    }
    if (tokens >> field) throw std::runtime_error(what + ": trailing stats values");
    return values;
}

data::NormalizationStats stats_from_meta(const model::Checkpoint& ckpt,
                                         const std::string& path) {
    auto lo = ckpt.meta.find("norm_min");
    auto hi = ckpt.meta.find("norm_max");
    if (lo == ckpt.meta.end() || hi == ckpt.meta.end()) {
        throw std::runtime_error(path + ": checkpoint carries no normalization stats");
    }
    data::NormalizationStats stats;
    stats.min = unpack_stats(lo->second, path + " norm_min");
    stats.max = unpack_stats(hi->second, path + " norm_max");
    return stats;
}

struct ScoreRequest {
    ube::AccessRequest request;
    std::array<double, data::kFeatureCount> features{};
};

std::string requests_header() {
    std::string header = "user_id,data_id,category_id,timestamp";
    for (const char* name : data::kFeatureNames) {
        header += ',';
        header += name;
    }
    return header;
}

std::vector<ScoreRequest> load_requests(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || csv::split_line(line) != csv::split_line(requests_header())) {
        throw std::runtime_error(path + ": header does not match '" + requests_header() + "'");
    }

    std::vector<ScoreRequest> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = csv::split_line(line);
        if (fields.size() != 4 + data::kFeatureCount) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(4 + data::kFeatureCount) + " fields");
        }
        const std::string ctx = path + ":" + std::to_string(line_no);
        ScoreRequest req;
        req.request.user_id = static_cast<int>(csv::parse_int(fields[0], ctx));
        req.request.data_id = static_cast<int>(csv::parse_int(fields[1], ctx));
        req.request.category_id = static_cast<int>(csv::parse_int(fields[2], ctx));
        req.request.timestamp = csv::parse_int(fields[3], ctx);
        for (int c = 0; c < data::kFeatureCount; ++c) {
            req.features[c] = csv::parse_double(fields[4 + c], ctx);
        }
        out.push_back(req);
    }
    return out;
}

struct GenArgs {
    long long n = 0;
    std::uint64_t seed = 42;
    bool seed_given = false;
    std::string mix = "0.3,0.5,0.2";
    std::string out;
    std::string config_path;
    std::string save_config_path;
};

int cmd_gen(const GenArgs& args) {
    data::GeneratorConfig config = args.config_path.empty()
                                       ? data::GeneratorConfig::defaults()
                                       : data::GeneratorConfig::load(args.config_path);
    const std::uint64_t seed = args.seed_given ? args.seed : config.seed;
    config.seed = seed;
    if (!args.save_config_path.empty()) config.save(args.save_config_path);

    data::Dataset dataset = data::synthesize(args.n, seed, parse_mix(args.mix), config);
    data::save_csv(args.out, dataset);

    std::array<long long, 3> counts{};
    for (const data::FeatureRecord& rec : dataset.records) ++counts[rec.label - 1];
    std::cout << "rows=" << dataset.records.size() << " malicious=" << counts[0]
              << " nonmalicious=" << counts[1] << " unknown=" << counts[2] << '\n';
    return 0;
}

struct RunArgs {
    std::string data_path;
    long long synth_n = 0;
    std::uint64_t synth_seed = 0;
    bool synth_seed_given = false;
    std::string synth_mix = "0.3,0.5,0.2";
    std::string out;
    std::string checkpoint_path;
    std::string test_out;
    int users = 10;
    int participants = 10;
    int rounds = 50;
    int epochs = 90;
    std::string variant = "afed";
    int batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double split_fraction = 0.8;
    std::uint64_t master_seed = 1;
    bool parallel = false;
};

int cmd_run(const RunArgs& args) {
    data::Dataset dataset;
    if (!args.data_path.empty()) {
        dataset = data::load_csv(args.data_path);
    } else {
        const std::uint64_t gen_seed = args.synth_seed_given
                                           ? args.synth_seed
                                           : seeds::derive(args.master_seed,
                                                           seeds::Role::Generator);
        dataset = data::synthesize(args.synth_n, gen_seed, parse_mix(args.synth_mix));
    }

    fed::ExperimentSetup setup;
    setup.round.total_users = args.users;
    setup.round.participants_per_round = args.participants;
    setup.round.rounds = args.rounds;
    setup.round.local_epochs = args.epochs;
    setup.round.training.epochs = args.epochs;
    setup.round.training.batch_size = args.batch_size;
    setup.round.training.learning_rate = args.learning_rate;
    setup.round.training.beta1 = args.beta1;
    setup.round.training.beta2 = args.beta2;
    setup.round.training.epsilon = args.adam_epsilon;
    setup.round.training.seed = seeds::derive(args.master_seed, seeds::Role::Training);
    setup.round.selection_seed = seeds::derive(args.master_seed, seeds::Role::Selection);
    setup.round.parallel = args.parallel;
    setup.spec = model::parse_variant(args.variant) == model::Variant::AFed
                     ? model::NetworkSpec::afed()
                     : model::NetworkSpec::dfed();
    setup.split.train_fraction = args.split_fraction;
    setup.split.seed = seeds::derive(args.master_seed, seeds::Role::Split);
    setup.partition_seed = seeds::derive(args.master_seed, seeds::Role::Partition);
    setup.init_seed = seeds::derive(args.master_seed, seeds::Role::Init);

    fed::ExperimentResult result = fed::run_experiment(setup, dataset);
    fed::write_reports_csv(args.out, result.reports);

    if (!args.checkpoint_path.empty()) {
        std::map<std::string, std::string> meta;
        meta["norm_min"] = pack_stats(result.stats.min);
        meta["norm_max"] = pack_stats(result.stats.max);
        meta["master_seed"] = std::to_string(args.master_seed);
        model::save_checkpoint(args.checkpoint_path, result.model.params, result.model.spec,
                               meta);
    }
    if (!args.test_out.empty()) data::save_csv(args.test_out, result.raw_test);

    const fed::RoundReport& last = result.reports.back();
    std::cout << "rounds=" << result.reports.size() << " success_rate="
              << csv::format_fixed(last.accuracy * 100.0, 2)
              << " accuracy=" << csv::format_fixed(last.accuracy, 6)
              << " loss=" << csv::format_fixed(last.mean_global_loss, 6) << '\n';
    return 0;
}

struct ScoreArgs {
    std::string checkpoint_path;
    std::string history_path;
    std::string auth_path;
    std::string requests_path;
    std::string decisions_path;
    double thr_attack = 0.5;
    double thr_freq = 0.3;
    std::int64_t window_start = 0;
    std::int64_t window_end = -1;
    bool window_end_given = false;
    bool update_kb = true;
};

int cmd_score(const ScoreArgs& args) {
    model::Checkpoint ckpt = model::load_checkpoint(args.checkpoint_path);
    const data::NormalizationStats stats = stats_from_meta(ckpt, args.checkpoint_path);
    fed::GlobalModel global{std::move(ckpt.params), 0, std::move(ckpt.spec)};

    data::KnowledgeBase kb = data::load_knowledge_base(args.history_path, args.auth_path);
    std::vector<ScoreRequest> requests = load_requests(args.requests_path);
    if (requests.empty()) throw std::runtime_error(args.requests_path + ": no requests");

    ube::SecurityThresholds thresholds{args.thr_attack, args.thr_freq};
    std::vector<std::pair<gate::AccessDecision, ube::SecurityAssessment>> log;
    int denied = 0;

    for (const ScoreRequest& sr : requests) {
        ube::UserHistory history = kb.history_for(sr.request.user_id);
        ube::AuthorizationSet auth = kb.auth_for(sr.request.user_id);
        ube::TimeWindow window{args.window_start, args.window_end_given
                                                      ? args.window_end
                                                      : sr.request.timestamp};
        ube::SecurityAssessment assessment =
            ube::assess(sr.request, history, auth, window, thresholds);
        gate::AccessDecision decision =
            gate::decide(sr.request, data::apply_stats(stats, sr.features), assessment, global);

        std::cout << "user=" << sr.request.user_id << " data=" << sr.request.data_id
                  << " verdict=" << gate::verdict_name(decision.verdict)
                  << " reason=" << gate::reason_name(decision.reason)
                  << " predicted_class=" << decision.predicted_class
                  << " sigma_total=" << assessment.sigma_total;
        for (const auto& [name, value] : assessment.flag_list()) {
            std::cout << ' ' << name << '=' << value;
        }
        std::cout << " attack_factor=" << csv::format_fixed(assessment.attack_factor, 6)
                  << " leak_frequency=" << csv::format_fixed(assessment.leak_frequency, 6)
                  << '\n';

        if (decision.verdict == gate::Verdict::Denied) {
            ++denied;
            if (args.update_kb) {
                ube::AccessRecord attempt;
                attempt.data_id = sr.request.data_id;
                attempt.category_id = sr.request.category_id;
                attempt.timestamp = sr.request.timestamp;
                attempt.authorized = false;
                attempt.leaked = false;
                auto& stored = kb.histories[sr.request.user_id];
                stored.user_id = sr.request.user_id;
                stored.records.push_back(attempt);
            }
        }
        log.emplace_back(std::move(decision), std::move(assessment));
    }

    if (!args.decisions_path.empty()) gate::write_decision_log(args.decisions_path, log);
    if (args.update_kb && denied > 0) data::save_history_csv(args.history_path, kb);

    std::cout << "granted=" << (requests.size() - static_cast<std::size_t>(denied))
              << " denied=" << denied << '\n';
    return denied > 0 ? 2 : 0;
}

struct EvalArgs {
    std::string checkpoint_path;
    std::string data_path;
};

int cmd_eval(const EvalArgs& args) {
    model::Checkpoint ckpt = model::load_checkpoint(args.checkpoint_path);
    const data::NormalizationStats stats = stats_from_meta(ckpt, args.checkpoint_path);

    data::Dataset dataset = data::load_csv(args.data_path);
    if (dataset.records.empty()) throw std::runtime_error(args.data_path + ": no records");

    data::Dataset scaled;
    scaled.stats = stats;
    scaled.records.reserve(dataset.records.size());
    std::vector<int> truth;
    std::vector<int> guessed;
    for (const data::FeatureRecord& rec : dataset.records) {
        data::FeatureRecord cooked = rec;
        cooked.features = data::apply_stats(stats, rec.features);
        scaled.records.push_back(cooked);
        truth.push_back(rec.label);
        guessed.push_back(model::predict(ckpt.params, ckpt.spec, cooked.features));
    }

    metrics::MetricsReport scores = metrics::report(metrics::confusion(truth, guessed));
    const double mean_loss = model::loss(ckpt.params, ckpt.spec, scaled.records);
    std::cout << "rows=" << dataset.records.size()
              << " accuracy=" << csv::format_fixed(scores.accuracy, 6)
              << " precision=" << csv::format_fixed(scores.precision, 6)
              << " recall=" << csv::format_fixed(scores.recall, 6)
              << " f1=" << csv::format_fixed(scores.f1, 6)
              << " loss=" << csv::format_fixed(mean_loss, 6) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated malicious-user screening: data generation, training, scoring"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic labeled dataset");
    gen->add_option("--n", gen_args.n, "Number of records")->required()->check(CLI::PositiveNumber);
    CLI::Option* gen_seed =
        gen->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
    gen->add_option("--mix", gen_args.mix, "Class ratios malicious,nonmalicious,unknown")
        ->capture_default_str();
    gen->add_option("--out", gen_args.out, "Output dataset CSV")->required();
    gen->add_option("--gen-config", gen_args.config_path,
                    "Feature-range config file (defaults are built in)")
        ->check(CLI::ExistingFile);
    gen->add_option("--save-gen-config", gen_args.save_config_path,
                    "Write the effective feature-range config here");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run a federated training experiment");
    run->set_config("--config", "", "Key-value config file; flags override its entries");
    CLI::Option* run_data =
        run->add_option("--data", run_args.data_path, "Input dataset CSV")
            ->check(CLI::ExistingFile);
    CLI::Option* run_synth =
        run->add_option("--synth-n", run_args.synth_n,
                        "Generate this many records instead of reading --data")
            ->check(CLI::PositiveNumber);
    CLI::Option* run_synth_seed =
        run->add_option("--synth-seed", run_args.synth_seed,
                        "Generator seed (default: derived from --seed)");
    run->add_option("--synth-mix", run_args.synth_mix, "Class ratios for --synth-n")
        ->capture_default_str();
    run->add_option("--out", run_args.out, "Per-round results CSV")->required();
    run->add_option("--checkpoint", run_args.checkpoint_path, "Write the final model here");
    run->add_option("--test-out", run_args.test_out, "Write the held-out split here");
    run->add_option("--users", run_args.users, "Total simulated users (n)")
        ->capture_default_str();
    run->add_option("--k", run_args.participants, "Participants per round (k)")
        ->capture_default_str();
    run->add_option("--rounds", run_args.rounds, "Communication rounds (T)")
        ->capture_default_str();
    run->add_option("--epochs", run_args.epochs, "Local epochs per round")
        ->capture_default_str();
    run->add_option("--variant", run_args.variant, "Network variant: afed or dfed")
        ->capture_default_str();
    run->add_option("--batch", run_args.batch_size, "Mini-batch size")->capture_default_str();
    run->add_option("--lr", run_args.learning_rate, "Adam learning rate")->capture_default_str();
    run->add_option("--beta1", run_args.beta1, "Adam beta1")->capture_default_str();
    run->add_option("--beta2", run_args.beta2, "Adam beta2")->capture_default_str();
    run->add_option("--adam-eps", run_args.adam_epsilon, "Adam epsilon")->capture_default_str();
    run->add_option("--split-fraction", run_args.split_fraction, "Training fraction")
        ->capture_default_str();
    run->add_option("--seed", run_args.master_seed,
                    "Master seed; every sub-seed derives from it")
        ->capture_default_str();
    run->add_flag("--parallel", run_args.parallel, "Train selected clients on threads");
    run_data->excludes(run_synth);

    ScoreArgs score_args;
    CLI::App* score = app.add_subcommand("score", "Grant or deny individual access requests");
    score->add_option("--checkpoint", score_args.checkpoint_path, "Trained model checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    score->add_option("--history", score_args.history_path, "User history CSV")
        ->required()
        ->check(CLI::ExistingFile);
    score->add_option("--auth", score_args.auth_path, "Authorization CSV")
        ->required()
        ->check(CLI::ExistingFile);
    score->add_option("--requests", score_args.requests_path, "Access request CSV")
        ->required()
        ->check(CLI::ExistingFile);
    score->add_option("--decisions", score_args.decisions_path, "Write a decision log here");
    score->add_option("--thr-attack", score_args.thr_attack, "Attack factor threshold")
        ->capture_default_str();
    score->add_option("--thr-freq", score_args.thr_freq, "Leak frequency threshold")
        ->capture_default_str();
    score->add_option("--window-start", score_args.window_start, "Evaluation window start")
        ->capture_default_str();
    CLI::Option* score_end = score->add_option(
        "--window-end", score_args.window_end,
        "Evaluation window end (default: each request's timestamp)");
    score->add_flag("--update-kb,!--no-update-kb", score_args.update_kb,
                    "Append denied requests to the history file (default on)");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a labeled CSV");
    eval->add_option("--checkpoint", eval_args.checkpoint_path, "Trained model checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--data", eval_args.data_path, "Labeled dataset CSV")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            gen_args.seed_given = gen_seed->count() > 0;
            return cmd_gen(gen_args);
        }
        if (run->parsed()) {
            if (run_args.data_path.empty() && run_synth->count() == 0) {
                std::cerr << "run needs --data or --synth-n\n";
                return 1;
            }
            run_args.synth_seed_given = run_synth_seed->count() > 0;
            return cmd_run(run_args);
        }
        if (score->parsed()) {
            score_args.window_end_given = score_end->count() > 0;
            return cmd_score(score_args);
        }
        if (eval->parsed()) return cmd_eval(eval_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
