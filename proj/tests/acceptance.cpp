// Acceptance gate for the federated screening pipeline. Each criterion
// prints one PASS/FAIL line with its wall-clock time; any failure makes
// the binary exit nonzero and explains itself on the lines below.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "fedscreen/csv.hpp"
#include "fedscreen/dataset.hpp"
#include "fedscreen/fed.hpp"
#include "fedscreen/gate.hpp"
#include "fedscreen/metrics.hpp"
#include "fedscreen/model.hpp"
#include "fedscreen/seeds.hpp"
#include "fedscreen/ube.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace fedscreen;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (notes.size() < 12) notes.push_back(what);
        }
    }
};

struct RoundRow {
    double accuracy = 0.0;
    double loss = 0.0;
};

std::vector<RoundRow> parse_results_csv(const fs::path& path) {
    std::vector<RoundRow> rows;
    std::istringstream in(testutil::slurp(path));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (fields.size() != 7) throw std::runtime_error(path.string() + ": bad row");
        RoundRow row;
        row.accuracy = csv::parse_double(fields[1], "accuracy");
        row.loss = csv::parse_double(fields[5], "loss");
        rows.push_back(row);
    }
    return rows;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

// ---- criterion 1: behaviour assessment vs exhaustive reference ----

Criterion run_ube_oracle() {
    Criterion c;
    std::mt19937_64 rng(0xACCE01);
    for (int i = 0; i < 1000; ++i) {
        oracles::UbeFixture f = oracles::random_ube_fixture(rng);
        oracles::UbeExpected want = oracles::ube_brute_force(f);
        ube::SecurityAssessment got =
            ube::assess(f.request, f.history, f.auth, f.window, f.thresholds);
        c.require(got.sigma_history == want.sigma_history, "history flag mismatch");
        c.require(got.sigma_authorized == want.sigma_authorized, "authorization flag mismatch");
        c.require(got.sigma_attack == want.sigma_attack, "attack flag mismatch");
        c.require(got.sigma_leak == want.sigma_leak, "leak flag mismatch");
        c.require(got.sigma_total == want.sigma_total, "flag sum mismatch");
        c.require(got.attack_factor == want.kappa, "attack factor mismatch");
        c.require(got.leak_frequency == want.freq, "leak frequency mismatch");
        c.require((got.intent == ube::Intent::Malicious) == want.malicious, "intent mismatch");
    }
    return c;
}

// ---- criterion 2: backprop vs central finite differences ----

Criterion run_gradient_check() {
    Criterion c;
    std::mt19937_64 rng(0xACCE02);
    const double h = 1e-5;
    double worst = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
        model::NetworkSpec spec = oracles::random_spec(rng);
        model::ParameterVector params = oracles::random_params(spec, rng);
        auto batch = oracles::random_batch(rng, 2 + seeds::bounded(rng, 7));
        model::ParameterVector grad = model::gradient(params, spec, batch);
        for (int probe = 0; probe < 20; ++probe) {
            std::size_t j = seeds::bounded(rng, grad.values.size());
            double fd = oracles::fd_loss_derivative(params, spec, batch, j, h);
            worst = std::max(worst, oracles::relative_error(grad.values[j], fd));
        }
    }
    c.require(worst < 1e-4, "max relative error " + csv::format_double(worst) + " >= 1e-4");
    c.notes.push_back("max relative error " + csv::format_double(worst));
    return c;
}

// ---- criterion 3: aggregation properties ----

Criterion run_fedavg_properties() {
    Criterion c;
    std::mt19937_64 rng(0xACCE03);

    for (int trial = 0; trial < 50; ++trial) {
        model::NetworkSpec spec = oracles::random_spec(rng);
        model::ParameterVector p = oracles::random_params(spec, rng);
        if (!p.values.empty()) p.values[0] = -0.0;
        model::ParameterVector out = fed::aggregate({{p, 1 + seeds::bounded(rng, 500)}});
        c.require(bitwise_equal(out.values, p.values),
                  "single-participant aggregation is not the bitwise identity");
    }

    for (int trial = 0; trial < 50; ++trial) {
        model::NetworkSpec spec = model::NetworkSpec::afed();
        std::vector<model::ParameterVector> locals;
        for (int i = 0; i < 3; ++i) locals.push_back(oracles::random_params(spec, rng));
        model::ParameterVector out =
            fed::aggregate({{locals[0], 40}, {locals[1], 40}, {locals[2], 40}});
        for (std::size_t j = 0; j < out.values.size(); ++j) {
            double mean = (locals[0].values[j] + locals[1].values[j] + locals[2].values[j]) / 3.0;
            c.require(oracles::relative_error(out.values[j], mean) < 1e-12,
                      "equal-shard aggregation deviates from the plain mean");
        }
    }

    {
        fed::ExperimentSetup setup;
        setup.spec = model::NetworkSpec::afed();
        setup.round.total_users = 1;
        setup.round.participants_per_round = 1;
        setup.round.rounds = 3;
        setup.round.local_epochs = 4;
        setup.round.training.epochs = 4;
        setup.round.training.seed = 41;
        setup.split = {0.8, 42};
        setup.partition_seed = 43;
        setup.init_seed = 44;
        data::Dataset raw = data::synthesize(400, 45, {0.3, 0.5, 0.2});

        fed::ExperimentResult federated = fed::run_experiment(setup, raw);

        data::Dataset norm = data::normalize(raw);
        auto [train, test] = data::split(norm, setup.split);
        data::Dataset shard = data::partition(train, 1, setup.partition_seed)[0];
        model::ParameterVector params = model::init_params(setup.spec, setup.init_seed);
        for (int round = 0; round < setup.round.rounds; ++round) {
            model::TrainingConfig local = setup.round.training;
            local.epochs = setup.round.local_epochs;
            local.seed = seeds::client_training_seed(setup.round.training.seed, round, 0);
            params = model::train_local(params, setup.spec, shard, local).params;
        }
        c.require(bitwise_equal(federated.model.params.values, params.values),
                  "single-client federation differs from centralized training");
    }

    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(seeds::bounded(rng, 8));
        std::vector<std::pair<model::ParameterVector, std::size_t>> locals;
        double weight_sum = 0.0;
        std::size_t total = 0;
        std::vector<std::size_t> sizes;
        for (int i = 0; i < n; ++i) {
            sizes.push_back(1 + seeds::bounded(rng, 5000));
            total += sizes.back();
        }
        model::ParameterVector ones;
        ones.values.assign(4, 1.0);
        ones.fingerprint = 7;
        for (int i = 0; i < n; ++i) {
            locals.emplace_back(ones, sizes[i]);
            weight_sum += static_cast<double>(sizes[i]) / static_cast<double>(total);
        }
        c.require(std::abs(weight_sum - 1.0) < 1e-12, "derived weights do not sum to 1");
        model::ParameterVector out = fed::aggregate(locals);
        for (double v : out.values) {
            c.require(std::abs(v - 1.0) < 1e-12,
                      "aggregating all-ones vectors drifts from 1");
        }
    }
    return c;
}

// ---- criteria 4 and 5: full training runs through the binary ----

struct RunOutcome {
    Criterion crit;
    double seconds = 0.0;
};

RunOutcome run_training_scenario(const std::string& tag, int users, int participants,
                                 double accuracy_floor, double loss_ceiling,
                                 bool check_loss_drop, double budget_seconds) {
    RunOutcome outcome;
    Criterion& c = outcome.crit;
    auto dir = testutil::scratch_dir("acceptance_" + tag);
    auto results = dir / "rounds.csv";
    auto checkpoint = dir / "model.ckpt";

    const auto start = std::chrono::steady_clock::now();
    testutil::CliResult r = testutil::run_cli(
        "run --synth-n 10000 --synth-seed 42 --synth-mix 0.3,0.5,0.2 --users " +
            std::to_string(users) + " --k " + std::to_string(participants) +
            " --rounds 50 --epochs 90 --variant afed --seed 1 --out " + results.string() +
            " --checkpoint " + checkpoint.string(),
        dir / "run.txt");
    outcome.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    c.require(r.exit_code == 0, "training run exited with code " + std::to_string(r.exit_code));
    if (r.exit_code != 0) {
        c.notes.push_back(r.output.substr(0, 400));
        return outcome;
    }

    std::vector<RoundRow> rows = parse_results_csv(results);
    c.require(rows.size() == 50,
              "expected 50 round reports, found " + std::to_string(rows.size()));
    if (!rows.empty()) {
        const RoundRow& last = rows.back();
        c.notes.push_back("final accuracy " + csv::format_fixed(last.accuracy, 4) + ", loss " +
                          csv::format_fixed(last.loss, 6) + ", " +
                          csv::format_fixed(outcome.seconds, 1) + " s");
        c.require(last.accuracy >= accuracy_floor,
                  "final accuracy " + csv::format_fixed(last.accuracy, 4) + " below " +
                      csv::format_fixed(accuracy_floor, 2));
        if (loss_ceiling > 0.0) {
            c.require(last.loss < loss_ceiling,
                      "final loss " + csv::format_fixed(last.loss, 6) + " not below " +
                          csv::format_fixed(loss_ceiling, 2));
        }
        if (check_loss_drop) {
            c.require(last.loss < rows.front().loss,
                      "final loss did not improve on the first round");
        }
    }
    c.require(outcome.seconds <= budget_seconds,
              "runtime " + csv::format_fixed(outcome.seconds, 1) + " s over the " +
                  csv::format_fixed(budget_seconds, 0) + " s budget");
    return outcome;
}

// ---- criterion 6: metrics vs independent formulas ----

Criterion run_metrics_oracle() {
    Criterion c;
    std::mt19937_64 rng(0xACCE06);
    for (int trial = 0; trial < 200; ++trial) {
        metrics::ConfusionMatrix cm;
        for (auto& row : cm.counts) {
            for (auto& cell : row) cell = static_cast<long long>(seeds::bounded(rng, 60));
        }
        if (cm.total() == 0) cm.counts[0][0] = 1;

        oracles::MetricsOracle want = oracles::metrics_brute_force(cm.counts);
        metrics::MetricsReport got = metrics::report(cm);
        auto pc = metrics::per_class(cm);

        c.require(std::abs(got.accuracy - want.accuracy) < 1e-12, "accuracy mismatch");
        c.require(std::abs(got.precision - want.weighted_precision) < 1e-12,
                  "weighted precision mismatch");
        c.require(std::abs(got.recall - want.weighted_recall) < 1e-12,
                  "weighted recall mismatch");
        c.require(std::abs(got.f1 - want.weighted_f1) < 1e-12, "weighted f1 mismatch");
        for (int k = 0; k < 3; ++k) {
            c.require(std::abs(pc[k].precision - want.precision[k]) < 1e-12,
                      "per-class precision mismatch");
            c.require(std::abs(pc[k].recall - want.recall[k]) < 1e-12,
                      "per-class recall mismatch");
            c.require(std::abs(pc[k].f1 - want.f1[k]) < 1e-12, "per-class f1 mismatch");
        }
        c.require(got.recall == got.accuracy, "accuracy and weighted recall drift apart");
    }
    return c;
}

// ---- criterion 7: gate truth table plus the five-user illustration ----

fed::GlobalModel fixed_prediction_model(int favoured_class) {
    fed::GlobalModel global;
    global.spec = model::NetworkSpec::afed();
    global.params.values.assign(global.spec.param_count(), 0.0);
    global.params.fingerprint = global.spec.fingerprint();
    global.params.values[global.spec.param_count() - 3 + favoured_class - 1] = 5.0;
    return global;
}

Criterion run_gate_checks() {
    Criterion c;
    ube::AccessRequest req{1, 1, 1, 10};
    std::array<double, data::kFeatureCount> x{};

    for (int model_flag = 0; model_flag <= 1; ++model_flag) {
        for (int ube_flag = 0; ube_flag <= 1; ++ube_flag) {
            ube::SecurityAssessment a;
            a.sigma_history = ube_flag;
            a.sigma_total = ube_flag;
            a.intent = ube_flag ? ube::Intent::Malicious : ube::Intent::NonMalicious;
            gate::AccessDecision d =
                gate::decide(req, x, a, fixed_prediction_model(model_flag ? 1 : 2));
            const bool denied = d.verdict == gate::Verdict::Denied;
            c.require(denied == (model_flag || ube_flag),
                      "verdict disagrees with the or-rule at (" +
                          std::to_string(model_flag) + "," + std::to_string(ube_flag) + ")");
            if (model_flag) {
                c.require(d.reason == gate::Reason::ModelMalicious,
                          "model trigger not named first");
            } else if (ube_flag) {
                c.require(d.reason == gate::Reason::UbeMalicious, "behaviour trigger unnamed");
            } else {
                c.require(d.reason == gate::Reason::Clean, "clean case mislabeled");
            }
        }
    }

    // Five users, one request each: the second is unauthorized, the fifth
    // carries a leak ratio the classifier flags; exactly those two are
    // denied. A hand-built detector checkpoint keeps the outcome exact.
    auto dir = testutil::scratch_dir("acceptance_gate");
    {
        model::NetworkSpec spec = model::NetworkSpec::afed();
        model::ParameterVector p;
        p.values.assign(spec.param_count(), 0.0);
        p.fingerprint = spec.fingerprint();
        p.values[9] = 10.0;
        p.values[240] = -3.0;
        p.values[192] = 10.0;
        p.values[257] = 1.0;
        p.values[258] = -5.0;
        std::string zeros, ones;
        for (int col = 0; col < data::kFeatureCount; ++col) {
            if (col > 0) {
                zeros += ' ';
                ones += ' ';
            }
            zeros += csv::format_hex(0.0);
            ones += csv::format_hex(1.0);
        }
        model::save_checkpoint((dir / "detector.ckpt").string(), p, spec,
                               {{"norm_min", zeros}, {"norm_max", ones}});
    }

    const std::array<int, 5> requested_data{3, 7, 21, 5, 9};
    std::string history = "user_id,data_id,category_id,timestamp,authorized,leaked\n";
    std::string auth = "user_id,category_id,data_id\n";
    std::string requests = "user_id,data_id,category_id,timestamp";
    for (const char* name : data::kFeatureNames) requests += std::string(",") + name;
    requests += '\n';
    for (int user = 1; user <= 5; ++user) {
        history += std::to_string(user) + ',' + std::to_string(user * 100) + ",1,100,1,0\n";
        auth += std::to_string(user) + ",1," + std::to_string(user * 100) + '\n';
        if (user != 2) {
            auth += std::to_string(user) + ",1," + std::to_string(requested_data[user - 1]) +
                    '\n';
        }
        requests += std::to_string(user) + ',' + std::to_string(requested_data[user - 1]) +
                    ",1,200";
        for (int col = 0; col < data::kFeatureCount; ++col) {
            requests += ',';
            requests += col == data::col::leak_ratio ? (user == 5 ? "0.8" : "0.1") : "0.2";
        }
        requests += '\n';
    }
    testutil::write_file(dir / "history.csv", history);
    testutil::write_file(dir / "auth.csv", auth);
    testutil::write_file(dir / "requests.csv", requests);

    testutil::CliResult r = testutil::run_cli(
        "score --no-update-kb --checkpoint " + (dir / "detector.ckpt").string() +
            " --history " + (dir / "history.csv").string() + " --auth " +
            (dir / "auth.csv").string() + " --requests " + (dir / "requests.csv").string(),
        dir / "score.txt");
    c.require(r.exit_code == 2, "scoring run should exit 2 when users are denied, got " +
                                    std::to_string(r.exit_code));

    std::vector<std::string> lines;
    {
        std::istringstream out(r.output);
        std::string line;
        while (std::getline(out, line)) lines.push_back(line);
    }
    c.require(lines.size() == 6, "expected five verdict lines plus a summary");
    for (int user = 1; user <= 5 && user <= static_cast<int>(lines.size()); ++user) {
        const std::string& line = lines[static_cast<std::size_t>(user - 1)];
        const bool denied = line.find("verdict=denied") != std::string::npos;
        const bool should_deny = user == 2 || user == 5;
        c.require(denied == should_deny,
                  "user " + std::to_string(user) + (should_deny ? " should be denied"
                                                                : " should be granted"));
        if (user == 2) {
            c.require(line.find("reason=ube_malicious") != std::string::npos,
                      "user 2 should be denied by the behaviour flags");
        }
        if (user == 5) {
            c.require(line.find("reason=model_malicious") != std::string::npos,
                      "user 5 should be denied by the classifier");
        }
    }
    c.require(!lines.empty() && lines.back() == "granted=3 denied=2",
              "summary line read '" + (lines.empty() ? "" : lines.back()) + "'");
    return c;
}

// ---- criterion 8: byte-identical reruns, serial and parallel ----

Criterion run_determinism_check() {
    Criterion c;
    auto dir = testutil::scratch_dir("acceptance_rerun");
    const std::string common =
        "run --synth-n 3000 --users 10 --k 7 --rounds 5 --epochs 15 --seed 3";

    std::array<std::string, 4> results_files;
    std::array<std::string, 4> checkpoint_files;
    const std::array<std::string, 4> modes{"", "", " --parallel", " --parallel"};
    for (int i = 0; i < 4; ++i) {
        auto results = dir / ("rounds" + std::to_string(i) + ".csv");
        auto ckpt = dir / ("model" + std::to_string(i) + ".ckpt");
        testutil::CliResult r = testutil::run_cli(
            common + modes[i] + " --out " + results.string() + " --checkpoint " + ckpt.string(),
            dir / ("run" + std::to_string(i) + ".txt"));
        c.require(r.exit_code == 0, "rerun " + std::to_string(i) + " failed");
        if (r.exit_code != 0) return c;
        results_files[i] = testutil::slurp(results);
        checkpoint_files[i] = testutil::slurp(ckpt);
    }
    for (int i = 1; i < 4; ++i) {
        c.require(results_files[i] == results_files[0],
                  "results CSV " + std::to_string(i) + " differs from the first run");
        c.require(checkpoint_files[i] == checkpoint_files[0],
                  "checkpoint " + std::to_string(i) + " differs from the first run");
    }
    return c;
}

// ---- criterion 9: normalization, split and partition properties ----

using Signature = std::vector<std::pair<std::array<double, data::kFeatureCount>, int>>;

Signature signature_of(const data::Dataset& d) {
    Signature sig;
    sig.reserve(d.records.size());
    for (const auto& rec : d.records) sig.emplace_back(rec.features, rec.label);
    std::sort(sig.begin(), sig.end());
    return sig;
}

Criterion run_data_properties() {
    Criterion c;
    std::mt19937_64 rng(0xACCE09);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + seeds::bounded(rng, 1500);
        data::Dataset raw;
        for (std::size_t i = 0; i < n; ++i) {
            data::FeatureRecord rec;
            for (int col = 0; col < data::kFeatureCount; ++col) {
                rec.features[col] = std::floor(200.0 * seeds::unit_real(rng)) - 50.0;
            }
            rec.features[4] = 7.0;  // one deliberately constant column
            rec.label = static_cast<int>(seeds::bounded(rng, 3)) + 1;
            raw.records.push_back(rec);
        }

        data::Dataset norm = data::normalize(raw);
        for (int col = 0; col < data::kFeatureCount; ++col) {
            double lo = 1e300, hi = -1e300;
            double raw_lo = 1e300, raw_hi = -1e300;
            for (std::size_t i = 0; i < n; ++i) {
                lo = std::min(lo, norm.records[i].features[col]);
                hi = std::max(hi, norm.records[i].features[col]);
                raw_lo = std::min(raw_lo, raw.records[i].features[col]);
                raw_hi = std::max(raw_hi, raw.records[i].features[col]);
            }
            c.require(lo >= 0.0 && hi <= 1.0, "normalized values escape [0,1]");
            if (raw_lo < raw_hi) {
                c.require(lo == 0.0, "column minimum does not map to 0");
                c.require(hi == 1.0, "column maximum does not map to 1");
            } else {
                c.require(lo == 0.0 && hi == 0.0, "constant column should map to 0");
            }
        }

        data::SplitSpec split_spec{0.8, rng()};
        auto [train, test] = data::split(raw, split_spec);
        long long want_train = std::llround(0.8 * static_cast<double>(n));
        want_train = std::clamp<long long>(want_train, 1, static_cast<long long>(n) - 1);
        c.require(static_cast<long long>(train.size()) == want_train,
                  "train split is not the rounded 80%");
        c.require(train.size() + test.size() == n, "split loses or invents records");
        data::Dataset merged = train;
        merged.records.insert(merged.records.end(), test.records.begin(), test.records.end());
        c.require(signature_of(merged) == signature_of(raw),
                  "split does not preserve the record multiset");

        const int k = 1 + static_cast<int>(seeds::bounded(rng, std::min<std::size_t>(n, 12)));
        auto shards = data::partition(raw, k, rng());
        c.require(static_cast<int>(shards.size()) == k, "wrong shard count");
        data::Dataset reunion;
        for (std::size_t i = 0; i < shards.size(); ++i) {
            const std::size_t base = n / static_cast<std::size_t>(k);
            const std::size_t want =
                base + (i < n % static_cast<std::size_t>(k) ? 1 : 0);
            c.require(shards[i].size() == want, "shard sizes are not balanced");
            reunion.records.insert(reunion.records.end(), shards[i].records.begin(),
                                   shards[i].records.end());
        }
        c.require(signature_of(reunion) == signature_of(raw),
                  "partition does not preserve the record multiset");
    }
    return c;
}

// ---- harness ----

int report(int index, const std::string& label, const Criterion& c, double seconds,
           double budget) {
    Criterion final = c;
    if (budget > 0.0) {
        final.require(seconds <= budget, "took " + csv::format_fixed(seconds, 2) +
                                             " s, budget " + csv::format_fixed(budget, 0) +
                                             " s");
    }
    std::printf("criterion %d: %s (%.2f s) %s\n", index, final.pass ? "PASS" : "FAIL", seconds,
                label.c_str());
    for (const std::string& note : final.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    return final.pass ? 0 : 1;
}

template <typename Fn>
int timed(int index, const std::string& label, double budget, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c = fn();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report(index, label, c, seconds, budget);
}

}  // namespace

int main() {
    int failures = 0;

    failures += timed(1, "behaviour assessment matches an exhaustive reference on 1000 fixtures",
                      5.0, run_ube_oracle);
    failures += timed(2, "backpropagation matches central finite differences on 50 networks",
                      30.0, run_gradient_check);
    failures += timed(3, "aggregation is an exact, properly weighted, order-fixed mean", 10.0,
                      run_fedavg_properties);

    RunOutcome big = run_training_scenario("big", 10, 10, 0.90, 0.30, true, 600.0);
    failures += report(4, "ten-user training run reaches the accuracy and loss targets",
                       big.crit, big.seconds, 0.0);

    RunOutcome small = run_training_scenario("small", 5, 5, 0.90, 0.0, false, 360.0);
    failures += report(5, "five-user training run reaches the accuracy target", small.crit,
                       small.seconds, 0.0);

    failures += timed(6, "metric reports match independent per-class formulas on 200 matrices",
                      5.0, run_metrics_oracle);
    failures += timed(7, "access gate follows the or-rule and denies exactly users 2 and 5", 1.0,
                      run_gate_checks);

    {
        const auto start = std::chrono::steady_clock::now();
        Criterion c = run_determinism_check();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double budget = 2.0 * std::max(big.seconds, 1.0);
        failures += report(8, "repeated runs are byte-identical, serial and parallel", c,
                           seconds, budget);
    }

    failures += timed(9, "normalization, split and partition keep their structural promises",
                      5.0, run_data_properties);

    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
