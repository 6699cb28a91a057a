#include "fedscreen/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fedscreen/csv.hpp"
#include "fedscreen/seeds.hpp"

namespace fedscreen::model {

namespace {

struct Offsets {
    std::vector<std::size_t> weight;
    std::vector<std::size_t> bias;
    std::size_t total = 0;
};

Offsets offsets_for(const std::vector<int>& sizes) {
    Offsets off;
    std::size_t cursor = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        off.weight.push_back(cursor);
        cursor += static_cast<std::size_t>(sizes[l]) * static_cast<std::size_t>(sizes[l + 1]);
    }
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        off.bias.push_back(cursor);
        cursor += static_cast<std::size_t>(sizes[l + 1]);
    }
    off.total = cursor;
    return off;
}

struct Scratch {
    std::vector<std::vector<double>> acts;
    std::vector<double> delta;
    std::vector<double> delta_prev;
};

Scratch make_scratch(const std::vector<int>& sizes) {
    Scratch s;
    s.acts.resize(sizes.size());
    int widest = 0;
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        s.acts[l].resize(static_cast<std::size_t>(sizes[l]));
        widest = std::max(widest, sizes[l]);
    }
    s.delta.resize(static_cast<std::size_t>(widest));
    s.delta_prev.resize(static_cast<std::size_t>(widest));
    return s;
}

void check_pair(const ParameterVector& params, const NetworkSpec& spec) {
    if (params.fingerprint != spec.fingerprint()) {
        throw std::invalid_argument("parameter vector does not match the network fingerprint");
    }
    if (params.values.size() != spec.param_count()) {
        throw std::invalid_argument("parameter vector length does not match the network");
    }
}

void check_label(int label) {
    if (label < 1 || label > 3) {
        throw std::invalid_argument("record label " + std::to_string(label) + " outside {1,2,3}");
    }
}

void forward_into(const std::vector<double>& values, const std::vector<int>& sizes,
                  const Offsets& off, const double* input, Scratch& s) {
    const std::size_t layers = sizes.size();
    std::copy(input, input + sizes[0], s.acts[0].begin());
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        const int in_n = sizes[l];
        const int out_n = sizes[l + 1];
        const double* w = values.data() + off.weight[l];
        const double* b = values.data() + off.bias[l];
        const double* a = s.acts[l].data();
        double* z = s.acts[l + 1].data();
        for (int o = 0; o < out_n; ++o) {
            double sum = b[o];
            const double* row = w + static_cast<std::size_t>(o) * in_n;
            for (int i = 0; i < in_n; ++i) sum += row[i] * a[i];
            z[o] = sum;
        }
        if (l + 2 < layers) {
            for (int o = 0; o < out_n; ++o) z[o] = z[o] > 0.0 ? z[o] : 0.0;
        } else {
            double peak = z[0];
            for (int o = 1; o < out_n; ++o) peak = std::max(peak, z[o]);
            double norm = 0.0;
            for (int o = 0; o < out_n; ++o) {
                z[o] = std::exp(z[o] - peak);
                norm += z[o];
            }
            for (int o = 0; o < out_n; ++o) z[o] /= norm;
        }
    }
}

double sample_loss(double prob_of_label) {
    return -std::log(std::max(prob_of_label, 1e-12));
}

// Adds this sample's contribution (softmax cross-entropy, delta = p - y)
// into `grad`; expects forward_into to have just run.
void accumulate_gradient(const std::vector<double>& values, const std::vector<int>& sizes,
                         const Offsets& off, Scratch& s, int label, std::vector<double>& grad) {
    const std::size_t layers = sizes.size();
    const std::vector<double>& probs = s.acts[layers - 1];
    for (std::size_t o = 0; o < probs.size(); ++o) s.delta[o] = probs[o];
    s.delta[label - 1] -= 1.0;

    for (std::size_t l = layers - 1; l-- > 0;) {
        const int in_n = sizes[l];
        const int out_n = sizes[l + 1];
        double* gw = grad.data() + off.weight[l];
        double* gb = grad.data() + off.bias[l];
        const double* a = s.acts[l].data();
        for (int o = 0; o < out_n; ++o) {
            const double d = s.delta[o];
            double* row = gw + static_cast<std::size_t>(o) * in_n;
            for (int i = 0; i < in_n; ++i) row[i] += d * a[i];
            gb[o] += d;
        }
        if (l > 0) {
            const double* w = values.data() + off.weight[l];
            for (int i = 0; i < in_n; ++i) s.delta_prev[i] = 0.0;
            for (int o = 0; o < out_n; ++o) {
                const double d = s.delta[o];
                const double* row = w + static_cast<std::size_t>(o) * in_n;
                for (int i = 0; i < in_n; ++i) s.delta_prev[i] += row[i] * d;
            }
            for (int i = 0; i < in_n; ++i) {
                s.delta[i] = a[i] > 0.0 ? s.delta_prev[i] : 0.0;
            }
        }
    }
}

}  // namespace

std::string variant_name(Variant variant) {
    return variant == Variant::AFed ? "afed" : "dfed";
}

Variant parse_variant(const std::string& name) {
    if (name == "afed") return Variant::AFed;
    if (name == "dfed") return Variant::DFed;
    throw std::invalid_argument("unknown variant '" + name + "', expected afed or dfed");
}

void NetworkSpec::validate() const {
    if (layer_sizes.size() < 3) throw std::invalid_argument("network needs a hidden layer");
    for (int s : layer_sizes) {
        if (s < 1) throw std::invalid_argument("layer sizes must be positive");
    }
    if (layer_sizes.front() != data::kFeatureCount) {
        throw std::invalid_argument("input layer must match the feature count");
    }
    if (layer_sizes.back() != 3) throw std::invalid_argument("output layer must have 3 classes");
    const std::size_t hidden = layer_sizes.size() - 2;
    if (variant == Variant::AFed && hidden != 1) {
        throw std::invalid_argument("the afed variant has exactly one hidden layer");
    }
    if (variant == Variant::DFed && hidden < 2) {
        throw std::invalid_argument("the dfed variant needs at least two hidden layers");
    }
}

std::size_t NetworkSpec::param_count() const {
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        total += static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l + 1];
        total += static_cast<std::size_t>(layer_sizes[l + 1]);
    }
    return total;
}

std::uint64_t NetworkSpec::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix_byte = [&h](unsigned char b) {
        h ^= b;
        h *= 1099511628211ULL;
    };
    mix_byte(variant == Variant::AFed ? 1 : 2);
    for (int s : layer_sizes) {
        auto u = static_cast<std::uint64_t>(s);
        for (int shift = 0; shift < 64; shift += 8) {
            mix_byte(static_cast<unsigned char>(u >> shift));
        }
    }
    return h;
}

void TrainingConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("epoch count must be non-negative");
    if (batch_size < 1) throw std::invalid_argument("batch size must be positive");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw std::invalid_argument("adam betas must lie strictly between 0 and 1");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("adam epsilon must be positive");
}

ParameterVector init_params(const NetworkSpec& spec, std::uint64_t seed) {
    spec.validate();
    const Offsets off = offsets_for(spec.layer_sizes);
    ParameterVector out;
    out.fingerprint = spec.fingerprint();
    out.values.assign(off.total, 0.0);

    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(spec.layer_sizes[l]));
        const std::size_t count = static_cast<std::size_t>(spec.layer_sizes[l]) *
                                  static_cast<std::size_t>(spec.layer_sizes[l + 1]);
        for (std::size_t j = 0; j < count; ++j) {
            out.values[off.weight[l] + j] = (2.0 * seeds::unit_real(rng) - 1.0) * scale;
        }
    }
    return out;
}

std::array<double, 3> forward(const ParameterVector& params, const NetworkSpec& spec,
                              const std::array<double, data::kFeatureCount>& features) {
    spec.validate();
    check_pair(params, spec);
    for (double f : features) {
        if (!std::isfinite(f)) throw std::invalid_argument("non-finite feature value");
    }
    Scratch scratch = make_scratch(spec.layer_sizes);
    forward_into(params.values, spec.layer_sizes, offsets_for(spec.layer_sizes),
                 features.data(), scratch);
    const std::vector<double>& probs = scratch.acts.back();
    return {probs[0], probs[1], probs[2]};
}

double loss(const ParameterVector& params, const NetworkSpec& spec,
            const std::vector<data::FeatureRecord>& batch) {
    spec.validate();
    check_pair(params, spec);
    if (batch.empty()) throw std::invalid_argument("loss needs a non-empty batch");

    const Offsets off = offsets_for(spec.layer_sizes);
    Scratch scratch = make_scratch(spec.layer_sizes);
    double total = 0.0;
    for (const data::FeatureRecord& rec : batch) {
        check_label(rec.label);
        forward_into(params.values, spec.layer_sizes, off, rec.features.data(), scratch);
        total += sample_loss(scratch.acts.back()[rec.label - 1]);
    }
    return total / static_cast<double>(batch.size());
}

ParameterVector gradient(const ParameterVector& params, const NetworkSpec& spec,
                         const std::vector<data::FeatureRecord>& batch) {
    spec.validate();
    check_pair(params, spec);
    if (batch.empty()) throw std::invalid_argument("gradient needs a non-empty batch");

    const Offsets off = offsets_for(spec.layer_sizes);
    Scratch scratch = make_scratch(spec.layer_sizes);
    ParameterVector out;
    out.fingerprint = params.fingerprint;
    out.values.assign(off.total, 0.0);
    for (const data::FeatureRecord& rec : batch) {
        check_label(rec.label);
        forward_into(params.values, spec.layer_sizes, off, rec.features.data(), scratch);
        accumulate_gradient(params.values, spec.layer_sizes, off, scratch, rec.label,
                            out.values);
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double& g : out.values) g *= inv;
    return out;
}

TrainResult train_local(const ParameterVector& params, const NetworkSpec& spec,
                        const data::Dataset& shard, const TrainingConfig& config) {
    spec.validate();
    config.validate();
    check_pair(params, spec);
    if (shard.records.empty()) throw std::invalid_argument("cannot train on an empty shard");
    if (!shard.normalized()) {
        throw std::invalid_argument("shard must be normalized before training");
    }
    for (const data::FeatureRecord& rec : shard.records) check_label(rec.label);

    TrainResult result;
    result.params = params;
    if (config.epochs == 0) {
        result.final_loss = loss(params, spec, shard.records);
        return result;
    }

    const Offsets off = offsets_for(spec.layer_sizes);
    Scratch scratch = make_scratch(spec.layer_sizes);
    const std::size_t n = shard.records.size();
    const auto batch_size = static_cast<std::size_t>(config.batch_size);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);

    std::vector<double>& w = result.params.values;
    std::vector<double> grad(off.total, 0.0);
    std::vector<double> moment1(off.total, 0.0);
    std::vector<double> moment2(off.total, 0.0);
    double beta1_t = 1.0;
    double beta2_t = 1.0;
    double epoch_loss = 0.0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        seeds::shuffle(order, rng);
        epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t stop = std::min(n, start + batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t idx = start; idx < stop; ++idx) {
                const data::FeatureRecord& rec = shard.records[order[idx]];
                forward_into(w, spec.layer_sizes, off, rec.features.data(), scratch);
                epoch_loss += sample_loss(scratch.acts.back()[rec.label - 1]);
                accumulate_gradient(w, spec.layer_sizes, off, scratch, rec.label, grad);
            }

            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            beta1_t *= config.beta1;
            beta2_t *= config.beta2;
            const double correct1 = 1.0 - beta1_t;
            const double correct2 = 1.0 - beta2_t;
            for (std::size_t j = 0; j < off.total; ++j) {
                const double g = grad[j] * inv_batch;
                moment1[j] = config.beta1 * moment1[j] + (1.0 - config.beta1) * g;
                moment2[j] = config.beta2 * moment2[j] + (1.0 - config.beta2) * g * g;
                w[j] -= config.learning_rate * (moment1[j] / correct1) /
                        (std::sqrt(moment2[j] / correct2) + config.epsilon);
            }
        }
    }
    result.final_loss = epoch_loss / static_cast<double>(n);
    return result;
}

int predict(const ParameterVector& params, const NetworkSpec& spec,
            const std::array<double, data::kFeatureCount>& features) {
    std::array<double, 3> probs = forward(params, spec, features);
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return best + 1;
}

void save_checkpoint(const std::string& path, const ParameterVector& params,
                     const NetworkSpec& spec, const std::map<std::string, std::string>& meta) {
    spec.validate();
    check_pair(params, spec);
    for (const auto& [key, value] : meta) {
        if (key.empty() || key.find_first_of(" \n") != std::string::npos ||
            value.find('\n') != std::string::npos) {
            throw std::invalid_argument("checkpoint meta keys must be single tokens");
        }
    }

    std::ofstream out(path);
    if (!out.is_open()) throw std::runtime_error("cannot open " + path + " for writing");
    out << "fedscreen-checkpoint v1\n";
    out << "layers";
    for (int s : spec.layer_sizes) out << ' ' << s;
    out << '\n';
    out << "variant " << variant_name(spec.variant) << '\n';

    std::array<char, 32> hex;
    auto [fp_end, fp_ec] =
        std::to_chars(hex.data(), hex.data() + hex.size(), spec.fingerprint(), 16);
    out << "fingerprint " << std::string_view(hex.data(), fp_end - hex.data()) << '\n';

    for (const auto& [key, value] : meta) out << "meta " << key << ' ' << value << '\n';

    out << "params " << params.values.size() << '\n';
    for (double v : params.values) out << csv::format_hex(v) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw std::runtime_error("cannot open " + path);

    auto next_line = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line)) {
            throw std::runtime_error(path + ": truncated checkpoint, expected " +
                                     std::string(what));
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line("magic") != "fedscreen-checkpoint v1") {
        throw std::runtime_error(path + ": not a checkpoint file");
    }

    Checkpoint out;
    {
        std::istringstream tokens(next_line("layers"));
        std::string tag;
        tokens >> tag;
        if (tag != "layers") throw std::runtime_error(path + ": expected layers line");
        int size = 0;
        while (tokens >> size) out.spec.layer_sizes.push_back(size);
    }
    {
        std::istringstream tokens(next_line("variant"));
        std::string tag, name;
        tokens >> tag >> name;
        if (tag != "variant") throw std::runtime_error(path + ": expected variant line");
        out.spec.variant = parse_variant(name);
    }
    out.spec.validate();

    std::uint64_t stored_fp = 0;
    {
        std::istringstream tokens(next_line("fingerprint"));
        std::string tag, hex;
        tokens >> tag >> hex;
        if (tag != "fingerprint") throw std::runtime_error(path + ": expected fingerprint line");
        auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), stored_fp, 16);
        if (ec != std::errc{} || ptr != hex.data() + hex.size()) {
            throw std::runtime_error(path + ": bad fingerprint");
        }
    }
    if (stored_fp != out.spec.fingerprint()) {
        throw std::runtime_error(path + ": fingerprint does not match the stored architecture");
    }
    out.params.fingerprint = stored_fp;

    std::string line = next_line("meta or params");
    while (line.rfind("meta ", 0) == 0) {
        std::string rest = line.substr(5);
        auto space = rest.find(' ');
        if (space == std::string::npos || space == 0) {
            throw std::runtime_error(path + ": malformed meta line");
        }
        out.meta[rest.substr(0, space)] = rest.substr(space + 1);
        line = next_line("meta or params");
    }

    std::size_t count = 0;
    {
        std::istringstream tokens(line);
        std::string tag;
        tokens >> tag >> count;
        if (tag != "params") throw std::runtime_error(path + ": expected params line");
    }
    if (count != out.spec.param_count()) {
        throw std::runtime_error(path + ": parameter count does not match the architecture");
    }

    out.params.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double value = csv::parse_hex(next_line("parameter value"), path);
        if (!std::isfinite(value)) {
            throw std::runtime_error(path + ": non-finite parameter value");
        }
        out.params.values.push_back(value);
    }
    return out;
}

}  // namespace fedscreen::model
