#include "fedscreen/metrics.hpp"

#include <stdexcept>
#include <string>

namespace fedscreen::metrics {

namespace {

double ratio(long long num, long long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

long long ConfusionMatrix::total() const {
    long long sum = 0;
    for (const auto& row : counts) {
        for (long long c : row) sum += c;
    }
    return sum;
}

long long ConfusionMatrix::trace() const {
    return counts[0][0] + counts[1][1] + counts[2][2];
}

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels) {
    if (true_labels.size() != predicted_labels.size()) {
        throw std::invalid_argument("label sequences differ in length");
    }
    if (true_labels.empty()) throw std::invalid_argument("no samples to tally");

    ConfusionMatrix cm;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i];
        const int p = predicted_labels[i];
        if (t < 1 || t > 3 || p < 1 || p > 3) {
            throw std::invalid_argument("label outside {1,2,3} at sample " + std::to_string(i));
        }
        ++cm.counts[t - 1][p - 1];
    }
    return cm;
}

std::array<PerClassMetrics, 3> per_class(const ConfusionMatrix& cm) {
    const long long total = cm.total();
    std::array<PerClassMetrics, 3> out{};
    for (int k = 0; k < 3; ++k) {
        PerClassMetrics& m = out[k];
        m.tp = cm.counts[k][k];
        for (int j = 0; j < 3; ++j) {
            if (j == k) continue;
            m.fn += cm.counts[k][j];
            m.fp += cm.counts[j][k];
        }
        m.support = m.tp + m.fn;
        m.tn = total - m.tp - m.fp - m.fn;
        m.precision = ratio(m.tp, m.tp + m.fp);
        m.recall = ratio(m.tp, m.tp + m.fn);
        m.f1 = m.precision + m.recall == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    return out;
}

MetricsReport report(const ConfusionMatrix& cm) {
    const long long total = cm.total();
    if (total < 1) throw std::invalid_argument("cannot report on an empty confusion matrix");

    const std::array<PerClassMetrics, 3> classes = per_class(cm);
    MetricsReport out;
    out.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    // Weighted recall is Σ support·(tp/support)/total = trace/total; using
    // that closed form keeps the accuracy/recall identity exact in floats.
    out.recall = out.accuracy;
    double precision_sum = 0.0;
    double f1_sum = 0.0;
    for (const PerClassMetrics& m : classes) {
        precision_sum += static_cast<double>(m.support) * m.precision;
        f1_sum += static_cast<double>(m.support) * m.f1;
    }
    out.precision = precision_sum / static_cast<double>(total);
    out.f1 = f1_sum / static_cast<double>(total);
    return out;
}

}  // namespace fedscreen::metrics
