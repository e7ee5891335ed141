#include "classifier.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "error.hpp"

namespace hybridchain {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

std::array<double, 5> standardize(const AttributeVector& a, const WeightVector& y) {
    std::array<double, 5> raw = a.as_array();
    std::array<double, 5> out;
    for (int i = 0; i < 5; ++i) out[static_cast<std::size_t>(i)] =
        (raw[static_cast<std::size_t>(i)] - y.mean[static_cast<std::size_t>(i)]) / y.scale[static_cast<std::size_t>(i)];
    return out;
}

double margin(const AttributeVector& a, const WeightVector& y) {
    std::array<double, 5> z = standardize(a, y);
    double m = y.bias;
    for (int i = 0; i < 5; ++i) m += z[static_cast<std::size_t>(i)] * y.weights[static_cast<std::size_t>(i)];
    return m;
}

}  // namespace

double score(const AttributeVector& a, const WeightVector& y) { return sigmoid(margin(a, y)); }

std::pair<double, double> thresholds(const AttributeVector& a, const WeightVector& y,
                                     const ThresholdParams& params) {
    const double eta1 = params.mu1 - score(a, y) / 2.0;
    // eta2 = mu2 - sigma/2, written so the band width eta1 - eta2 is exactly
    // mu1 - mu2 in floating point.
    return {eta1, eta1 - (params.mu1 - params.mu2)};
}

double loss(const std::vector<TrainingExample>& examples, const WeightVector& y, double ridge) {
    const double n = static_cast<double>(examples.size());
    double total = 0.0;
    for (const TrainingExample& e : examples) {
        double m = margin(e.attributes, y);
        // -[v*log(sigmoid) + (1-v)*log(1-sigmoid)] = log(1+e^m) - v*m, stabilized
        double softplus = m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
        total += softplus - (e.label ? m : 0.0);
    }
    double reg = 0.0;
    for (double w : y.weights) reg += w * w;
    return total / n + 0.5 * ridge * reg;
}

std::array<double, 6> gradient(const std::vector<TrainingExample>& examples, const WeightVector& y,
                               double ridge) {
    const double n = static_cast<double>(examples.size());
    std::array<double, 6> g{};
    for (const TrainingExample& e : examples) {
        std::array<double, 5> z = standardize(e.attributes, y);
        double m = y.bias;
        for (int i = 0; i < 5; ++i) m += z[static_cast<std::size_t>(i)] * y.weights[static_cast<std::size_t>(i)];
        double err = sigmoid(m) - (e.label ? 1.0 : 0.0);
        for (int i = 0; i < 5; ++i) g[static_cast<std::size_t>(i)] += err * z[static_cast<std::size_t>(i)];
        g[5] += err;
    }
    for (int i = 0; i < 5; ++i)
        g[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] / n + ridge * y.weights[static_cast<std::size_t>(i)];
    g[5] /= n;
    return g;
}

std::optional<WeightVector> train(const std::vector<TrainingExample>& examples, const TrainOptions& opt) {
    if (examples.empty()) return std::nullopt;
    bool saw0 = false, saw1 = false;
    for (const TrainingExample& e : examples) (e.label ? saw1 : saw0) = true;
    if (!saw0 || !saw1) return std::nullopt;

    WeightVector y;
    const double n = static_cast<double>(examples.size());
    for (int i = 0; i < 5; ++i) {
        double s = 0.0;
        for (const TrainingExample& e : examples) s += e.attributes.as_array()[static_cast<std::size_t>(i)];
        y.mean[static_cast<std::size_t>(i)] = s / n;
    }
    for (int i = 0; i < 5; ++i) {
        double s = 0.0;
        for (const TrainingExample& e : examples) {
            double d = e.attributes.as_array()[static_cast<std::size_t>(i)] - y.mean[static_cast<std::size_t>(i)];
            s += d * d;
        }
        double sd = std::sqrt(s / n);
        y.scale[static_cast<std::size_t>(i)] = sd > 1e-12 ? sd : 1.0;
    }

    for (int it = 0; it < opt.iterations; ++it) {
        std::array<double, 6> g = gradient(examples, y, opt.ridge);
        for (int i = 0; i < 5; ++i) y.weights[static_cast<std::size_t>(i)] -= opt.step * g[static_cast<std::size_t>(i)];
        y.bias -= opt.step * g[5];
    }
    return y;
}

std::optional<WeightVector> retrain_epoch_hook(const std::vector<TrainingExample>& window, long epoch,
                                               int cadence, const TrainOptions& opt) {
    if (cadence < 1) throw ConfigError("classifier: cadence must be >= 1");
    if (epoch <= 0 || epoch % cadence != 0) return std::nullopt;
    return train(window, opt);
}

std::string WeightVector::to_record() const {
    std::ostringstream os;
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << ' ';
    };
    for (double w : weights) put(w);
    put(bias);
    for (double m : mean) put(m);
    for (double s : scale) put(s);
    std::string out = os.str();
    out.pop_back();
    return out;
}

WeightVector WeightVector::from_record(const std::string& line) {
    std::istringstream is(line);
    WeightVector y;
    for (double& w : y.weights) is >> w;
    is >> y.bias;
    for (double& m : y.mean) is >> m;
    for (double& s : y.scale) is >> s;
    if (!is) throw ConfigError("classifier: malformed weight record");
    return y;
}

}  // namespace hybridchain
