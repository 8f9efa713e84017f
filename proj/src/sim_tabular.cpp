#include <cmath>
#include <numbers>

#include "causal_atlas/error.hpp"
#include "causal_atlas/simulate.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

namespace {

constexpr double kWeightLo = 0.5;
constexpr double kWeightHi = 2.0;
constexpr int kHiddenWidth = 100;
constexpr double kEulerGamma = 0.57721566490153286;

// Independent streams per stage, so switching one stage off leaves the others untouched.
enum Stream : std::uint64_t { sem = 1, discretize = 2, measurement = 3, missing = 4, domain = 5, weights = 6 };

void check_ratio(double r, const char* name) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::RateOutOfRange, std::string(name) + " must lie in [0,1]");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string to_string(FunctionType f) { return f == FunctionType::linear ? "linear" : "mlp"; }

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::exponential: return "exponential";
        case NoiseKind::gumbel: return "gumbel";
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::logistic: return "logistic";
    }
    return "gaussian";
}

std::string to_string(GraphType g) {
    switch (g) {
        case GraphType::erdos_renyi: return "erdos_renyi";
        case GraphType::barabasi_albert: return "barabasi_albert";
        case GraphType::full: return "full";
    }
    return "erdos_renyi";
}

FunctionType parse_function_type(const std::string& s) {
    if (s == "linear") return FunctionType::linear;
    if (s == "mlp") return FunctionType::mlp;
    throw Error(ErrorCode::InvalidArgument, "unknown function type '" + s + "'");
}

NoiseKind parse_noise_kind(const std::string& s) {
    for (auto k : {NoiseKind::gaussian, NoiseKind::exponential, NoiseKind::gumbel, NoiseKind::uniform,
                   NoiseKind::logistic})
        if (to_string(k) == s) return k;
    throw Error(ErrorCode::InvalidArgument, "unknown noise kind '" + s + "'");
}

GraphType parse_graph_type(const std::string& s) {
    for (auto g : {GraphType::erdos_renyi, GraphType::barabasi_albert, GraphType::full})
        if (to_string(g) == s) return g;
    throw Error(ErrorCode::InvalidArgument, "unknown graph type '" + s + "'");
}

void TabularScenario::validate() const {
    if (n_nodes < 1) throw Error(ErrorCode::InvalidArgument, "n_nodes must be at least 1");
    if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
    check_ratio(edge_prob, "edge_prob");
    check_ratio(discrete_ratio, "discrete_ratio");
    check_ratio(measurement_error_ratio, "measurement_error_ratio");
    if (!(missing_rate >= 0.0 && missing_rate < 1.0))
        throw Error(ErrorCode::RateOutOfRange, "missing_rate must lie in [0,1)");
    if (!(noise_scale > 0)) throw Error(ErrorCode::InvalidArgument, "noise_scale must be positive");
    if (!(measurement_error_sd >= 0)) throw Error(ErrorCode::InvalidArgument, "measurement_error_sd must be >= 0");
    if (discrete_cardinality < 2) throw Error(ErrorCode::InvalidArgument, "discrete_cardinality must be at least 2");
    if (n_domains < 1) throw Error(ErrorCode::InvalidArgument, "n_domains must be at least 1");
}

nlohmann::json to_json(const TabularScenario& s) {
    return {{"n_nodes", s.n_nodes},
            {"n_samples", s.n_samples},
            {"edge_prob", s.edge_prob},
            {"function_type", to_string(s.function_type)},
            {"noise", to_string(s.noise)},
            {"noise_scale", s.noise_scale},
            {"discrete_ratio", s.discrete_ratio},
            {"discrete_cardinality", s.discrete_cardinality},
            {"measurement_error_ratio", s.measurement_error_ratio},
            {"measurement_error_sd", s.measurement_error_sd},
            {"missing_rate", s.missing_rate},
            {"n_domains", s.n_domains},
            {"domain_shift", s.domain_shift},
            {"seed", s.seed}};
}

TabularScenario tabular_scenario_from_json(const nlohmann::json& j) {
    TabularScenario s;
    s.n_nodes = j.value("n_nodes", s.n_nodes);
    s.n_samples = j.value("n_samples", s.n_samples);
    s.edge_prob = j.value("edge_prob", s.edge_prob);
    if (j.contains("function_type")) s.function_type = parse_function_type(j["function_type"].get<std::string>());
    if (j.contains("noise")) s.noise = parse_noise_kind(j["noise"].get<std::string>());
    s.noise_scale = j.value("noise_scale", s.noise_scale);
    s.discrete_ratio = j.value("discrete_ratio", s.discrete_ratio);
    s.discrete_cardinality = j.value("discrete_cardinality", s.discrete_cardinality);
    s.measurement_error_ratio = j.value("measurement_error_ratio", s.measurement_error_ratio);
    s.measurement_error_sd = j.value("measurement_error_sd", s.measurement_error_sd);
    s.missing_rate = j.value("missing_rate", s.missing_rate);
    s.n_domains = j.value("n_domains", s.n_domains);
    s.domain_shift = j.value("domain_shift", s.domain_shift);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

VectorXd sample_noise(NoiseKind kind, double scale, Index n, Rng& rng) {
    if (!(scale > 0)) throw Error(ErrorCode::InvalidArgument, "noise scale must be positive");
    VectorXd e(n);
    switch (kind) {
        case NoiseKind::gaussian: {
            std::normal_distribution<double> d(0.0, 1.0);
            for (Index i = 0; i < n; ++i) e(i) = d(rng);
            break;
        }
        case NoiseKind::exponential: {
            std::exponential_distribution<double> d(1.0);
            for (Index i = 0; i < n; ++i) e(i) = d(rng) - 1.0;
            break;
        }
        case NoiseKind::gumbel: {
            std::extreme_value_distribution<double> d(0.0, 1.0);
            const double sd = std::numbers::pi / std::sqrt(6.0);
            for (Index i = 0; i < n; ++i) e(i) = (d(rng) - kEulerGamma) / sd;
            break;
        }
        case NoiseKind::uniform: {
            std::uniform_real_distribution<double> d(-std::sqrt(3.0), std::sqrt(3.0));
            for (Index i = 0; i < n; ++i) e(i) = d(rng);
            break;
        }
        case NoiseKind::logistic: {
            std::uniform_real_distribution<double> d(0.0, 1.0);
            const double sd = std::numbers::pi / std::sqrt(3.0);
            for (Index i = 0; i < n; ++i) {
                double u = d(rng);
                while (u <= 0.0) u = d(rng);
                e(i) = std::log(u / (1.0 - u)) / sd;
            }
            break;
        }
    }
    return e * scale;
}

MatrixXd sample_sem(const Dag& dag, FunctionType function_type, NoiseKind noise, double noise_scale, int n_samples,
                    Rng& rng) {
    const int p = dag.n_nodes();
    auto order = topological_order(dag.edges());
    MatrixXd x(n_samples, p);
    MatrixXd w = dag.weights() ? *dag.weights() : MatrixXd(dag.edges().cast<double>());
    for (int j : *order) {
        std::vector<int> parents;
        for (int i = 0; i < p; ++i)
            if (dag.has_edge(i, j)) parents.push_back(i);
        VectorXd e = sample_noise(noise, noise_scale, n_samples, rng);
        if (parents.empty()) {
            x.col(j) = e;
            continue;
        }
        if (function_type == FunctionType::linear) {
            VectorXd s = VectorXd::Zero(n_samples);
            for (int i : parents) s += w(i, j) * x.col(i);
            x.col(j) = s + e;
        } else {
            const Index k = static_cast<Index>(parents.size());
            MatrixXd w1(k, kHiddenWidth);
            VectorXd w2(kHiddenWidth);
            for (Index a = 0; a < k; ++a)
                for (int b = 0; b < kHiddenWidth; ++b) w1(a, b) = signed_uniform(rng, kWeightLo, kWeightHi);
            for (int b = 0; b < kHiddenWidth; ++b) w2(b) = signed_uniform(rng, kWeightLo, kWeightHi);
            MatrixXd xp(n_samples, k);
            for (Index a = 0; a < k; ++a) xp.col(a) = x.col(parents[static_cast<std::size_t>(a)]);
            MatrixXd hidden = (xp * w1).unaryExpr([](double v) { return sigmoid(v); });
            x.col(j) = hidden * w2 + e;
        }
    }
    return x;
}

IntVector categorical_from_logits(const VectorXd& z, const VectorXd& logit_weights, Rng& rng) {
    const Index k = logit_weights.size();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    IntVector labels(z.size());
    VectorXd logits(k);
    for (Index i = 0; i < z.size(); ++i) {
        for (Index c = 0; c < k; ++c) logits(c) = logit_weights(c) * z(i) + gauss(rng);
        VectorXd prob = (logits.array() - logits.maxCoeff()).exp();
        prob /= prob.sum();
        double u = unif(rng), acc = 0.0;
        Index chosen = k - 1;
        for (Index c = 0; c < k; ++c) {
            acc += prob(c);
            if (u < acc) {
                chosen = c;
                break;
            }
        }
        labels(i) = static_cast<int>(chosen);
    }
    return labels;
}

Dataset discretize_columns(const Dataset& data, const Dag& dag, double ratio, int cardinality, Rng& rng) {
    check_ratio(ratio, "discrete_ratio");
    if (dag.n_nodes() != data.n_columns()) throw Error(ErrorCode::DimensionMismatch, "DAG and dataset widths differ");
    const int p = static_cast<int>(data.n_columns());
    const int count = static_cast<int>(std::floor(ratio * p + 1e-9));
    if (count == 0) return data;
    auto chosen = sample_without_replacement(p, count, rng);
    std::sort(chosen.begin(), chosen.end());
    MatrixXd values = data.values();
    auto columns = data.columns();
    for (int j : chosen) {
        if (columns[static_cast<std::size_t>(j)].kind == ColumnKind::discrete) continue;
        VectorXd z = standardize_columns(values.col(j));
        VectorXd a(cardinality);
        for (int c = 0; c < cardinality; ++c) a(c) = signed_uniform(rng, kWeightLo, kWeightHi);
        IntVector labels = categorical_from_logits(z, a, rng);
        for (Index i = 0; i < values.rows(); ++i)
            if (!std::isnan(values(i, j))) values(i, j) = labels(i);
        columns[static_cast<std::size_t>(j)].kind = ColumnKind::discrete;
        columns[static_cast<std::size_t>(j)].cardinality = cardinality;
    }
    return data.with_values_and_columns(std::move(values), std::move(columns));
}

Dataset apply_measurement_error(const Dataset& data, double column_ratio, double sd, Rng& rng) {
    check_ratio(column_ratio, "measurement_error_ratio");
    if (!(sd >= 0)) throw Error(ErrorCode::InvalidArgument, "measurement error sd must be >= 0");
    std::vector<int> continuous;
    for (Index j = 0; j < data.n_columns(); ++j)
        if (data.column(j).kind == ColumnKind::continuous) continuous.push_back(static_cast<int>(j));
    const int count = std::min(static_cast<int>(continuous.size()),
                               static_cast<int>(std::floor(column_ratio * static_cast<double>(data.n_columns()) + 1e-9)));
    if (count == 0 || sd == 0.0) return data;
    auto pick = sample_without_replacement(static_cast<int>(continuous.size()), count, rng);
    std::sort(pick.begin(), pick.end());
    MatrixXd values = data.values();
    std::normal_distribution<double> gauss(0.0, sd);
    for (int k : pick) {
        int j = continuous[static_cast<std::size_t>(k)];
        for (Index i = 0; i < values.rows(); ++i) values(i, j) += gauss(rng);
    }
    return data.with_values(std::move(values));
}

Dataset apply_missing(const Dataset& data, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorCode::RateOutOfRange, "missing rate must lie in [0,1)");
    if (rate == 0.0) return data;
    MatrixXd values = data.values();
    std::bernoulli_distribution drop(rate);
    for (Index j = 0; j < values.cols(); ++j)
        for (Index i = 0; i < values.rows(); ++i)
            if (drop(rng)) values(i, j) = std::nan("");
    return data.with_values(std::move(values));
}

DomainShiftResult apply_domain_shift(const Dataset& data, const Dag& dag, int n_domains, FunctionType function_type,
                                     Rng& rng, double c) {
    if (n_domains < 1) throw Error(ErrorCode::InvalidArgument, "n_domains must be at least 1");
    const Index n = data.n_samples();
    const int p = static_cast<int>(data.n_columns());
    IntVector domain(n);
    for (Index r = 0; r < n; ++r) domain(r) = static_cast<int>((r * n_domains) / std::max<Index>(n, 1));
    if (n_domains == 1) return {data.with_domain_index(domain), {}};

    std::vector<int> continuous;
    for (int j = 0; j < p; ++j)
        if (data.column(j).kind == ColumnKind::continuous) continuous.push_back(j);
    const int count = (static_cast<int>(continuous.size()) + 1) / 2;
    auto pick = sample_without_replacement(static_cast<int>(continuous.size()), count, rng);
    std::vector<int> shifted;
    for (int k : pick) shifted.push_back(continuous[static_cast<std::size_t>(k)]);
    std::sort(shifted.begin(), shifted.end());

    MatrixXd values = data.values();
    if (function_type == FunctionType::linear) {
        // total effect of a unit intercept change on every variable: (I - W)^{-1}
        MatrixXd w = dag.weights() ? *dag.weights() : MatrixXd(dag.edges().cast<double>());
        MatrixXd total = (MatrixXd::Identity(p, p) - w).inverse();
        Eigen::RowVectorXd unit = Eigen::RowVectorXd::Zero(p);
        for (int j : shifted) unit(j) = c;
        Eigen::RowVectorXd per_domain = unit * total;
        for (Index r = 0; r < n; ++r)
            for (int j = 0; j < p; ++j)
                if (data.column(j).kind == ColumnKind::continuous) values(r, j) += domain(r) * per_domain(j);
    } else {
        for (Index r = 0; r < n; ++r)
            for (int j : shifted) values(r, j) += c * domain(r) * values(r, j) * values(r, j);
    }
    return {data.with_values(std::move(values)).with_domain_index(domain), shifted};
}

TabularSample simulate_tabular(const TabularScenario& s) {
    s.validate();
    Dag skeleton = erdos_renyi_dag(s.n_nodes, s.edge_prob, s.seed);
    Dag truth = skeleton;
    if (s.function_type == FunctionType::linear) {
        Rng wrng = make_rng(s.seed, Stream::weights);
        MatrixXd w = MatrixXd::Zero(s.n_nodes, s.n_nodes);
        for (int i = 0; i < s.n_nodes; ++i)
            for (int j = 0; j < s.n_nodes; ++j)
                if (skeleton.has_edge(i, j)) w(i, j) = signed_uniform(wrng, kWeightLo, kWeightHi);
        truth = Dag(skeleton.edges(), w, skeleton.labels());
    }
    Rng rng = make_rng(s.seed, Stream::sem);
    Dataset data(sample_sem(truth, s.function_type, s.noise, s.noise_scale, s.n_samples, rng));

    if (s.discrete_ratio > 0) {
        Rng r = make_rng(s.seed, Stream::discretize);
        data = discretize_columns(data, truth, s.discrete_ratio, s.discrete_cardinality, r);
    }
    if (s.measurement_error_ratio > 0 && s.measurement_error_sd > 0) {
        Rng r = make_rng(s.seed, Stream::measurement);
        data = apply_measurement_error(data, s.measurement_error_ratio, s.measurement_error_sd, r);
    }
    if (s.missing_rate > 0) {
        Rng r = make_rng(s.seed, Stream::missing);
        data = apply_missing(data, s.missing_rate, r);
    }
    if (s.n_domains > 1) {
        Rng r = make_rng(s.seed, Stream::domain);
        data = apply_domain_shift(data, truth, s.n_domains, s.function_type, r, s.domain_shift).data;
    }
    return {std::move(truth), std::move(data)};
}

}  // namespace causal_atlas
