#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causal_atlas/dataset.hpp"
#include "causal_atlas/graph.hpp"
#include "causal_atlas/random.hpp"

namespace causal_atlas {

enum class FunctionType { linear, mlp };
enum class NoiseKind { gaussian, exponential, gumbel, uniform, logistic };
enum class GraphType { erdos_renyi, barabasi_albert, full };

std::string to_string(FunctionType f);
std::string to_string(NoiseKind k);
std::string to_string(GraphType g);
FunctionType parse_function_type(const std::string& s);
NoiseKind parse_noise_kind(const std::string& s);
GraphType parse_graph_type(const std::string& s);

// ---- tabular ------------------------------------------------------------

struct TabularScenario {
    int n_nodes = 10;
    int n_samples = 1000;
    double edge_prob = 0.22;
    FunctionType function_type = FunctionType::linear;
    NoiseKind noise = NoiseKind::gaussian;
    double noise_scale = 1.0;
    double discrete_ratio = 0.0;
    int discrete_cardinality = 3;
    double measurement_error_ratio = 0.0;
    double measurement_error_sd = 0.0;
    double missing_rate = 0.0;
    int n_domains = 1;
    double domain_shift = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

nlohmann::json to_json(const TabularScenario& s);
TabularScenario tabular_scenario_from_json(const nlohmann::json& j);

struct TabularSample {
    Dag truth;  // weighted for linear scenarios
    Dataset data;
};

TabularSample simulate_tabular(const TabularScenario& scenario);

/// Clean structural-equation sample for a given DAG (no corruptions).
/// Linear uses the DAG weights; mlp draws its own networks from `rng`.
MatrixXd sample_sem(const Dag& dag, FunctionType function_type, NoiseKind noise, double noise_scale, int n_samples,
                    Rng& rng);

/// I.i.d. draws, centered analytically and scaled to standard deviation `scale`.
VectorXd sample_noise(NoiseKind kind, double scale, Index n, Rng& rng);

/// Softmax draw per row with logits a_k * z_i + N(0,1).
IntVector categorical_from_logits(const VectorXd& z, const VectorXd& logit_weights, Rng& rng);

Dataset discretize_columns(const Dataset& data, const Dag& dag, double ratio, int cardinality, Rng& rng);
Dataset apply_measurement_error(const Dataset& data, double column_ratio, double sd, Rng& rng);
Dataset apply_missing(const Dataset& data, double rate, Rng& rng);

struct DomainShiftResult {
    Dataset data;
    std::vector<int> shifted_columns;
};

/// Rows split into contiguous, equal-size domain blocks. For the linear
/// function type the offset c*d enters the structural equation of each chosen
/// variable and is carried to its descendants through the DAG weights; for
/// mlp the chosen variables gain c*d*x^2.
DomainShiftResult apply_domain_shift(const Dataset& data, const Dag& dag, int n_domains, FunctionType function_type,
                                     Rng& rng, double c = 1.0);

// ---- time series --------------------------------------------------------

struct WeightRange {
    double lo = 0.1;
    double hi = 0.5;
};

struct TsScenario {
    int n_nodes = 10;
    int max_lag = 3;
    double intra_degree = 2.0;  // average total degree of the instantaneous DAG
    double inter_degree = 3.0;  // expected lagged parents per variable, over all lags
    GraphType graph_type = GraphType::erdos_renyi;
    WeightRange weight_range_intra{0.1, 0.4};
    WeightRange weight_range_inter{0.1, 0.5};
    double decay_exponent = 0.0;
    NoiseKind noise = NoiseKind::gaussian;
    double noise_scale = 1.0;
    int n_steps = 1000;
    int burn_in = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

nlohmann::json to_json(const TsScenario& s);
TsScenario ts_scenario_from_json(const nlohmann::json& j);

TemporalGraph generate_temporal_graph(const TsScenario& scenario);

/// Companion matrix of the reduced form x_t = sum_k M_k x_{t-k} + u_t with
/// M_k = (I - W0^T)^{-1} A_k^T.
MatrixXd companion_matrix(const TemporalGraph& tg);
double companion_spectral_radius(const TemporalGraph& tg);

/// Rescales A_k by s^k (s = target/rho) when rho >= 1, which scales every
/// companion eigenvalue by exactly s.
TemporalGraph stabilize(const TemporalGraph& tg, double target_radius = 0.95);

Dataset simulate_temporal(const TemporalGraph& tg, const TsScenario& scenario);
/// `noise` has burn_in + n_steps rows; the first burn_in simulated rows are dropped.
Dataset simulate_temporal(const TemporalGraph& tg, const MatrixXd& noise, int burn_in);

struct TsSample {
    TemporalGraph truth;
    Digraph summary;
    Dataset data;
};

TsSample simulate_timeseries(const TsScenario& scenario);

}  // namespace causal_atlas
