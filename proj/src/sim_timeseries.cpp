#include <cmath>

#include <Eigen/Eigenvalues>

#include "causal_atlas/error.hpp"
#include "causal_atlas/simulate.hpp"

namespace causal_atlas {

namespace {

enum Stream : std::uint64_t { graph = 11, intra_weights = 12, lag_weights = 13, noise = 14 };

void check_range(const WeightRange& r, const char* name) {
    if (!(r.lo >= 0 && r.hi >= r.lo)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must satisfy 0 <= lo <= hi");
}

// Preferential attachment along a random order; edges point from earlier to later nodes.
BoolMatrix barabasi_albert(int p, double degree, Rng& rng) {
    BoolMatrix e = BoolMatrix::Constant(p, p, false);
    if (p < 2 || degree <= 0) return e;
    std::vector<int> perm(p);
    for (int i = 0; i < p; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const int m = std::max(1, static_cast<int>(std::lround(degree / 2.0)));
    std::vector<double> deg(p, 0.0);
    for (int k = 1; k < p; ++k) {
        int target = perm[k];
        std::vector<int> pool(perm.begin(), perm.begin() + k);
        for (int a = 0; a < std::min(m, k); ++a) {
            std::vector<double> w;
            for (int v : pool) w.push_back(deg[v] + 1.0);
            std::discrete_distribution<int> pick(w.begin(), w.end());
            int idx = pick(rng);
            int src = pool[static_cast<std::size_t>(idx)];
            pool.erase(pool.begin() + idx);
            e(src, target) = true;
            deg[src] += 1;
            deg[target] += 1;
        }
    }
    return e;
}

}  // namespace

void TsScenario::validate() const {
    if (n_nodes < 1) throw Error(ErrorCode::InvalidArgument, "n_nodes must be at least 1");
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be at least 1");
    if (n_steps <= max_lag) throw Error(ErrorCode::InvalidArgument, "n_steps must exceed max_lag");
    if (intra_degree < 0 || inter_degree < 0) throw Error(ErrorCode::InvalidArgument, "degrees must be >= 0");
    if (decay_exponent < 0) throw Error(ErrorCode::InvalidArgument, "decay_exponent must be >= 0");
    if (!(noise_scale > 0)) throw Error(ErrorCode::InvalidArgument, "noise_scale must be positive");
    if (burn_in < 0) throw Error(ErrorCode::InvalidArgument, "burn_in must be >= 0");
    check_range(weight_range_intra, "weight_range_intra");
    check_range(weight_range_inter, "weight_range_inter");
}

nlohmann::json to_json(const TsScenario& s) {
    return {{"n_nodes", s.n_nodes},
            {"max_lag", s.max_lag},
            {"intra_degree", s.intra_degree},
            {"inter_degree", s.inter_degree},
            {"graph_type", to_string(s.graph_type)},
            {"weight_range_intra", {s.weight_range_intra.lo, s.weight_range_intra.hi}},
            {"weight_range_inter", {s.weight_range_inter.lo, s.weight_range_inter.hi}},
            {"decay_exponent", s.decay_exponent},
            {"noise", to_string(s.noise)},
            {"noise_scale", s.noise_scale},
            {"n_steps", s.n_steps},
            {"burn_in", s.burn_in},
            {"seed", s.seed}};
}

TsScenario ts_scenario_from_json(const nlohmann::json& j) {
    TsScenario s;
    s.n_nodes = j.value("n_nodes", s.n_nodes);
    s.max_lag = j.value("max_lag", s.max_lag);
    s.intra_degree = j.value("intra_degree", s.intra_degree);
    s.inter_degree = j.value("inter_degree", s.inter_degree);
    if (j.contains("graph_type")) s.graph_type = parse_graph_type(j["graph_type"].get<std::string>());
    if (j.contains("weight_range_intra"))
        s.weight_range_intra = {j["weight_range_intra"].at(0).get<double>(), j["weight_range_intra"].at(1).get<double>()};
    if (j.contains("weight_range_inter"))
        s.weight_range_inter = {j["weight_range_inter"].at(0).get<double>(), j["weight_range_inter"].at(1).get<double>()};
    s.decay_exponent = j.value("decay_exponent", s.decay_exponent);
    if (j.contains("noise")) s.noise = parse_noise_kind(j["noise"].get<std::string>());
    s.noise_scale = j.value("noise_scale", s.noise_scale);
    s.n_steps = j.value("n_steps", s.n_steps);
    s.burn_in = j.value("burn_in", s.burn_in);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

TemporalGraph generate_temporal_graph(const TsScenario& s) {
    s.validate();
    const int p = s.n_nodes;
    const int L = s.max_lag;
    Rng grng = make_rng(s.seed, Stream::graph);

    BoolMatrix intra_edges;
    switch (s.graph_type) {
        case GraphType::erdos_renyi: {
            double prob = p > 1 ? std::min(1.0, s.intra_degree / (p - 1)) : 0.0;
            intra_edges = erdos_renyi_dag(p, prob, s.seed).edges();
            break;
        }
        case GraphType::barabasi_albert:
            intra_edges = barabasi_albert(p, s.intra_degree, grng);
            break;
        case GraphType::full:
            intra_edges = s.intra_degree > 0 ? erdos_renyi_dag(p, 1.0, s.seed).edges()
                                             : BoolMatrix::Constant(p, p, false);
            break;
    }
    Rng wrng = make_rng(s.seed, Stream::intra_weights);
    MatrixXd intra = MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (intra_edges(i, j)) intra(i, j) = signed_uniform(wrng, s.weight_range_intra.lo, s.weight_range_intra.hi);

    Rng lrng = make_rng(s.seed, Stream::lag_weights);
    std::vector<MatrixXd> lagged;
    const double prob = std::min(1.0, s.inter_degree / (static_cast<double>(p) * L));
    std::vector<double> out_degree(p, 0.0);
    for (int k = 1; k <= L; ++k) {
        MatrixXd a = MatrixXd::Zero(p, p);
        const double decay = std::pow(static_cast<double>(k), -s.decay_exponent);
        if (s.inter_degree > 0) {
            if (s.graph_type == GraphType::barabasi_albert) {
                // sources drawn by preferential weight, targets uniformly
                int edges = static_cast<int>(std::lround(prob * p * p));
                std::uniform_int_distribution<int> target(0, p - 1);
                for (int e = 0; e < edges; ++e) {
                    std::vector<double> w;
                    for (int v = 0; v < p; ++v) w.push_back(out_degree[v] + 1.0);
                    std::discrete_distribution<int> pick(w.begin(), w.end());
                    int i = pick(grng), j = target(grng), tries = 0;
                    while (a(i, j) != 0.0 && tries++ < 10 * p * p) {
                        i = pick(grng);
                        j = target(grng);
                    }
                    if (a(i, j) != 0.0) break;
                    a(i, j) = decay * signed_uniform(lrng, s.weight_range_inter.lo, s.weight_range_inter.hi);
                    out_degree[i] += 1;
                }
            } else {
                std::bernoulli_distribution keep(s.graph_type == GraphType::full ? 1.0 : prob);
                for (int i = 0; i < p; ++i)
                    for (int j = 0; j < p; ++j)
                        if (keep(grng))
                            a(i, j) = decay * signed_uniform(lrng, s.weight_range_inter.lo, s.weight_range_inter.hi);
            }
        }
        lagged.push_back(std::move(a));
    }
    return TemporalGraph(std::move(intra), std::move(lagged));
}

MatrixXd companion_matrix(const TemporalGraph& tg) {
    const int p = tg.n_nodes();
    const int L = tg.max_lag();
    MatrixXd b = MatrixXd::Identity(p, p) - tg.intra().transpose();
    Eigen::FullPivLU<MatrixXd> lu(b);
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularInstantaneousSystem, "I - W0^T is singular");
    MatrixXd c = MatrixXd::Zero(p * L, p * L);
    for (int k = 1; k <= L; ++k) c.block(0, (k - 1) * p, p, p) = lu.solve(tg.lag(k).transpose());
    if (L > 1) c.block(p, 0, p * (L - 1), p * (L - 1)).setIdentity();
    return c;
}

double companion_spectral_radius(const TemporalGraph& tg) {
    if (tg.max_lag() == 0 || tg.n_nodes() == 0) return 0.0;
    MatrixXd c = companion_matrix(tg);
    if (c.isZero(0.0)) return 0.0;
    Eigen::EigenSolver<MatrixXd> es(c, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

TemporalGraph stabilize(const TemporalGraph& tg, double target_radius) {
    if (!(target_radius > 0 && target_radius < 1))
        throw Error(ErrorCode::InvalidArgument, "target_radius must lie in (0,1)");
    double rho = companion_spectral_radius(tg);
    if (rho < 1.0) return tg;
    const double s = target_radius / rho;
    std::vector<MatrixXd> lagged;
    double factor = 1.0;
    for (const auto& a : tg.lagged()) {
        factor *= s;
        lagged.push_back(a * factor);
    }
    return TemporalGraph(tg.intra(), std::move(lagged), tg.labels());
}

Dataset simulate_temporal(const TemporalGraph& tg, const MatrixXd& noise, int burn_in) {
    const int p = tg.n_nodes();
    const int L = tg.max_lag();
    const Index total = noise.rows();
    if (noise.cols() != p) throw Error(ErrorCode::DimensionMismatch, "noise width differs from node count");
    if (burn_in < 0 || burn_in >= total) throw Error(ErrorCode::InvalidArgument, "burn_in must leave rows to keep");
    // row form: x_t = (sum_k x_{t-k} A_k + e_t) (I - W0)^{-1}
    MatrixXd b = MatrixXd::Identity(p, p) - tg.intra();
    Eigen::FullPivLU<MatrixXd> lu(b);
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularInstantaneousSystem, "I - W0 is singular");
    MatrixXd binv = lu.inverse();
    MatrixXd x = MatrixXd::Zero(total, p);
    Eigen::RowVectorXd drive(p);
    for (Index t = 0; t < total; ++t) {
        drive = noise.row(t);
        for (int k = 1; k <= L && k <= t; ++k) drive += x.row(t - k) * tg.lag(k);
        x.row(t) = drive * binv;
    }
    const Index n = total - burn_in;
    IntVector time(n);
    for (Index t = 0; t < n; ++t) time(t) = static_cast<int>(t);
    std::vector<ColumnMeta> columns;
    auto labels = tg.labels().empty() ? default_labels(p) : tg.labels();
    for (int j = 0; j < p; ++j) columns.push_back({labels[static_cast<std::size_t>(j)], ColumnKind::continuous, 0});
    return Dataset(x.bottomRows(n), std::move(columns), std::nullopt, std::move(time));
}

Dataset simulate_temporal(const TemporalGraph& tg, const TsScenario& s) {
    s.validate();
    Rng rng = make_rng(s.seed, Stream::noise);
    const Index total = s.burn_in + s.n_steps;
    MatrixXd noise(total, tg.n_nodes());
    for (int j = 0; j < tg.n_nodes(); ++j) noise.col(j) = sample_noise(s.noise, s.noise_scale, total, rng);
    return simulate_temporal(tg, noise, s.burn_in);
}

TsSample simulate_timeseries(const TsScenario& s) {
    TemporalGraph tg = stabilize(generate_temporal_graph(s));
    Dataset data = simulate_temporal(tg, s);
    Digraph summary = summary_graph(tg);
    return {std::move(tg), std::move(summary), std::move(data)};
}

}  // namespace causal_atlas
