#pragma once

#include <map>
#include <optional>
#include <vector>

#include "causal_atlas/cancel.hpp"
#include "causal_atlas/ci_tests.hpp"
#include "causal_atlas/dataset.hpp"
#include "causal_atlas/graph.hpp"

namespace causal_atlas {

// ---- PC -----------------------------------------------------------------

struct PcConfig {
    double alpha = 0.05;
    std::optional<int> max_depth;
    CiTestKind test = CiTestKind::fisher_z;
};

using SepsetMap = std::map<std::pair<int, int>, std::vector<int>>;  // key (i, j) with i < j

struct SkeletonResult {
    BoolMatrix adjacency;  // symmetric
    SepsetMap sepsets;
};

/// Stable skeleton search: neighbourhoods are frozen per conditioning level,
/// subsets are tried in lexicographic order of sorted node indices.
SkeletonResult pc_skeleton(const CiTest& test, double alpha, std::optional<int> max_depth = std::nullopt,
                           const CancelToken& cancel = CancelToken::none());

/// Colliders from separating sets (a triple conflicting with an earlier
/// orientation is skipped), then Meek closure.
Cpdag orient_from_sepsets(const BoolMatrix& adjacency, const SepsetMap& sepsets, std::vector<std::string> labels = {});

Cpdag pc(const CiTest& test, double alpha, std::optional<int> max_depth = std::nullopt,
         std::vector<std::string> labels = {}, const CancelToken& cancel = CancelToken::none());
Cpdag pc(const Dataset& data, const PcConfig& cfg = {}, const CancelToken& cancel = CancelToken::none());

// ---- score search -------------------------------------------------------

struct ScoreConfig {
    double penalty_multiplier = 1.0;
    std::optional<int> max_in_degree;
};

/// Gaussian BIC local score -(n/2) ln(sigma^2) - pm (ln n / 2)(|Pa| + 1) from a
/// population covariance matrix; sigma^2 is floored at 1e-12.
double bic_local_score(const MatrixXd& cov, Index n, int node, const std::vector<int>& parents,
                       double penalty_multiplier = 1.0);
double bic_total_score(const MatrixXd& cov, Index n, const BoolMatrix& dag, double penalty_multiplier = 1.0);

struct ScoreSearchResult {
    Dag dag;
    Cpdag cpdag;
    std::vector<double> score_trace;  // total score after each accepted move, starting from the empty graph
};

ScoreSearchResult score_search_full(const Dataset& data, const ScoreConfig& cfg = {},
                                    const CancelToken& cancel = CancelToken::none());
Cpdag score_search(const Dataset& data, const ScoreConfig& cfg = {}, const CancelToken& cancel = CancelToken::none());

// ---- NOTEARS ------------------------------------------------------------

struct NotearsConfig {
    double lambda1 = 0.1;
    double w_threshold = 0.3;
    double h_tol = 1e-8;
    double rho_max = 1e16;
    int max_outer = 100;
};

/// h(W) = tr(exp(W o W)) - d; optionally writes dh/dW.
double notears_h(const MatrixXd& w, MatrixXd* grad = nullptr);

/// Smooth augmented objective over the split x = [vec(W+); vec(W-)] with
/// loss 0.5 tr((I - W)^T C (I - W)), C the covariance of the centered data.
struct NotearsObjective {
    MatrixXd cov;
    double lambda1 = 0.0;
    double rho = 1.0;
    double alpha = 0.0;

    double operator()(const VectorXd& x, VectorXd& grad) const;
    static MatrixXd unpack(const VectorXd& x, Index d);
};

struct NotearsResult {
    Dag dag;             // thresholded, weighted
    MatrixXd raw;        // before thresholding
    double h = 0.0;      // h of the raw estimate
    bool converged = true;
    int outer_iterations = 0;
};

NotearsResult notears_linear_full(const Dataset& data, const NotearsConfig& cfg = {},
                                  const CancelToken& cancel = CancelToken::none());
Dag notears_linear(const Dataset& data, const NotearsConfig& cfg = {}, const CancelToken& cancel = CancelToken::none());

/// Zeroes the weakest edge on each remaining cycle until the support is acyclic.
/// Returns the number of edges removed.
int break_cycles_by_weight(MatrixXd& w);

// ---- DirectLiNGAM -------------------------------------------------------

/// Maximum-entropy approximation of differential entropy of a standardized variable.
double lingam_entropy(const VectorXd& u);

struct LingamResult {
    Dag dag;  // weighted
    std::vector<int> order;
};

/// Causal order by the pairwise likelihood-ratio measure, then OLS on
/// predecessors with two-sided t-test pruning at `prune_alpha`.
LingamResult direct_lingam_full(const Dataset& data, double prune_alpha = 0.05,
                                const CancelToken& cancel = CancelToken::none());
Dag direct_lingam(const Dataset& data, double prune_alpha = 0.05, const CancelToken& cancel = CancelToken::none());
std::vector<int> lingam_causal_order(const MatrixXd& x, const CancelToken& cancel = CancelToken::none());

// ---- IAMB ---------------------------------------------------------------

std::vector<int> iamb(const CiTest& test, int target, double alpha, const CancelToken& cancel = CancelToken::none());
std::vector<int> iamb(const Dataset& data, int target, double alpha, CiTestKind kind);

/// AND-rule adjacency confirmed by subset tests inside both blankets, then
/// colliders from separating sets and Meek closure.
Cpdag mb_to_cpdag(const std::vector<std::vector<int>>& blankets, const CiTest& test, double alpha,
                  std::vector<std::string> labels = {}, const CancelToken& cancel = CancelToken::none());

Cpdag iamb_cpdag(const Dataset& data, double alpha = 0.05, CiTestKind kind = CiTestKind::fisher_z,
                 const CancelToken& cancel = CancelToken::none());

}  // namespace causal_atlas
