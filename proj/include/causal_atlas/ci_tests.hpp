#pragma once

#include <memory>
#include <string>
#include <vector>

#include "causal_atlas/dataset.hpp"

namespace causal_atlas {

struct CiResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int conditioning_size = 0;
    bool reliable = true;
};

struct SufficientStats {
    MatrixXd correlation;
    Index n = 0;
};

/// Correlation matrix of a complete dataset. Throws DataContainsMissing.
SufficientStats sufficient_stats(const Dataset& data);
SufficientStats sufficient_stats(const MatrixXd& values);

/// -Omega_ij / sqrt(Omega_ii Omega_jj) over the submatrix {i, j} + cond,
/// clamped to |r| <= 1 - 1e-12. Throws SingularSubmatrix.
double partial_correlation(const SufficientStats& stats, int i, int j, const std::vector<int>& cond);

/// Falls back to a pseudo-inverse (reliable = false) on a singular submatrix
/// and reports p = 1, reliable = false when n <= |cond| + 3.
CiResult fisher_z_test(const SufficientStats& stats, int i, int j, const std::vector<int>& cond);
CiResult fisher_z_from_r(double r, Index n, int cond_size);

/// Pearson chi-squared summed over conditioning strata. Throws NonDiscreteColumn.
CiResult chi_squared_test(const Dataset& data, int i, int j, const std::vector<int>& cond);

/// Continuous columns replaced by normal scores Phi^{-1}(rank / (n + 1)),
/// ties given their average rank. Discrete columns pass through.
Dataset rank_transform(const Dataset& data);

enum class CiTestKind { fisher_z, chi_squared, rank_fisher_z };
std::string to_string(CiTestKind k);
CiTestKind parse_ci_test(const std::string& s);

class CiTest {
public:
    virtual ~CiTest() = default;
    virtual CiResult test(int i, int j, const std::vector<int>& cond) const = 0;
    virtual int n_vars() const = 0;
};

class FisherZTest : public CiTest {
public:
    explicit FisherZTest(SufficientStats stats, bool mixed = false) : stats_(std::move(stats)), mixed_(mixed) {}
    CiResult test(int i, int j, const std::vector<int>& cond) const override;
    int n_vars() const override { return static_cast<int>(stats_.correlation.rows()); }
    const SufficientStats& stats() const { return stats_; }

private:
    SufficientStats stats_;
    bool mixed_;
};

class ChiSquaredTest : public CiTest {
public:
    explicit ChiSquaredTest(Dataset data);
    CiResult test(int i, int j, const std::vector<int>& cond) const override;
    int n_vars() const override { return static_cast<int>(data_.n_columns()); }

private:
    Dataset data_;
};

/// Builds the requested test. Fisher-Z on discrete columns treats the labels
/// as numeric codes and marks results unreliable. Chi-squared on continuous
/// columns throws TestMismatch. Missing values throw DataContainsMissing.
std::unique_ptr<CiTest> make_ci_test(const Dataset& data, CiTestKind kind);

}  // namespace causal_atlas
