#pragma once

#include "causal_atlas/ci_tests.hpp"
#include "support/oracles.hpp"

namespace oracle {

/// CI test answering from d-separation in a known DAG: p = 1 when separated, 0 otherwise.
class DsepTest : public causal_atlas::CiTest {
public:
    explicit DsepTest(causal_atlas::BoolMatrix dag) : dag_(std::move(dag)) {}
    causal_atlas::CiResult test(int i, int j, const std::vector<int>& cond) const override {
        causal_atlas::CiResult r;
        r.conditioning_size = static_cast<int>(cond.size());
        r.p_value = d_separated(dag_, i, j, cond) ? 1.0 : 0.0;
        return r;
    }
    int n_vars() const override { return static_cast<int>(dag_.rows()); }

private:
    causal_atlas::BoolMatrix dag_;
};

}  // namespace oracle
