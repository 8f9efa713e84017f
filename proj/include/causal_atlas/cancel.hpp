#pragma once

#include <atomic>
#include <memory>

#include "causal_atlas/error.hpp"

namespace causal_atlas {

/// Shared cancellation flag. Iterative solvers call `check()` at least once
/// per outer iteration; a watchdog flips the flag when a runtime cap expires.
class CancelToken {
public:
    CancelToken() : flag_(std::make_shared<std::atomic<bool>>(false)) {}

    void cancel() const { flag_->store(true, std::memory_order_relaxed); }
    bool cancelled() const { return flag_->load(std::memory_order_relaxed); }

    void check() const {
        if (cancelled()) throw Error(ErrorCode::Cancelled, "run cancelled");
    }

    static const CancelToken& none() {
        static const CancelToken token;
        return token;
    }

private:
    std::shared_ptr<std::atomic<bool>> flag_;
};

}  // namespace causal_atlas
