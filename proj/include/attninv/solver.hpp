#pragma once

#include "attninv/hessian.hpp"

#include <chrono>
#include <cmath>
#include <vector>

namespace attninv {

enum class SolveStatus { Converged, MaxIter, NumericalFailure };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::NumericalFailure: return "NumericalFailure";
    }
    return "?";
}

// Telemetry for one iterate. step_norm and damping_used describe the step
// taken from this iterate; the final record has step_norm 0.
struct RunRecord {
    long iter = 0;
    double loss = 0;
    double grad_norm = 0;
    double step_norm = 0;
    double damping_used = 0;
    double wallclock_ms = 0;
};

struct NewtonConfig {
    double eps = 1e-10;       // stop when ||grad|| <= eps (1 + |loss|)
    long max_iter = 100;
    double damping = 0;       // initial Levenberg lambda
    bool line_search = true;  // backtracking, beta 0.5, Armijo 1e-4
    bool record_time = true;  // false writes wallclock_ms = 0
};

struct GdConfig {
    double eta = 1e-2;
    long max_iter = 10000;
    double eps = 1e-10;        // same gradient stop as Newton
    double loss_target = 0;    // also stop once loss <= loss_target when > 0
    bool record_time = true;
};

template <typename Scalar>
struct SolveResult {
    Matrix<Scalar> X;
    std::vector<RunRecord> records;
    SolveStatus status = SolveStatus::MaxIter;

    // Steps taken.
    long iterations() const { return records.empty() ? 0 : static_cast<long>(records.size()) - 1; }
};

namespace detail {

class Clock {
public:
    explicit Clock(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        if (!on_) return 0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point start_;
};

inline constexpr double kMaxDamping = 1e8;
inline constexpr double kFirstDamping = 1e-6;
inline constexpr double kDampingFloor = 1e-10;

}  // namespace detail

// Damped Newton on the regularized loss. Each step solves
// (Hess L + lambda I) delta = -grad L. lambda grows x10 when the system is not
// positive definite or the line search fails and shrinks x10 after a success.
template <typename Scalar, typename Derived>
SolveResult<Scalar> newton_solve(const ProblemSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& X0,
                                 const NewtonConfig& cfg) {
    using std::abs;
    using std::isfinite;
    spec.validate();
    spec.validate_input(X0);
    require_dense_cap(spec.n, spec.d);
    if (!(cfg.eps > 0) || cfg.max_iter < 1) throw PreconditionError("newton_solve: eps > 0 and max_iter >= 1");
    const detail::Clock clock(cfg.record_time);
    SolveResult<Scalar> out;
    out.X = X0;
    double lambda = cfg.damping;
    for (long it = 0;; ++it) {
        ForwardCache<Scalar> c;
        try {
            c = forward_cache(spec, out.X);
        } catch (const NumericRangeError&) {
            out.status = SolveStatus::NumericalFailure;
            return out;
        }
        const Scalar L = loss(c, spec, out.X);
        const Vector<Scalar> g = grad_L(c, spec, out.X);
        RunRecord rec;
        rec.iter = it;
        rec.loss = static_cast<double>(L);
        rec.grad_norm = static_cast<double>(g.norm());
        if (!isfinite(rec.loss) || !isfinite(rec.grad_norm)) {
            rec.wallclock_ms = clock.ms();
            out.records.push_back(rec);
            out.status = SolveStatus::NumericalFailure;
            return out;
        }
        if (rec.grad_norm <= cfg.eps * (1 + abs(rec.loss))) {
            rec.wallclock_ms = clock.ms();
            out.records.push_back(rec);
            out.status = SolveStatus::Converged;
            return out;
        }
        if (it >= cfg.max_iter) {
            rec.wallclock_ms = clock.ms();
            out.records.push_back(rec);
            out.status = SolveStatus::MaxIter;
            return out;
        }
        const Matrix<Scalar> Hm = hessian_L(c, spec, out.X);
        const Vector<Scalar> x = flatten(out.X);
        bool accepted = false;
        Vector<Scalar> step;
        while (!accepted) {
            Matrix<Scalar> A = Hm;
            A.diagonal().array() += Scalar(lambda);
            Eigen::LLT<Matrix<Scalar>> llt(A);
            if (llt.info() == Eigen::Success) {
                const Vector<Scalar> delta = llt.solve(-g);
                if (delta.allFinite()) {
                    if (!cfg.line_search) {
                        step = delta;
                        accepted = true;
                    } else {
                        const Scalar slope = g.dot(delta);
                        Scalar t = 1;
                        while (t > Scalar(1e-10)) {
                            const Vector<Scalar> cand = x + t * delta;
                            Scalar Lc;
                            try {
                                Lc = loss(spec, unflatten(cand, spec.d, spec.n));
                            } catch (const NumericRangeError&) {
                                Lc = Scalar(INFINITY);
                            }
                            if (isfinite(Lc) && Lc <= L + Scalar(1e-4) * t * slope) {
                                step = t * delta;
                                accepted = true;
                                break;
                            }
                            t *= Scalar(0.5);
                        }
                    }
                }
            }
            if (accepted) break;
            lambda = lambda == 0 ? detail::kFirstDamping : lambda * 10;
            if (lambda > detail::kMaxDamping) {
                rec.damping_used = lambda;
                rec.wallclock_ms = clock.ms();
                out.records.push_back(rec);
                out.status = SolveStatus::NumericalFailure;
                return out;
            }
        }
        rec.step_norm = static_cast<double>(step.norm());
        rec.damping_used = lambda;
        rec.wallclock_ms = clock.ms();
        out.records.push_back(rec);
        out.X = unflatten(Vector<Scalar>(x + step), spec.d, spec.n);
        lambda = lambda / 10 < detail::kDampingFloor ? 0 : lambda / 10;
    }
}

// Fixed-step gradient descent X <- X - eta grad L. Ten consecutive loss
// increases count as divergence.
template <typename Scalar, typename Derived>
SolveResult<Scalar> gd_solve(const ProblemSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& X0,
                             const GdConfig& cfg) {
    using std::abs;
    using std::isfinite;
    spec.validate();
    spec.validate_input(X0);
    if (!(cfg.eta > 0) || !(cfg.eps > 0) || cfg.max_iter < 1)
        throw PreconditionError("gd_solve: eta > 0, eps > 0 and max_iter >= 1");
    const detail::Clock clock(cfg.record_time);
    SolveResult<Scalar> out;
    out.X = X0;
    double prev = INFINITY;
    int increases = 0;
    for (long it = 0;; ++it) {
        ForwardCache<Scalar> c;
        try {
            c = forward_cache(spec, out.X);
        } catch (const NumericRangeError&) {
            out.status = SolveStatus::NumericalFailure;
            return out;
        }
        const Scalar L = loss(c, spec, out.X);
        const Vector<Scalar> g = grad_L(c, spec, out.X);
        RunRecord rec;
        rec.iter = it;
        rec.loss = static_cast<double>(L);
        rec.grad_norm = static_cast<double>(g.norm());
        rec.wallclock_ms = clock.ms();
        const bool finite = isfinite(rec.loss) && isfinite(rec.grad_norm);
        increases = (finite && rec.loss > prev) ? increases + 1 : 0;
        prev = rec.loss;
        if (!finite || increases >= 10) {
            out.records.push_back(rec);
            out.status = SolveStatus::NumericalFailure;
            return out;
        }
        if (rec.grad_norm <= cfg.eps * (1 + abs(rec.loss)) || (cfg.loss_target > 0 && rec.loss <= cfg.loss_target)) {
            out.records.push_back(rec);
            out.status = SolveStatus::Converged;
            return out;
        }
        if (it >= cfg.max_iter) {
            out.records.push_back(rec);
            out.status = SolveStatus::MaxIter;
            return out;
        }
        const Vector<Scalar> step = -Scalar(cfg.eta) * g;
        rec.step_norm = static_cast<double>(step.norm());
        out.records.push_back(rec);
        out.X = unflatten(Vector<Scalar>(flatten(out.X) + step), spec.d, spec.n);
    }
}

}  // namespace attninv
