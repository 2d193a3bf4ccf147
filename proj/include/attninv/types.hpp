#pragma once

#include <Eigen/Dense>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace attninv {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

// Base of every library error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Overflow or NaN in a forward quantity.
struct NumericRangeError : Error {
    using Error::Error;
};

// Index outside [0, n) or [0, d).
struct IndexError : Error {
    using Error::Error;
};

// Shape mismatch or violated operation precondition.
struct PreconditionError : Error {
    using Error::Error;
};

// Problem too large for a dense nd x nd Hessian.
struct DenseCapError : Error {
    using Error::Error;
};

// File or parse failure.
struct IoError : Error {
    using Error::Error;
};

inline constexpr Index kDefaultDenseCap = 512;

// Upper limit on n*d for dense Hessians; ATTNINV_DENSE_CAP overrides.
inline Index dense_cap() {
    if (const char* env = std::getenv("ATTNINV_DENSE_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<Index>(v);
    }
    return kDefaultDenseCap;
}

inline void require_dense_cap(Index n, Index d) {
    const Index cap = dense_cap();
    if (n * d > cap)
        throw DenseCapError("n*d = " + std::to_string(n * d) + " exceeds the dense cap of " +
                            std::to_string(cap) + " (set ATTNINV_DENSE_CAP to raise it)");
}

// vec(X) with k = i*d + j for column (token) i and row (feature) j.
template <typename Derived>
Vector<typename Derived::Scalar> flatten(const Eigen::MatrixBase<Derived>& X) {
    using S = typename Derived::Scalar;
    const Matrix<S> tmp = X;
    return Eigen::Map<const Vector<S>>(tmp.data(), tmp.size());
}

template <typename Derived>
Matrix<typename Derived::Scalar> unflatten(const Eigen::MatrixBase<Derived>& v, Index d, Index n) {
    using S = typename Derived::Scalar;
    if (v.size() != d * n) throw PreconditionError("unflatten: length does not match d*n");
    const Vector<S> tmp = v;
    return Eigen::Map<const Matrix<S>>(tmp.data(), d, n);
}

inline Index flat_index(Index i, Index j, Index d) { return i * d + j; }

inline void check_index(Index v, Index bound, const char* name) {
    if (v < 0 || v >= bound)
        throw IndexError(std::string("index ") + name + " = " + std::to_string(v) +
                         " out of range [0, " + std::to_string(bound) + ")");
}

}  // namespace attninv
