#pragma once

#include <cstddef>
#include <vector>

#include "jointradius/spaces.hpp"

namespace jointradius {

/// (T_1, ..., T_k) in L(X, Y)^k, stored as dense dim(Y) x dim(X) matrices.
class OperatorTuple {
public:
    OperatorTuple(std::vector<Matrix> mats, Space source, Space target);
    /// Endomorphism tuple on `space`.
    OperatorTuple(std::vector<Matrix> mats, const Space& space);

    static OperatorTuple zero(int k, const Space& source, const Space& target);
    static OperatorTuple zero(int k, const Space& space) { return zero(k, space, space); }

    int k() const { return static_cast<int>(mats_.size()); }
    const std::vector<Matrix>& mats() const { return mats_; }
    const Matrix& operator[](std::size_t i) const { return mats_[i]; }
    const Space& source() const { return source_; }
    const Space& target() const { return target_; }
    bool is_endomorphism() const { return source_ == target_; }

    OperatorTuple scaled(Scalar c) const;

private:
    std::vector<Matrix> mats_;
    Space source_;
    Space target_;
};

std::vector<Vector> apply(const OperatorTuple& tuple, const Vector& x);

/// Componentwise plain transpose acting Y* -> X*; pairing(f, T x) = pairing(T^t f, x).
OperatorTuple adjoint(const OperatorTuple& tuple);

/// Embed an endomorphism tuple on summand `slot` of `host` as A_i on that
/// block and zero elsewhere.
OperatorTuple lift_direct_sum(const OperatorTuple& tuple, const Space& host, std::size_t slot);

/// Inverse of lift_direct_sum on the matrix data.
OperatorTuple restrict_to_slot(const OperatorTuple& lifted, std::size_t slot);

/// alpha * a + beta * b, componentwise.
OperatorTuple combine(const OperatorTuple& a, const OperatorTuple& b, Scalar alpha, Scalar beta);

/// Zero-padding embedding L(X)^k into L(X)^{k_new}.
OperatorTuple pad(const OperatorTuple& tuple, int k_new);

/// Entries drawn from the field Gaussian, streamed from (seed, stream).
OperatorTuple random_tuple(const Space& space, int k, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace jointradius
