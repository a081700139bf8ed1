#include "jointradius/operators.hpp"

#include <string>

namespace jointradius {

namespace {

void check_field(const Matrix& m, const Space& s) {
    if (s.is_complex()) return;
    if (!m.imag().isZero(0.0))
        throw Error(ErrorCode::ShapeMismatch, "complex entries in a tuple over a real space");
}

}  // namespace

OperatorTuple::OperatorTuple(std::vector<Matrix> mats, Space source, Space target)
    : mats_(std::move(mats)), source_(std::move(source)), target_(std::move(target)) {
    if (mats_.empty()) throw Error(ErrorCode::InvalidK, "a tuple needs k >= 1");
    if (source_.field() != target_.field())
        throw Error(ErrorCode::ShapeMismatch, "source and target fields differ");
    for (const auto& m : mats_) {
        if (m.rows() != target_.dim() || m.cols() != source_.dim())
            throw Error(ErrorCode::DimensionMismatch,
                        "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", expected " + std::to_string(target_.dim()) + "x" +
                            std::to_string(source_.dim()));
        check_field(m, source_);
    }
}

OperatorTuple::OperatorTuple(std::vector<Matrix> mats, const Space& space)
    : OperatorTuple(std::move(mats), space, space) {}

OperatorTuple OperatorTuple::zero(int k, const Space& source, const Space& target) {
    if (k < 1) throw Error(ErrorCode::InvalidK, "a tuple needs k >= 1");
    return OperatorTuple(std::vector<Matrix>(k, Matrix::Zero(target.dim(), source.dim())), source,
                         target);
}

OperatorTuple OperatorTuple::scaled(Scalar c) const {
    if (!source_.is_complex() && c.imag() != 0.0)
        throw Error(ErrorCode::ShapeMismatch, "complex scalar on a real tuple");
    std::vector<Matrix> out;
    out.reserve(mats_.size());
    for (const auto& m : mats_) out.push_back(c * m);
    return OperatorTuple(std::move(out), source_, target_);
}

std::vector<Vector> apply(const OperatorTuple& tuple, const Vector& x) {
    if (x.size() != tuple.source().dim())
        throw Error(ErrorCode::DimensionMismatch, "apply: vector length does not match the source");
    std::vector<Vector> out;
    out.reserve(tuple.mats().size());
    for (const auto& m : tuple.mats()) out.push_back(m * x);
    return out;
}

OperatorTuple adjoint(const OperatorTuple& tuple) {
    std::vector<Matrix> out;
    out.reserve(tuple.mats().size());
    for (const auto& m : tuple.mats()) out.push_back(m.transpose());
    return OperatorTuple(std::move(out), dual_space(tuple.target()), dual_space(tuple.source()));
}

OperatorTuple lift_direct_sum(const OperatorTuple& tuple, const Space& host, std::size_t slot) {
    if (!host.is_sum() || slot >= host.summands().size())
        throw Error(ErrorCode::SlotMismatch, "slot " + std::to_string(slot) + " is not a summand of " +
                                                 host.describe());
    const Space& block = host.summands()[slot];
    if (!tuple.is_endomorphism() || tuple.source() != block)
        throw Error(ErrorCode::SlotMismatch,
                    "tuple space " + tuple.source().describe() + " differs from summand " +
                        block.describe());
    const int at = host.offsets()[slot];
    std::vector<Matrix> out;
    for (const auto& m : tuple.mats()) {
        Matrix big = Matrix::Zero(host.dim(), host.dim());
        big.block(at, at, block.dim(), block.dim()) = m;
        out.push_back(std::move(big));
    }
    return OperatorTuple(std::move(out), host);
}

OperatorTuple restrict_to_slot(const OperatorTuple& lifted, std::size_t slot) {
    const Space& host = lifted.source();
    if (!host.is_sum() || slot >= host.summands().size())
        throw Error(ErrorCode::SlotMismatch, "slot out of range");
    const Space& block = host.summands()[slot];
    const int at = host.offsets()[slot];
    std::vector<Matrix> out;
    for (const auto& m : lifted.mats()) out.push_back(m.block(at, at, block.dim(), block.dim()));
    return OperatorTuple(std::move(out), block);
}

OperatorTuple combine(const OperatorTuple& a, const OperatorTuple& b, Scalar alpha, Scalar beta) {
    if (a.k() != b.k() || a.source() != b.source() || a.target() != b.target())
        throw Error(ErrorCode::ShapeMismatch, "combine needs equal k and spaces");
    std::vector<Matrix> out;
    for (int i = 0; i < a.k(); ++i) out.push_back(alpha * a[i] + beta * b[i]);
    return OperatorTuple(std::move(out), a.source(), a.target());
}

OperatorTuple pad(const OperatorTuple& tuple, int k_new) {
    if (k_new < tuple.k())
        throw Error(ErrorCode::ShrinkNotAllowed, "pad cannot drop operators");
    std::vector<Matrix> out = tuple.mats();
    out.resize(k_new, Matrix::Zero(tuple.target().dim(), tuple.source().dim()));
    return OperatorTuple(std::move(out), tuple.source(), tuple.target());
}

OperatorTuple random_tuple(const Space& space, int k, std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed, stream);
    const int n = space.dim();
    std::vector<Matrix> mats;
    for (int i = 0; i < k; ++i) {
        Matrix m(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r)
                m(r, c) = space.is_complex() ? rng.complex_gaussian() : Scalar(rng.gaussian(), 0.0);
        mats.push_back(std::move(m));
    }
    return OperatorTuple(std::move(mats), space);
}

}  // namespace jointradius
