#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qbsc/linalg.hpp"

namespace qbsc {

using Dims = std::vector<Eigen::Index>;

inline Eigen::Index total_dim(const Dims& dims) {
    Eigen::Index d = 1;
    for (Eigen::Index x : dims) {
        if (x < 1) throw std::invalid_argument("register dimension must be positive");
        d *= x;
    }
    return d;
}

// Pure state on an ordered list of registers. Register 0 is the most
// significant factor of the flat index (Kronecker convention).
struct StateVector {
    Vec amps;
    Dims dims;

    StateVector() = default;
    StateVector(Vec a, Dims d) : amps(std::move(a)), dims(std::move(d)) {
        if (total_dim(dims) != amps.size()) throw std::invalid_argument("register dims do not match amplitude count");
        if (std::abs(amps.squaredNorm() - 1.0) > kHermTol) throw std::invalid_argument("state vector is not normalized");
    }

    Eigen::Index dim() const { return amps.size(); }
    Mat density() const { return amps * amps.adjoint(); }
};

struct DensityMatrix {
    Mat mat;
    Dims dims;

    DensityMatrix() = default;
    DensityMatrix(Mat m, Dims d) : mat(std::move(m)), dims(std::move(d)) {
        if (mat.rows() != mat.cols() || total_dim(dims) != mat.rows())
            throw std::invalid_argument("register dims do not match matrix size");
        if (!is_hermitian(mat)) throw std::invalid_argument("density matrix is not Hermitian");
        if (std::abs(mat.trace().real() - 1.0) > kHermTol) throw std::invalid_argument("density matrix trace != 1");
        clamped_spectrum(mat);  // rejects eigenvalues below -1e-9
    }

    Eigen::Index dim() const { return mat.rows(); }
};

inline StateVector basis_state(Eigen::Index d, Eigen::Index i) {
    Vec v = Vec::Zero(d);
    v(i) = 1.0;
    return StateVector(std::move(v), {d});
}

inline DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(Mat::Identity(d, d) / double(d), {d});
}

inline StateVector maximally_entangled(Eigen::Index d) {
    Vec v = Vec::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
    return StateVector(std::move(v), {d, d});
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    Vec v(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) v.segment(i * b.dim(), b.dim()) = a.amps(i) * b.amps;
    Dims d = a.dims;
    d.insert(d.end(), b.dims.begin(), b.dims.end());
    return StateVector(std::move(v), std::move(d));
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    Dims d = a.dims;
    d.insert(d.end(), b.dims.begin(), b.dims.end());
    return DensityMatrix(kron(a.mat, b.mat), std::move(d));
}

namespace detail {

inline void check_registers(const Dims& dims, const std::vector<int>& regs) {
    for (int r : regs)
        if (r < 0 || r >= int(dims.size())) throw std::out_of_range("register index out of range");
}

// Flat-index strides per register.
inline std::vector<Eigen::Index> strides(const Dims& dims) {
    std::vector<Eigen::Index> s(dims.size());
    Eigen::Index acc = 1;
    for (int i = int(dims.size()) - 1; i >= 0; --i) {
        s[i] = acc;
        acc *= dims[i];
    }
    return s;
}

}  // namespace detail

// Reorders registers: new register i is old register perm[i].
inline StateVector permute_registers(const StateVector& psi, const std::vector<int>& perm) {
    if (perm.size() != psi.dims.size()) throw std::invalid_argument("permutation size mismatch");
    detail::check_registers(psi.dims, perm);
    auto old_strides = detail::strides(psi.dims);
    Dims new_dims(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) new_dims[i] = psi.dims[perm[i]];
    auto new_strides = detail::strides(new_dims);

    Vec out(psi.dim());
    std::vector<Eigen::Index> idx(perm.size(), 0);
    for (Eigen::Index flat = 0; flat < psi.dim(); ++flat) {
        // flat is the new index; rebuild the old one.
        Eigen::Index rem = flat, old_flat = 0;
        for (size_t i = 0; i < perm.size(); ++i) {
            Eigen::Index digit = rem / new_strides[i];
            rem %= new_strides[i];
            old_flat += digit * old_strides[perm[i]];
        }
        out(flat) = psi.amps(old_flat);
    }
    return StateVector(std::move(out), std::move(new_dims));
}

// Applies an operator to a subset of registers (listed in order). The operator
// maps the product of the target dims to the product of out_dims; target
// registers are replaced by out_dims at the position of the first target.
inline StateVector apply_to_registers(const StateVector& psi, const Mat& op, const std::vector<int>& targets,
                                      const Dims& out_dims) {
    detail::check_registers(psi.dims, targets);
    // Move targets to the front, preserving order of the remaining registers.
    std::vector<int> perm = targets;
    std::vector<char> used(psi.dims.size(), 0);
    for (int t : targets) used[t] = 1;
    for (int i = 0; i < int(psi.dims.size()); ++i)
        if (!used[i]) perm.push_back(i);
    StateVector front = permute_registers(psi, perm);

    Eigen::Index d_in = 1;
    for (int t : targets) d_in *= psi.dims[t];
    if (op.cols() != d_in || op.rows() != total_dim(out_dims)) throw std::invalid_argument("operator shape mismatch");
    Eigen::Index d_rest = psi.dim() / d_in;

    // amps(a, b) = front.amps(a * d_rest + b); column-major map has (b, a).
    Eigen::Map<const Mat> m(front.amps.data(), d_rest, d_in);
    Mat n = m * op.transpose();  // (b, a')
    Vec out(op.rows() * d_rest);
    Eigen::Map<Mat>(out.data(), d_rest, op.rows()) = n;

    Dims new_front_dims = out_dims;
    for (size_t i = targets.size(); i < perm.size(); ++i) new_front_dims.push_back(psi.dims[perm[i]]);
    out /= out.norm();  // isometries preserve norm; this only scrubs rounding
    StateVector res(std::move(out), std::move(new_front_dims));

    // Undo the permutation: new layout is out_dims followed by the untouched
    // registers in original order. Build the inverse placement.
    // Positions in the final layout: out registers land at the slot of the
    // lowest target index; untouched registers keep relative order.
    std::vector<int> final_order;
    int first_target_pos = *std::min_element(targets.begin(), targets.end());
    {
        // final register sequence: untouched registers in original order with
        // the out registers inserted where the first target used to be.
        std::vector<int> seq;  // indices into res.dims (front layout)
        int n_out = int(out_dims.size());
        int untouched = 0;
        for (int i = 0; i < int(psi.dims.size()); ++i) {
            if (used[i]) {
                if (i == first_target_pos)
                    for (int k = 0; k < n_out; ++k) seq.push_back(k);
            } else {
                seq.push_back(n_out + untouched);
                ++untouched;
            }
        }
        final_order = seq;
    }
    return permute_registers(res, final_order);
}

// Reduced density matrix on the kept registers (in the order given).
inline DensityMatrix reduced_density(const StateVector& psi, const std::vector<int>& keep) {
    detail::check_registers(psi.dims, keep);
    std::vector<int> perm = keep;
    std::vector<char> used(psi.dims.size(), 0);
    for (int k : keep) used[k] = 1;
    for (int i = 0; i < int(psi.dims.size()); ++i)
        if (!used[i]) perm.push_back(i);
    StateVector front = permute_registers(psi, perm);

    Eigen::Index d_keep = 1;
    Dims keep_dims;
    for (int k : keep) {
        d_keep *= psi.dims[k];
        keep_dims.push_back(psi.dims[k]);
    }
    Eigen::Index d_rest = psi.dim() / d_keep;
    Eigen::Map<const Mat> m(front.amps.data(), d_rest, d_keep);
    Mat rho = (m.adjoint() * m).transpose();
    rho = (rho + Mat(rho.adjoint())) / 2.0;
    return DensityMatrix(std::move(rho), std::move(keep_dims));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    detail::check_registers(rho.dims, keep);
    auto strides = detail::strides(rho.dims);
    Dims keep_dims;
    Eigen::Index d_keep = 1;
    for (int k : keep) {
        keep_dims.push_back(rho.dims[k]);
        d_keep *= rho.dims[k];
    }
    std::vector<int> traced;
    std::vector<char> used(rho.dims.size(), 0);
    for (int k : keep) used[k] = 1;
    Eigen::Index d_traced = 1;
    for (int i = 0; i < int(rho.dims.size()); ++i)
        if (!used[i]) {
            traced.push_back(i);
            d_traced *= rho.dims[i];
        }

    auto keep_strides = detail::strides(keep_dims);
    Mat out = Mat::Zero(d_keep, d_keep);
    for (Eigen::Index i = 0; i < d_keep; ++i) {
        Eigen::Index base_i = 0, rem = i;
        for (size_t k = 0; k < keep.size(); ++k) {
            base_i += (rem / keep_strides[k]) * strides[keep[k]];
            rem %= keep_strides[k];
        }
        for (Eigen::Index j = 0; j < d_keep; ++j) {
            Eigen::Index base_j = 0, remj = j;
            for (size_t k = 0; k < keep.size(); ++k) {
                base_j += (remj / keep_strides[k]) * strides[keep[k]];
                remj %= keep_strides[k];
            }
            Complex sum = 0;
            for (Eigen::Index t = 0; t < d_traced; ++t) {
                Eigen::Index off = 0, remt = t;
                for (size_t k = 0; k < traced.size(); ++k) {
                    Eigen::Index dk = rho.dims[traced[k]];
                    Eigen::Index block = 1;
                    for (size_t l = k + 1; l < traced.size(); ++l) block *= rho.dims[traced[l]];
                    Eigen::Index digit = remt / block;
                    remt %= block;
                    off += digit * strides[traced[k]];
                    (void)dk;
                }
                sum += rho.mat(base_i + off, base_j + off);
            }
            out(i, j) = sum;
        }
    }
    return DensityMatrix(std::move(out), std::move(keep_dims));
}

// Canonical purification: |psi> = sum_k sqrt(l_k) |k>|v_k>, eigenvalues sorted
// descending. Tracing out the first register recovers rho.
inline StateVector purify(const DensityMatrix& rho) {
    HermEig e = herm_eig(rho.mat);
    Eigen::Index d = rho.dim();
    Vec out = Vec::Zero(d * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        double lambda = e.values(d - 1 - k);  // descending
        if (lambda < kSupportCut) continue;
        out.segment(k * d, d) = std::sqrt(lambda) * e.vectors.col(d - 1 - k);
    }
    out /= out.norm();
    return StateVector(std::move(out), {d, d});
}

}  // namespace qbsc
