#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qcfd/grid.hpp"

namespace qcfd {

/// Order-3 core with shape (left, phys, right), stored row-major
/// (right index fastest).
struct Tensor3 {
    int left = 1, phys = 2, right = 1;
    std::vector<double> a;

    Tensor3() = default;
    Tensor3(int l, int p, int r)
        : left(l), phys(p), right(r), a(static_cast<std::size_t>(l) * p * r, 0.0) {}

    double& operator()(int i, int s, int j) {
        return a[(static_cast<std::size_t>(i) * phys + s) * right + j];
    }
    double operator()(int i, int s, int j) const {
        return a[(static_cast<std::size_t>(i) * phys + s) * right + j];
    }
    std::size_t size() const { return a.size(); }
};

struct TruncationPolicy {
    int max_chi = 1 << 30;
    double svd_cutoff = 1e-12;  // relative to the largest singular value per bond

    static TruncationPolicy unlimited() { return {1 << 30, 0.0}; }
    static TruncationPolicy with_chi(int chi, double cutoff = 1e-12) { return {chi, cutoff}; }
    void validate() const;
};

/// Matrix product state over L binary sites; big-endian site order (site 0
/// carries the most significant bit of the grid index). Boundary bonds are 1.
struct Mps {
    int L = 0;
    std::vector<Tensor3> cores;  // core k: (r_{k-1}, 2, r_k)

    std::vector<int> bonds() const;  // [r_0, ..., r_L]
    int max_bond() const;
    void validate() const;
};

/// Matrix product operator; core k has shape (b_{k-1}, 2, 2, b_k), stored as
/// a Tensor3 with phys = 4 flattened as s_out*2 + s_in.
struct Mpo {
    int L = 0;
    std::vector<Tensor3> cores;

    std::vector<int> bonds() const;
    int max_bond() const;
    void validate() const;
};

/// Tensorizes a length-2^L field (big-endian binary reshaping) and factorizes
/// it by successive left-to-right SVD splits. All cores except the last have
/// orthonormal columns; bonds are truncated per policy. The all-zero field
/// encodes to an explicit all-zero rank-1 chain.
Mps encode_mps(const Field& f, const TruncationPolicy& policy);
Mps encode_mps(const Field& f, const TruncationPolicy& policy, double& discarded_weight);

/// Contracts all cores back to a dense field on the given grid.
Field decode_mps(const Mps& m, const GridSpec& spec);
Eigen::VectorXd decode_mps_values(const Mps& m);

/// One right-to-left canonicalization sweep followed by a left-to-right
/// truncated SVD sweep. Returns the compressed state (left-canonical except
/// the last core) and the total discarded singular weight sum(sigma^2).
std::pair<Mps, double> truncate(const Mps& m, const TruncationPolicy& policy);

Mps mps_add(const Mps& a, const Mps& b);
Mps mps_scale(const Mps& m, double factor);  // absorbed into the first core
Mps mps_hadamard(const Mps& a, const Mps& b);
double mps_norm(const Mps& m);
double mps_dot(const Mps& a, const Mps& b);

/// Cyclic shift by one grid point: direction +1 gives (S u)_j = u_{(j+1) mod N},
/// direction -1 gives u_{(j-1) mod N}. Built from the binary increment chain
/// with a carry bond; every internal bond is exactly 2.
Mpo cyclic_shift_mpo(int L, int direction);

Mpo identity_mpo(int L);
Mpo mpo_add(const Mpo& a, const Mpo& b);
Mpo mpo_scale(const Mpo& o, double factor);
Mpo mpo_transpose(const Mpo& o);

/// Periodic centered-difference operators on 2^L points:
///   D1 = (S_+ - S_-) / (2 dx),  D2 = (S_+ - 2 I + S_-) / dx^2.
/// Bond dimensions are 4 and 5; entries are exact (integer cores scaled by
/// the 1/dx factors absorbed into the first core).
std::pair<Mpo, Mpo> derivative_mpos(int L, double dx);

/// SVD compression of an MPO (same sweeps as truncate, physical dimension 4).
std::pair<Mpo, double> compress_mpo(const Mpo& o, const TruncationPolicy& policy);

Mps mpo_apply(const Mpo& o, const Mps& m);

/// Dense materialization, big-endian on both physical legs. Guarded to
/// L <= 12 (the intermediate of a bond-5 operator at L = 12 is ~170 MB).
Eigen::MatrixXd mpo_to_dense(const Mpo& o);

}  // namespace qcfd
