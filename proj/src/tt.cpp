#include "qcfd/tt.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcfd {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_lp_r(const Tensor3& t) {
    return {t.a.data(), static_cast<Eigen::Index>(t.left) * t.phys, t.right};
}

Eigen::Map<const RowMat> as_l_pr(const Tensor3& t) {
    return {t.a.data(), t.left, static_cast<Eigen::Index>(t.phys) * t.right};
}

Tensor3 from_matrix(const RowMat& m, int left, int phys, int right) {
    Tensor3 t(left, phys, right);
    Eigen::Map<RowMat>(t.a.data(), m.rows(), m.cols()) = m;
    return t;
}

void validate_chain(const std::vector<Tensor3>& cores, int L, int phys, const char* what) {
    if (L < 1 || static_cast<int>(cores.size()) != L)
        throw std::invalid_argument(std::string(what) + ": core count != L");
    if (cores.front().left != 1 || cores.back().right != 1)
        throw std::invalid_argument(std::string(what) + ": boundary bonds must be 1");
    for (int k = 0; k < L; ++k) {
        if (cores[k].phys != phys)
            throw std::invalid_argument(std::string(what) + ": bad physical dimension");
        if (k + 1 < L && cores[k].right != cores[k + 1].left)
            throw std::invalid_argument(std::string(what) + ": bond mismatch between sites " +
                                        std::to_string(k) + " and " + std::to_string(k + 1));
    }
}

std::vector<int> chain_bonds(const std::vector<Tensor3>& cores) {
    std::vector<int> b;
    b.reserve(cores.size() + 1);
    b.push_back(cores.empty() ? 1 : cores.front().left);
    for (const auto& c : cores) b.push_back(c.right);
    return b;
}

// Singular values kept: descending order, drop sigma <= cutoff * sigma_max,
// keep at least one and at most max_chi.
int kept_rank(const Eigen::VectorXd& sv, int max_chi, double cutoff) {
    const double smax = sv.size() ? sv[0] : 0.0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff * smax) ++r;
    r = std::max(r, 1);
    r = std::min<int>(r, max_chi);
    return std::min<int>(r, static_cast<int>(sv.size()));
}

// Right-to-left LQ canonicalization, then a left-to-right truncated SVD
// sweep. Shared by MPS (phys 2) and MPO (phys 4) compression. Returns the
// total discarded weight sum over bonds of discarded sigma^2.
double truncate_chain(std::vector<Tensor3>& cores, const TruncationPolicy& policy) {
    const int L = static_cast<int>(cores.size());

    for (int k = L - 1; k >= 1; --k) {
        const Tensor3& c = cores[k];
        // M = (left, phys*right); LQ via QR of the transpose.
        Eigen::MatrixXd mt = as_l_pr(c).transpose();  // (phys*right, left)
        const Eigen::Index rho = std::min(mt.rows(), mt.cols());
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(mt);
        Eigen::MatrixXd qthin = qr.householderQ() * Eigen::MatrixXd::Identity(mt.rows(), rho);
        Eigen::MatrixXd lfac =
            Eigen::MatrixXd(qr.matrixQR().topRows(rho).triangularView<Eigen::Upper>())
                .transpose();  // (left, rho)

        RowMat q = qthin.transpose();  // (rho, phys*right), orthonormal rows
        cores[k] = from_matrix(q, static_cast<int>(rho), c.phys, c.right);

        const Tensor3& prev = cores[k - 1];
        RowMat merged = as_lp_r(prev) * lfac;  // (left'*phys, rho)
        cores[k - 1] = from_matrix(merged, prev.left, prev.phys, static_cast<int>(rho));
    }

    double discarded = 0.0;
    for (int k = 0; k + 1 < L; ++k) {
        const Tensor3& c = cores[k];
        Eigen::MatrixXd m = as_lp_r(c);  // (left*phys, right)
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const int r = kept_rank(sv, policy.max_chi, policy.svd_cutoff);
        for (Eigen::Index i = r; i < sv.size(); ++i) discarded += sv[i] * sv[i];

        RowMat u = svd.matrixU().leftCols(r);
        cores[k] = from_matrix(u, c.left, c.phys, r);

        Eigen::MatrixXd carry =
            sv.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();  // (r, right)
        const Tensor3& next = cores[k + 1];
        RowMat merged = carry * as_l_pr(next);  // (r, phys*right)
        cores[k + 1] = from_matrix(merged, r, next.phys, next.right);
    }
    return discarded;
}

std::vector<Tensor3> chain_add(const std::vector<Tensor3>& a, const std::vector<Tensor3>& b) {
    const int L = static_cast<int>(a.size());
    std::vector<Tensor3> out;
    out.reserve(L);
    if (L == 1) {
        Tensor3 c = a[0];
        for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] += b[0].a[i];
        out.push_back(std::move(c));
        return out;
    }
    for (int k = 0; k < L; ++k) {
        const Tensor3& x = a[k];
        const Tensor3& y = b[k];
        const int l = (k == 0) ? 1 : x.left + y.left;
        const int r = (k == L - 1) ? 1 : x.right + y.right;
        Tensor3 c(l, x.phys, r);
        const int loff = (k == 0) ? 0 : x.left;
        const int roff = (k == L - 1) ? 0 : x.right;
        for (int i = 0; i < x.left; ++i)
            for (int s = 0; s < x.phys; ++s)
                for (int j = 0; j < x.right; ++j) c(i, s, j) = x(i, s, j);
        for (int i = 0; i < y.left; ++i)
            for (int s = 0; s < y.phys; ++s)
                for (int j = 0; j < y.right; ++j) c(i + loff, s, j + roff) = y(i, s, j);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

void TruncationPolicy::validate() const {
    if (max_chi < 1) throw std::invalid_argument("TruncationPolicy: max_chi must be >= 1");
    if (svd_cutoff < 0.0 || svd_cutoff >= 1.0)
        throw std::invalid_argument("TruncationPolicy: svd_cutoff must be in [0, 1)");
}

std::vector<int> Mps::bonds() const { return chain_bonds(cores); }
std::vector<int> Mpo::bonds() const { return chain_bonds(cores); }

int Mps::max_bond() const {
    int m = 1;
    for (const auto& c : cores) m = std::max(m, c.right);
    return m;
}

int Mpo::max_bond() const {
    int m = 1;
    for (const auto& c : cores) m = std::max(m, c.right);
    return m;
}

void Mps::validate() const { validate_chain(cores, L, 2, "Mps"); }
void Mpo::validate() const { validate_chain(cores, L, 4, "Mpo"); }

Mps encode_mps(const Field& f, const TruncationPolicy& policy) {
    double w = 0.0;
    return encode_mps(f, policy, w);
}

Mps encode_mps(const Field& f, const TruncationPolicy& policy, double& discarded_weight) {
    policy.validate();
    const int L = f.spec.L;
    const int N = f.spec.N;
    if (f.values.size() != N) throw std::invalid_argument("encode_mps: field/spec mismatch");
    discarded_weight = 0.0;

    Mps m;
    m.L = L;
    if (f.values.cwiseAbs().maxCoeff() == 0.0) {
        // All-zero field: explicit rank-1 zero chain, no normalization anywhere.
        m.cores.assign(L, Tensor3(1, 2, 1));
        return m;
    }

    RowMat cur(2, N / 2);
    Eigen::Map<RowMat>(cur.data(), 2, N / 2) =
        Eigen::Map<const RowMat>(f.values.data(), 2, N / 2);
    int leftb = 1;
    for (int k = 0; k < L; ++k) {
        if (k == L - 1) {
            m.cores.push_back(from_matrix(cur, leftb, 2, 1));
            break;
        }
        Eigen::MatrixXd mat = cur;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const int r = kept_rank(sv, policy.max_chi, policy.svd_cutoff);
        for (Eigen::Index i = r; i < sv.size(); ++i) discarded_weight += sv[i] * sv[i];

        RowMat u = svd.matrixU().leftCols(r);
        m.cores.push_back(from_matrix(u, leftb, 2, r));

        RowMat carry = sv.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
        // Row-major (r, cols) reinterprets as (2r, cols/2): the next site's
        // bit moves from the column index into the row index.
        cur = Eigen::Map<RowMat>(carry.data(), 2 * carry.rows(), carry.cols() / 2);
        leftb = r;
    }
    return m;
}

Eigen::VectorXd decode_mps_values(const Mps& m) {
    m.validate();
    RowMat p(1, 1);
    p(0, 0) = 1.0;
    for (const auto& c : m.cores) {
        RowMat next = p * as_l_pr(c);  // (rows, 2*right)
        p = Eigen::Map<RowMat>(next.data(), 2 * next.rows(), next.cols() / 2);
    }
    return Eigen::Map<Eigen::VectorXd>(p.data(), p.rows());
}

Field decode_mps(const Mps& m, const GridSpec& spec) {
    if (m.L != spec.L) throw std::invalid_argument("decode_mps: site count != spec.L");
    return Field(spec, decode_mps_values(m));
}

std::pair<Mps, double> truncate(const Mps& m, const TruncationPolicy& policy) {
    m.validate();
    policy.validate();
    Mps out = m;
    const double w = truncate_chain(out.cores, policy);
    return {std::move(out), w};
}

Mps mps_add(const Mps& a, const Mps& b) {
    a.validate();
    b.validate();
    if (a.L != b.L) throw std::invalid_argument("mps_add: length mismatch");
    Mps out;
    out.L = a.L;
    out.cores = chain_add(a.cores, b.cores);
    return out;
}

Mps mps_scale(const Mps& m, double factor) {
    Mps out = m;
    for (double& v : out.cores.front().a) v *= factor;
    return out;
}

Mps mps_hadamard(const Mps& a, const Mps& b) {
    a.validate();
    b.validate();
    if (a.L != b.L) throw std::invalid_argument("mps_hadamard: length mismatch");
    Mps out;
    out.L = a.L;
    out.cores.reserve(a.L);
    for (int k = 0; k < a.L; ++k) {
        const Tensor3& x = a.cores[k];
        const Tensor3& y = b.cores[k];
        Tensor3 c(x.left * y.left, 2, x.right * y.right);
        for (int s = 0; s < 2; ++s)
            for (int i = 0; i < x.left; ++i)
                for (int j = 0; j < x.right; ++j) {
                    const double v = x(i, s, j);
                    if (v == 0.0) continue;
                    for (int p = 0; p < y.left; ++p) {
                        double* dst = &c(i * y.left + p, s, j * y.right);
                        const double* src = &y(p, s, 0);
                        for (int q = 0; q < y.right; ++q) dst[q] += v * src[q];
                    }
                }
        out.cores.push_back(std::move(c));
    }
    return out;
}

double mps_dot(const Mps& a, const Mps& b) {
    if (a.L != b.L) throw std::invalid_argument("mps_dot: length mismatch");
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
    for (int k = 0; k < a.L; ++k) {
        const Tensor3& x = a.cores[k];
        const Tensor3& y = b.cores[k];
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(x.right, y.right);
        for (int s = 0; s < 2; ++s) {
            Eigen::Map<const RowMat, 0, Eigen::OuterStride<>> xs(
                x.a.data() + static_cast<std::size_t>(s) * x.right, x.left, x.right,
                Eigen::OuterStride<>(static_cast<Eigen::Index>(x.phys) * x.right));
            Eigen::Map<const RowMat, 0, Eigen::OuterStride<>> ys(
                y.a.data() + static_cast<std::size_t>(s) * y.right, y.left, y.right,
                Eigen::OuterStride<>(static_cast<Eigen::Index>(y.phys) * y.right));
            next.noalias() += xs.transpose() * env * ys;
        }
        env = std::move(next);
    }
    return env(0, 0);
}

double mps_norm(const Mps& m) { return std::sqrt(std::max(0.0, mps_dot(m, m))); }

Mpo cyclic_shift_mpo(int L, int direction) {
    if (L < 1) throw std::invalid_argument("cyclic_shift_mpo: L must be >= 1");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("cyclic_shift_mpo: direction must be +1 or -1");

    // Increment chain: row = col + 1 (mod 2^L), carry bond flowing from the
    // least significant site (L-1) toward the most significant (0). This is
    // the -1 shift, (S u)_j = u_{j-1}; the +1 shift is its transpose.
    Mpo s;
    s.L = L;
    s.cores.reserve(L);
    auto entry = [](Tensor3& t, int bl, int a, int b, int br) { t(bl, a * 2 + b, br) = 1.0; };
    for (int k = 0; k < L; ++k) {
        const bool first = (k == 0);
        const bool last = (k == L - 1);
        Tensor3 w(first ? 1 : 2, 4, last ? 1 : 2);
        for (int b = 0; b < 2; ++b) {
            if (L == 1) {
                entry(w, 0, b ^ 1, b, 0);
            } else if (last) {
                entry(w, b, b ^ 1, b, 0);  // carry-in fixed to 1 at the LSB
            } else if (first) {
                for (int carry = 0; carry < 2; ++carry)
                    entry(w, 0, b ^ carry, b, carry);  // overflow carry dropped (mod 2^L)
            } else {
                for (int carry = 0; carry < 2; ++carry)
                    entry(w, b & carry, b ^ carry, b, carry);
            }
        }
        s.cores.push_back(std::move(w));
    }
    return direction < 0 ? s : mpo_transpose(s);
}

Mpo identity_mpo(int L) {
    if (L < 1) throw std::invalid_argument("identity_mpo: L must be >= 1");
    Mpo o;
    o.L = L;
    for (int k = 0; k < L; ++k) {
        Tensor3 w(1, 4, 1);
        w(0, 0, 0) = 1.0;  // |0><0|
        w(0, 3, 0) = 1.0;  // |1><1|
        o.cores.push_back(std::move(w));
    }
    return o;
}

Mpo mpo_add(const Mpo& a, const Mpo& b) {
    a.validate();
    b.validate();
    if (a.L != b.L) throw std::invalid_argument("mpo_add: length mismatch");
    Mpo out;
    out.L = a.L;
    out.cores = chain_add(a.cores, b.cores);
    return out;
}

Mpo mpo_scale(const Mpo& o, double factor) {
    Mpo out = o;
    for (double& v : out.cores.front().a) v *= factor;
    return out;
}

Mpo mpo_transpose(const Mpo& o) {
    Mpo out = o;
    for (auto& c : out.cores) {
        Tensor3 t(c.left, 4, c.right);
        for (int i = 0; i < c.left; ++i)
            for (int so = 0; so < 2; ++so)
                for (int si = 0; si < 2; ++si)
                    for (int j = 0; j < c.right; ++j)
                        t(i, so * 2 + si, j) = c(i, si * 2 + so, j);
        c = std::move(t);
    }
    return out;
}

std::pair<Mpo, Mpo> derivative_mpos(int L, double dx) {
    if (L < 2) throw std::invalid_argument("derivative_mpos: L must be >= 2");
    if (!(dx > 0.0)) throw std::invalid_argument("derivative_mpos: dx must be > 0");
    const Mpo up = cyclic_shift_mpo(L, +1);
    const Mpo down = cyclic_shift_mpo(L, -1);
    Mpo d1 = mpo_scale(mpo_add(up, mpo_scale(down, -1.0)), 1.0 / (2.0 * dx));
    Mpo d2 = mpo_scale(mpo_add(mpo_add(up, mpo_scale(identity_mpo(L), -2.0)), down),
                       1.0 / (dx * dx));
    return {std::move(d1), std::move(d2)};
}

std::pair<Mpo, double> compress_mpo(const Mpo& o, const TruncationPolicy& policy) {
    o.validate();
    policy.validate();
    Mpo out = o;
    const double w = truncate_chain(out.cores, policy);
    return {std::move(out), w};
}

Mps mpo_apply(const Mpo& o, const Mps& m) {
    o.validate();
    m.validate();
    if (o.L != m.L) throw std::invalid_argument("mpo_apply: length mismatch");
    Mps out;
    out.L = m.L;
    out.cores.reserve(m.L);
    for (int k = 0; k < m.L; ++k) {
        const Tensor3& w = o.cores[k];
        const Tensor3& x = m.cores[k];
        Tensor3 c(w.left * x.left, 2, w.right * x.right);
        for (int beta = 0; beta < w.left; ++beta)
            for (int so = 0; so < 2; ++so)
                for (int si = 0; si < 2; ++si)
                    for (int betap = 0; betap < w.right; ++betap) {
                        const double wv = w(beta, so * 2 + si, betap);
                        if (wv == 0.0) continue;
                        for (int a = 0; a < x.left; ++a) {
                            double* dst = &c(beta * x.left + a, so, betap * x.right);
                            const double* src = &x(a, si, 0);
                            for (int b = 0; b < x.right; ++b) dst[b] += wv * src[b];
                        }
                    }
        out.cores.push_back(std::move(c));
    }
    return out;
}

Eigen::MatrixXd mpo_to_dense(const Mpo& o) {
    o.validate();
    if (o.L > 12) throw std::invalid_argument("mpo_to_dense: L > 12 exceeds the dense guard");
    RowMat p(1, 1);
    p(0, 0) = 1.0;
    for (const auto& c : o.cores) {
        RowMat next = p * as_l_pr(c);  // (rows, 4*right)
        p = Eigen::Map<RowMat>(next.data(), 4 * next.rows(), next.cols() / 4);
    }
    // Flat index interleaves (row bit, col bit) per site; de-interleave.
    const int n = 1 << o.L;
    Eigen::MatrixXd dense(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::size_t idx = 0;
            for (int k = 0; k < o.L; ++k) {
                const int rb = (r >> (o.L - 1 - k)) & 1;
                const int cb = (c >> (o.L - 1 - k)) & 1;
                idx = idx * 4 + static_cast<std::size_t>(rb * 2 + cb);
            }
            dense(r, c) = p(static_cast<Eigen::Index>(idx), 0);
        }
    return dense;
}

}  // namespace qcfd
