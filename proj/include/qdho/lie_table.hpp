#pragma once

// Abstract Lie algebra tables with central charges, plus a solver for the
// central extensions admitted by the Jacobi identity.
//
// Brackets are stored as  [T_a, T_b] = i*hbar*( sum_c f[a][b][c] T_c + z[a][b] I )
// with real structure constants; the common i*hbar factor is implicit.

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "qdho/errors.hpp"

namespace qdho {

class LieTable {
 public:
  explicit LieTable(std::vector<std::string> names)
      : names_(std::move(names)),
        f_(names_.size(),
           Eigen::MatrixXd::Zero(names_.size(), names_.size())),
        z_(Eigen::MatrixXd::Zero(names_.size(), names_.size())) {}

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  int index(const std::string& name) const {
    for (int i = 0; i < dim(); ++i)
      if (names_[i] == name) return i;
    throw ConfigError("unknown generator: " + name);
  }

  void set_bracket(const std::string& a, const std::string& b,
                   const std::vector<std::pair<std::string, double>>& combo,
                   double central = 0.0) {
    int ia = index(a), ib = index(b);
    for (const auto& [cname, coef] : combo) {
      int ic = index(cname);
      f_[ic](ia, ib) = coef;
      f_[ic](ib, ia) = -coef;
    }
    z_(ia, ib) = central;
    z_(ib, ia) = -central;
  }

  double coeff(int a, int b, int c) const { return f_[c](a, b); }
  double central(int a, int b) const { return z_(a, b); }

  Eigen::VectorXd coeffs(int a, int b) const {
    Eigen::VectorXd v(dim());
    for (int c = 0; c < dim(); ++c) v[c] = f_[c](a, b);
    return v;
  }

  /// Max Jacobi defect over all triples, including the central column.
  /// The generator part uses sum_d f_bc^d f_ad^e (cyclic); the central part
  /// sum_d f_bc^d z_ad (cyclic).
  double jacobi_max_defect() const {
    const int n = dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c) {
          Eigen::VectorXd defect = Eigen::VectorXd::Zero(n);
          double zdefect = 0.0;
          for (int d = 0; d < n; ++d) {
            defect += f_[d](b, c) * coeffs(a, d) + f_[d](c, a) * coeffs(b, d) +
                      f_[d](a, b) * coeffs(c, d);
            zdefect += f_[d](b, c) * z_(a, d) + f_[d](c, a) * z_(b, d) +
                       f_[d](a, b) * z_(c, d);
          }
          worst = std::max(worst, defect.cwiseAbs().maxCoeff());
          worst = std::max(worst, std::abs(zdefect));
        }
    return worst;
  }

  /// New generators T'_i = sum_j M(i,j) T_j (M invertible; the central
  /// generator is untouched).
  LieTable change_basis(const Eigen::MatrixXd& M,
                        std::vector<std::string> new_names) const {
    const int n = dim();
    Eigen::MatrixXd Minv = M.inverse();
    LieTable out(std::move(new_names));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double znew = 0.0;
        Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            double w = M(a, i) * M(b, j);
            if (w == 0.0) continue;
            znew += w * z_(i, j);
            for (int k = 0; k < n; ++k) F[k] += w * f_[k](i, j);
          }
        }
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) v += F[k] * Minv(k, l);
          out.f_[l](a, b) = v;
        }
        out.z_(a, b) = znew;
      }
    }
    return out;
  }

  /// Represent the named generators by scalar multiples of the identity and
  /// drop them from the table (their own bracket rows are removed; their
  /// appearances in remaining brackets fold into the central charge).
  LieTable drop_to_scalars(
      const std::vector<std::pair<std::string, double>>& subs) const {
    std::vector<int> dropped;
    std::vector<double> values(dim(), 0.0);
    for (const auto& [name, value] : subs) {
      int i = index(name);
      dropped.push_back(i);
      values[size_t(i)] = value;
    }
    auto is_dropped = [&dropped](int i) {
      for (int d : dropped)
        if (d == i) return true;
      return false;
    };
    std::vector<std::string> keep_names;
    std::vector<int> keep;
    for (int i = 0; i < dim(); ++i) {
      if (!is_dropped(i)) {
        keep.push_back(i);
        keep_names.push_back(names_[i]);
      }
    }
    LieTable out(keep_names);
    const int m = static_cast<int>(keep.size());
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        double znew = z_(keep[a], keep[b]);
        for (int d : dropped) znew += f_[d](keep[a], keep[b]) * values[size_t(d)];
        out.z_(a, b) = znew;
        for (int c = 0; c < m; ++c)
          out.f_[c](a, b) = f_[keep[c]](keep[a], keep[b]);
      }
    }
    return out;
  }

  /// Max absolute difference of structure constants and central charges.
  /// Requires identical generator names in identical order.
  static double deviation(const LieTable& A, const LieTable& B) {
    if (A.names_ != B.names_)
      throw ConfigError("LieTable deviation: generator lists differ");
    double m = (A.z_ - B.z_).cwiseAbs().maxCoeff();
    for (int c = 0; c < A.dim(); ++c)
      m = std::max(m, (A.f_[c] - B.f_[c]).cwiseAbs().maxCoeff());
    return m;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Eigen::MatrixXd> f_;  // f_[c](a,b): coefficient of T_c in [T_a,T_b]
  Eigen::MatrixXd z_;               // central charges
};

/// One-parameter family of central charges on a fixed list of bracket slots,
/// normalized so the first slot carries charge 1:  charges(k) = base + k*dir.
struct ExtensionFamily {
  std::vector<std::pair<int, int>> slots;
  Eigen::VectorXd base;
  Eigen::VectorXd direction;
  int full_nullspace_dim = 0;  // Jacobi solutions with charges on every slot
  int coboundary_rank = 0;     // trivial extensions (generator redefinitions)
  int gauge_fixed_dim = 0;     // Jacobi solutions confined to the given slots

  Eigen::VectorXd charges(double k) const { return base + k * direction; }
};

namespace detail {

/// Jacobi constraint matrix for central charges confined to `slots`
/// (all other charges pinned to zero).  One row per generator triple.
inline Eigen::MatrixXd jacobi_charge_matrix(
    const LieTable& t, const std::vector<std::pair<int, int>>& slots) {
  const int n = t.dim();
  auto slot_of = [&slots](int x, int y, double& sign) {
    for (size_t s = 0; s < slots.size(); ++s) {
      if (slots[s].first == x && slots[s].second == y) {
        sign = 1.0;
        return static_cast<int>(s);
      }
      if (slots[s].first == y && slots[s].second == x) {
        sign = -1.0;
        return static_cast<int>(s);
      }
    }
    return -1;
  };
  std::vector<Eigen::VectorXd> rows;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(slots.size());
        for (int d = 0; d < n; ++d) {
          struct {
            int u, v;
            double w;
          } contrib[3] = {{a, d, t.coeff(b, c, d)},
                          {b, d, t.coeff(c, a, d)},
                          {c, d, t.coeff(a, b, d)}};
          for (const auto& ct : contrib) {
            if (ct.w == 0.0) continue;
            double sign = 0.0;
            int s = slot_of(ct.u, ct.v, sign);
            if (s >= 0) row[s] += ct.w * sign;
          }
        }
        rows.push_back(row);
      }
    }
  }
  Eigen::MatrixXd A(rows.size(), slots.size());
  for (size_t r = 0; r < rows.size(); ++r) A.row(r) = rows[r];
  return A;
}

inline int kernel_dim(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return static_cast<int>(A.cols());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.dimensionOfKernel());
}

}  // namespace detail

/// Solves the Jacobi linear system for central charges.  `slots` names the
/// brackets allowed to carry a charge (the gauge choice); `normalize` the
/// bracket whose charge is set to 1; `parameter` the bracket whose charge
/// plays the role of the free family parameter.
inline ExtensionFamily solve_central_extensions(
    const LieTable& t,
    const std::vector<std::pair<std::string, std::string>>& slots,
    const std::pair<std::string, std::string>& normalize,
    const std::pair<std::string, std::string>& parameter) {
  ExtensionFamily fam;
  for (const auto& [a, b] : slots)
    fam.slots.emplace_back(t.index(a), t.index(b));

  // Reference dimensions: the unconstrained problem and the coboundaries.
  std::vector<std::pair<int, int>> all_pairs;
  for (int a = 0; a < t.dim(); ++a)
    for (int b = a + 1; b < t.dim(); ++b) all_pairs.emplace_back(a, b);
  fam.full_nullspace_dim =
      detail::kernel_dim(detail::jacobi_charge_matrix(t, all_pairs));
  Eigen::MatrixXd B(all_pairs.size(), t.dim());
  for (size_t p = 0; p < all_pairs.size(); ++p)
    for (int c = 0; c < t.dim(); ++c)
      B(p, c) = t.coeff(all_pairs[p].first, all_pairs[p].second, c);
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    lu.setThreshold(1e-10);
    fam.coboundary_rank = static_cast<int>(lu.rank());
  }

  // Gauge-fixed system on the allowed slots.
  Eigen::MatrixXd A = detail::jacobi_charge_matrix(t, fam.slots);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-10);
  Eigen::MatrixXd K = lu.kernel();  // columns span the solution space
  fam.gauge_fixed_dim = static_cast<int>(K.cols());
  if (fam.gauge_fixed_dim == 0)
    throw InconsistentTable("central-extension system has only the zero solution");

  int i_norm = -1, i_par = -1;
  std::pair<int, int> norm_idx{t.index(normalize.first), t.index(normalize.second)};
  std::pair<int, int> par_idx{t.index(parameter.first), t.index(parameter.second)};
  for (size_t s = 0; s < fam.slots.size(); ++s) {
    if (fam.slots[s] == norm_idx) i_norm = static_cast<int>(s);
    if (fam.slots[s] == par_idx) i_par = static_cast<int>(s);
  }
  if (i_norm < 0 || i_par < 0)
    throw ConfigError("normalization/parameter bracket is not an allowed slot");

  // Coordinates in the kernel: fix (charge at normalize, charge at parameter)
  // to (1, 0) for the base point and (0, 1) for the direction.
  Eigen::MatrixXd C(2, K.cols());
  C.row(0) = K.row(i_norm);
  C.row(1) = K.row(i_par);
  Eigen::FullPivLU<Eigen::MatrixXd> clu(C);
  clu.setThreshold(1e-10);
  if (clu.rank() != 2)
    throw InconsistentTable(
        "extension family is not parameterized by the requested brackets");
  Eigen::VectorXd e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  fam.base = K * clu.solve(e0);
  fam.direction = K * clu.solve(e1);
  return fam;
}

}  // namespace qdho
