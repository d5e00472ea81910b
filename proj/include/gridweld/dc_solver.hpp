#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "gridweld/network.hpp"
#include "gridweld/union_find.hpp"

namespace gridweld {

enum class solve_method { direct, conjugate_gradient };

class singular_system_error : public std::runtime_error {
 public:
  explicit singular_system_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

class no_convergence_error : public std::runtime_error {
 public:
  explicit no_convergence_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

namespace detail {

/// Reduced system over the non-pad nodes of pad-reachable components,
/// formulated on the drop vector d = supply - v so the right-hand side is
/// just the sink currents: G d = s, with G the grounded Laplacian.
struct reduced_system {
  std::vector<int> var;  // node id -> variable index, -1 if none
  int num_vars = 0;
  std::vector<double> rhs;          // mA
  std::vector<double> diagonal;     // siemens
  std::vector<int> row_ptr;         // CSR off-diagonals
  std::vector<int> col_index;
  std::vector<double> value;
  std::vector<char> floating;       // node id -> in a component with no pad
};

inline reduced_system build_reduced_system(const resistive_network& net) {
  const int n = net.node_count();
  std::vector<char> is_pad(n, 0);
  for (int p : net.pad_nodes) is_pad[p] = 1;

  union_find uf(n);
  for (const network_edge& e : net.edges) uf.unite(e.a, e.b);
  std::vector<char> root_has_pad(n, 0);
  for (int p : net.pad_nodes) root_has_pad[uf.find(p)] = 1;

  reduced_system sys;
  sys.floating.assign(n, 0);
  for (int id = 0; id < n; ++id)
    if (!root_has_pad[uf.find(id)]) sys.floating[id] = 1;

  for (int id = 0; id < n; ++id)
    if (net.sink_current_ma[id] != 0.0 && sys.floating[id])
      throw singular_system_error("sink node " + to_string(net.node_info(id)) +
                                  " lies in a component with no pad");

  sys.var.assign(n, -1);
  for (int id = 0; id < n; ++id)
    if (!is_pad[id] && !sys.floating[id]) sys.var[id] = sys.num_vars++;

  sys.rhs.assign(sys.num_vars, 0.0);
  for (int id = 0; id < n; ++id)
    if (sys.var[id] >= 0) sys.rhs[sys.var[id]] = net.sink_current_ma[id];

  sys.diagonal.assign(sys.num_vars, 0.0);
  std::vector<std::vector<std::pair<int, double>>> off(sys.num_vars);
  for (const network_edge& e : net.edges) {
    const int va = sys.var[e.a], vb = sys.var[e.b];
    if (va >= 0) sys.diagonal[va] += e.conductance;
    if (vb >= 0) sys.diagonal[vb] += e.conductance;
    if (va >= 0 && vb >= 0) {
      off[va].push_back({vb, -e.conductance});
      off[vb].push_back({va, -e.conductance});
    }
  }
  sys.row_ptr.assign(sys.num_vars + 1, 0);
  for (int i = 0; i < sys.num_vars; ++i)
    sys.row_ptr[i + 1] = sys.row_ptr[i] + static_cast<int>(off[i].size());
  sys.col_index.reserve(sys.row_ptr[sys.num_vars]);
  sys.value.reserve(sys.row_ptr[sys.num_vars]);
  for (int i = 0; i < sys.num_vars; ++i)
    for (auto [j, g] : off[i]) {
      sys.col_index.push_back(j);
      sys.value.push_back(g);
    }
  return sys;
}

inline std::vector<double> solve_direct(const reduced_system& sys) {
  const int nv = sys.num_vars;
  Eigen::SparseMatrix<double> a(nv, nv);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(sys.value.size() + nv);
  for (int i = 0; i < nv; ++i) {
    triplets.emplace_back(i, i, sys.diagonal[i]);
    for (int k = sys.row_ptr[i]; k < sys.row_ptr[i + 1]; ++k)
      triplets.emplace_back(i, sys.col_index[k], sys.value[k]);
  }
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a);
  if (llt.info() != Eigen::Success)
    throw singular_system_error("sparse Cholesky factorization failed");
  Eigen::VectorXd b(nv);
  for (int i = 0; i < nv; ++i) b[i] = sys.rhs[i];
  const Eigen::VectorXd x = llt.solve(b);
  if (llt.info() != Eigen::Success)
    throw singular_system_error("sparse Cholesky solve failed");
  return std::vector<double>(x.data(), x.data() + nv);
}

/// Jacobi-preconditioned conjugate gradient with a fixed accumulation order,
/// independent of the direct path so the two routes cross-validate each
/// other. Terminates when ||r|| / ||b|| <= tol.
inline std::vector<double> solve_cg(const reduced_system& sys, double tol,
                                    long long max_iterations) {
  const int nv = sys.num_vars;
  std::vector<double> x(nv, 0.0);
  double b_norm2 = 0.0;
  for (double v : sys.rhs) b_norm2 += v * v;
  if (b_norm2 == 0.0) return x;

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int i = 0; i < nv; ++i) {
      double acc = sys.diagonal[i] * in[i];
      for (int k = sys.row_ptr[i]; k < sys.row_ptr[i + 1]; ++k)
        acc += sys.value[k] * in[sys.col_index[k]];
      out[i] = acc;
    }
  };

  std::vector<double> r = sys.rhs, z(nv), p(nv), q(nv);
  for (int i = 0; i < nv; ++i) z[i] = r[i] / sys.diagonal[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < nv; ++i) rz += r[i] * z[i];

  const double threshold2 = tol * tol * b_norm2;
  for (long long iter = 0; iter < max_iterations; ++iter) {
    double r_norm2 = 0.0;
    for (double v : r) r_norm2 += v * v;
    if (r_norm2 <= threshold2) {
      // The recursively updated residual drifts below the true one; only the
      // explicit residual b - A*x may declare convergence.
      apply(x, q);
      double true_norm2 = 0.0;
      for (int i = 0; i < nv; ++i) {
        r[i] = sys.rhs[i] - q[i];
        true_norm2 += r[i] * r[i];
      }
      if (true_norm2 <= threshold2) return x;
      for (int i = 0; i < nv; ++i) z[i] = r[i] / sys.diagonal[i];
      p = z;
      rz = 0.0;
      for (int i = 0; i < nv; ++i) rz += r[i] * z[i];
      continue;
    }

    apply(p, q);
    double pq = 0.0;
    for (int i = 0; i < nv; ++i) pq += p[i] * q[i];
    if (pq <= 0.0)
      throw singular_system_error("conjugate gradient hit a non-SPD direction");
    const double alpha = rz / pq;
    for (int i = 0; i < nv; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < nv; ++i) r[i] -= alpha * q[i];
    for (int i = 0; i < nv; ++i) z[i] = r[i] / sys.diagonal[i];
    double rz_next = 0.0;
    for (int i = 0; i < nv; ++i) rz_next += r[i] * z[i];
    const double beta = rz_next / rz;
    for (int i = 0; i < nv; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_next;
  }
  throw no_convergence_error("conjugate gradient did not reach tol=" +
                             std::to_string(tol) + " within " +
                             std::to_string(max_iterations) + " iterations");
}

}  // namespace detail

/// Nodal DC solution with pads pinned at the supply voltage. Returns one
/// voltage (mV) per node. Nodes in components without a pad draw no current
/// (enforced) and are reported at the supply voltage. The conjugate-gradient
/// iteration cap is 10x the node count.
inline std::vector<double> solve_dc(const resistive_network& net,
                                    double tol = 1e-10,
                                    solve_method method = solve_method::direct) {
  const detail::reduced_system sys = detail::build_reduced_system(net);
  std::vector<double> drop;
  if (sys.num_vars > 0) {
    drop = method == solve_method::direct
               ? detail::solve_direct(sys)
               : detail::solve_cg(sys, tol, 10LL * net.node_count());
  }
  std::vector<double> voltages(net.node_count(), net.supply_mv);
  for (int id = 0; id < net.node_count(); ++id)
    if (sys.var[id] >= 0) voltages[id] = net.supply_mv - drop[sys.var[id]];
  return voltages;
}

}  // namespace gridweld
