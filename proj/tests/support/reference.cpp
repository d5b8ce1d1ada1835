#include "reference.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace ncsopt::testing {

Eigen::MatrixXd reference_states(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                                 const std::vector<Eigen::MatrixXd>& gains,
                                 const Eigen::VectorXd& x0, const std::vector<bool>& delivered) {
  const auto n = f.rows();
  const auto steps = static_cast<Eigen::Index>(delivered.size());
  Eigen::MatrixXd x(n, steps + 1);
  x.col(0) = x0;
  Eigen::VectorXd held = x0;
  Eigen::Index last = 0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    if (delivered[static_cast<std::size_t>(k)]) {
      last = k;
      held = x.col(k);
    }
    const auto rho = static_cast<std::size_t>(k - last);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(g.cols());
    for (Eigen::Index r = 0; r < g.cols(); ++r)
      for (Eigen::Index l = 0; l < n; ++l) u(r) += gains.at(rho)(r, l) * held(l);
    for (Eigen::Index i = 0; i < n; ++i) {
      double next = 0.0;
      for (Eigen::Index l = 0; l < n; ++l) next += f(i, l) * x(l, k);
      for (Eigen::Index r = 0; r < g.cols(); ++r) next += g(i, r) * u(r);
      x(i, k + 1) = next;
    }
  }
  return x;
}

std::vector<Eigen::MatrixXd> reference_phis(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                                            const std::vector<Eigen::MatrixXd>& gains) {
  const auto n = f.rows();
  const auto m = static_cast<Eigen::Index>(gains.size());
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index z = 0; z < m; ++z) {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double gk = 0.0;
        for (Eigen::Index r = 0; r < g.cols(); ++r) gk += g(i, r) * gains[static_cast<std::size_t>(z)](r, j);
        phi(i, j) = f(i, j);
        phi(i, z * n + j) += gk;
      }
    }
    for (Eigen::Index b = 1; b < m; ++b)
      for (Eigen::Index i = 0; i < n; ++i) phi(b * n + i, (b - 1) * n + i) = 1.0;
    out.push_back(phi);
  }
  return out;
}

std::vector<int> brute_force_ranks(const std::vector<std::array<double, 2>>& points) {
  auto dom = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
  };
  std::vector<int> rank(points.size(), 0);
  std::size_t assigned = 0;
  for (int front = 1; assigned < points.size(); ++front) {
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (rank[i] != 0) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
        dominated = j != i && rank[j] == 0 && dom(points[j], points[i]);
      }
      if (!dominated) current.push_back(i);
    }
    for (std::size_t i : current) rank[i] = front;
    assigned += current.size();
  }
  return rank;
}

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("ncsopt_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ncsopt::testing
