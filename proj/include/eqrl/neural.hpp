#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqrl {

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::size_t parameter_count(const std::vector<int>& sizes);

// Fully connected net: ReLU on hidden layers, linear output.
class Mlp {
 public:
  Mlp() = default;
  // Weights uniform in +-1/sqrt(fan_in), biases zero.
  Mlp(std::vector<int> sizes, std::uint64_t seed);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t parameter_count() const { return eqrl::parameter_count(sizes_); }
  std::uint64_t seed() const { return seed_; }

  std::vector<Eigen::MatrixXd>& weights() { return W_; }
  std::vector<Eigen::VectorXd>& biases() { return b_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return W_; }
  const std::vector<Eigen::VectorXd>& biases() const { return b_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  // Columns of X are samples.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& X) const;

  struct Gradient {
    std::vector<Eigen::MatrixXd> dW;
    std::vector<Eigen::VectorXd> db;
    double loss = 0.0;
  };
  // Mean over the batch of ([f(x_i)]_{a_i} - y_i)^2 and its gradient.
  Gradient gradient(const Eigen::MatrixXd& X, const std::vector<int>& actions, const Eigen::VectorXd& targets) const;
  // v <- mu v + g, theta <- theta - eta v. Returns the loss before the update.
  double train_step(const Eigen::MatrixXd& X, const std::vector<int>& actions, const Eigen::VectorXd& targets,
                    double eta, double mu);
  void apply(const Gradient& g, double eta, double mu);

  // theta_hat <- (1 - eps) theta_hat + eps theta.
  void blend_from(const Mlp& online, double eps);

  bool bitwise_equal(const Mlp& o) const;

  // Header (magic, version, sizes, seed, epoch) then little-endian doubles,
  // layer by layer: weights row-major (out x in), then biases.
  void save(const std::string& path, std::uint64_t epoch) const;
  static Mlp load(const std::string& path, std::uint64_t* epoch = nullptr);

 private:
  std::vector<int> sizes_;
  std::uint64_t seed_ = 0;
  std::vector<Eigen::MatrixXd> W_;
  std::vector<Eigen::VectorXd> b_;
  std::vector<Eigen::MatrixXd> vW_;
  std::vector<Eigen::VectorXd> vb_;
};

}  // namespace eqrl
