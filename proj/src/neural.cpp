#include "eqrl/neural.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace eqrl {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'E', 'Q', 'R', 'L', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

}  // namespace

std::size_t parameter_count(const std::vector<int>& sizes) {
  std::size_t n = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    n += static_cast<std::size_t>(sizes[l]) * static_cast<std::size_t>(sizes[l - 1]) + static_cast<std::size_t>(sizes[l]);
  }
  return n;
}

Mlp::Mlp(std::vector<int> sizes, std::uint64_t seed) : sizes_(std::move(sizes)), seed_(seed) {
  if (sizes_.size() < 2) throw std::invalid_argument("a network needs at least two layer sizes");
  std::mt19937_64 rng(seed);
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    const int out = sizes_[l], in = sizes_[l - 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::MatrixXd W(out, in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) W(i, j) = dist(rng);
    }
    W_.push_back(std::move(W));
    b_.push_back(Eigen::VectorXd::Zero(out));
    vW_.push_back(Eigen::MatrixXd::Zero(out, in));
    vb_.push_back(Eigen::VectorXd::Zero(out));
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_size()) throw std::invalid_argument("input size mismatch");
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::VectorXd z = W_[l] * a + b_[l];
    a = l + 1 < W_.size() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& X) const {
  if (X.rows() != input_size()) throw std::invalid_argument("input size mismatch");
  Eigen::MatrixXd a = X;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::MatrixXd z = W_[l] * a;
    z.colwise() += b_[l];
    a = l + 1 < W_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Mlp::Gradient Mlp::gradient(const Eigen::MatrixXd& X, const std::vector<int>& actions,
                            const Eigen::VectorXd& targets) const {
  const Eigen::Index B = X.cols();
  if (B == 0 || static_cast<Eigen::Index>(actions.size()) != B || targets.size() != B) {
    throw std::invalid_argument("batch shape mismatch");
  }
  const std::size_t L = W_.size();
  std::vector<Eigen::MatrixXd> acts{X};
  std::vector<Eigen::MatrixXd> pre;
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd z = W_[l] * acts.back();
    z.colwise() += b_[l];
    pre.push_back(z);
    acts.push_back(l + 1 < L ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z);
  }
  Gradient g;
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(output_size(), B);
  for (Eigen::Index i = 0; i < B; ++i) {
    double r = acts.back()(actions[i], i) - targets(i);
    g.loss += r * r;
    delta(actions[i], i) = 2.0 * r / static_cast<double>(B);
  }
  g.loss /= static_cast<double>(B);
  if (!std::isfinite(g.loss)) throw NonFiniteError("non-finite loss");
  g.dW.resize(L);
  g.db.resize(L);
  for (std::size_t l = L; l-- > 0;) {
    g.dW[l] = delta * acts[l].transpose();
    g.db[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = W_[l].transpose() * delta;
      delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

void Mlp::apply(const Gradient& g, double eta, double mu) {
  for (std::size_t l = 0; l < W_.size(); ++l) {
    vW_[l] = mu * vW_[l] + g.dW[l];
    vb_[l] = mu * vb_[l] + g.db[l];
    W_[l] -= eta * vW_[l];
    b_[l] -= eta * vb_[l];
  }
}

double Mlp::train_step(const Eigen::MatrixXd& X, const std::vector<int>& actions, const Eigen::VectorXd& targets,
                       double eta, double mu) {
  Gradient g = gradient(X, actions, targets);
  for (std::size_t l = 0; l < W_.size(); ++l) {
    if (!g.dW[l].allFinite() || !g.db[l].allFinite()) throw NonFiniteError("non-finite gradient");
  }
  apply(g, eta, mu);
  return g.loss;
}

void Mlp::blend_from(const Mlp& online, double eps) {
  if (sizes_ != online.sizes_) throw std::invalid_argument("blend between different shapes");
  if (eps == 1.0) {
    W_ = online.W_;
    b_ = online.b_;
    return;
  }
  for (std::size_t l = 0; l < W_.size(); ++l) {
    W_[l] = (1.0 - eps) * W_[l] + eps * online.W_[l];
    b_[l] = (1.0 - eps) * b_[l] + eps * online.b_[l];
  }
}

bool Mlp::bitwise_equal(const Mlp& o) const {
  if (sizes_ != o.sizes_) return false;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    if (std::memcmp(W_[l].data(), o.W_[l].data(), sizeof(double) * W_[l].size()) != 0) return false;
    if (std::memcmp(b_[l].data(), o.b_[l].data(), sizeof(double) * b_[l].size()) != 0) return false;
  }
  return true;
}

void Mlp::save(const std::string& path, std::uint64_t epoch) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(sizes_.size()));
  for (int s : sizes_) put<std::uint32_t>(os, static_cast<std::uint32_t>(s));
  put<std::uint64_t>(os, seed_);
  put<std::uint64_t>(os, epoch);
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = W_[l];
    os.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
    os.write(reinterpret_cast<const char*>(b_[l].data()), static_cast<std::streamsize>(sizeof(double) * b_[l].size()));
  }
  if (!os) throw std::runtime_error("failed writing " + path);
}

Mlp Mlp::load(const std::string& path, std::uint64_t* epoch) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw std::runtime_error(path + " is not a network checkpoint");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported checkpoint version");
  auto n = get<std::uint32_t>(is);
  if (n < 2 || n > 64) throw std::runtime_error("corrupt checkpoint header");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < n; ++i) sizes.push_back(static_cast<int>(get<std::uint32_t>(is)));
  Mlp m;
  m.sizes_ = sizes;
  m.seed_ = get<std::uint64_t>(is);
  auto ep = get<std::uint64_t>(is);
  if (epoch) *epoch = ep;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(sizes[l], sizes[l - 1]);
    is.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
    Eigen::VectorXd b(sizes[l]);
    is.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(sizeof(double) * b.size()));
    if (!is) throw std::runtime_error("truncated checkpoint");
    m.W_.push_back(rm);
    m.b_.push_back(b);
    m.vW_.push_back(Eigen::MatrixXd::Zero(sizes[l], sizes[l - 1]));
    m.vb_.push_back(Eigen::VectorXd::Zero(sizes[l]));
  }
  return m;
}

}  // namespace eqrl
