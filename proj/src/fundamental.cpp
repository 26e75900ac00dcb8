#include "dislo/fundamental.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <mutex>

namespace dislo {

namespace {

using cd = std::complex<double>;

// Edge dislocation with b = e1 at unit radius, plane strain, Poisson ratio nu.
Mat2 edge_e1(double nu, double c, double s) {
  const double k = 1.0 / (2 * kPi);
  const double m = 1.0 / (2 * (1 - nu));
  const double a = (1 - 2 * nu) / (4 * (1 - nu));
  Mat2 g;
  g(0, 0) = k * (-s + s * (s * s - c * c) * m);
  g(0, 1) = k * (c + c * (c * c - s * s) * m);
  g(1, 0) = -k * (2 * a * c + 2 * m * c * s * s);
  g(1, 1) = -k * (2 * a * s - 2 * m * c * c * s);
  return g;
}

}  // namespace

FundamentalStrain::FundamentalStrain(const ElasticTensor& tensor) : tensor_(tensor) {
  if (auto lame = tensor.lame()) {
    auto [lambda, mu] = *lame;
    if (!(mu > 0) || !(lambda + mu > 0)) throw ValidationError("FundamentalStrain: tensor not positive");
    isotropic_ = true;
    nu_ = lambda / (2 * (lambda + mu));
    return;
  }
  // Q_ik = C_i1k1, R_ik = C_i1k2, T_ik = C_i2k2
  Mat2 q, r, t;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      q(i, k) = tensor(i, 0, k, 0);
      r(i, k) = tensor(i, 0, k, 1);
      t(i, k) = tensor(i, 1, k, 1);
    }
  if (std::abs(t.determinant()) < 1e-12 * (1 + t.norm()))
    throw ValidationError("FundamentalStrain: degenerate tensor");
  Mat2 ti = t.inverse();
  Eigen::Matrix4d n;
  n.topLeftCorner<2, 2>() = -ti * r.transpose();
  n.topRightCorner<2, 2>() = ti;
  n.bottomLeftCorner<2, 2>() = r * ti * r.transpose() - q;
  n.bottomRightCorner<2, 2>() = -r * ti;
  Eigen::EigenSolver<Eigen::Matrix4d> es(n);
  if (es.info() != Eigen::Success) throw SolverError("FundamentalStrain: eigen-solve failed");
  Eigen::Matrix2cd b;
  int found = 0;
  for (int i = 0; i < 4 && found < 2; ++i) {
    cd p = es.eigenvalues()(i);
    if (p.imag() <= 1e-10) continue;
    Eigen::Vector4cd v = es.eigenvectors().col(i);
    roots_[std::size_t(found)] = p;
    a_.col(found) = v.head<2>();
    b.col(found) = v.tail<2>();
    ++found;
  }
  if (found != 2) throw ValidationError("FundamentalStrain: tensor is not strongly elliptic");
  // u = (1/pi) Im[A <ln z_a> q]: jump 2 Re[A q] = b, zero resultant force 2 Re[B q] = 0.
  Eigen::Matrix4d sys;
  sys.topLeftCorner<2, 2>() = a_.real();
  sys.topRightCorner<2, 2>() = -a_.imag();
  sys.bottomLeftCorner<2, 2>() = b.real();
  sys.bottomRightCorner<2, 2>() = -b.imag();
  Eigen::FullPivLU<Eigen::Matrix4d> lu(sys);
  if (!lu.isInvertible()) throw SolverError("FundamentalStrain: near-degenerate roots, perturb the tensor");
  for (int c = 0; c < 2; ++c) {
    Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
    rhs(c) = 0.5;
    Eigen::Vector4d x = lu.solve(rhs);
    q_[std::size_t(c)] = Eigen::Vector2cd(cd(x(0), x(2)), cd(x(1), x(3)));
  }
}

Mat2 FundamentalStrain::unit_angular(int component, double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  if (isotropic_) {
    if (component == 0) return edge_e1(nu_, c, s);
    // b = e2 is e1 rotated by a quarter turn: eta(x) = Q eta_e1(Q^T x) Q^T
    Mat2 qr = rotation(kPi / 2);
    Vec2 y = qr.transpose() * Vec2(c, s);
    return qr * edge_e1(nu_, y.x(), y.y()) * qr.transpose();
  }
  const auto& q = q_[std::size_t(component)];
  Eigen::Vector2cd d1 = Eigen::Vector2cd::Zero(), d2 = Eigen::Vector2cd::Zero();
  for (int a = 0; a < 2; ++a) {
    cd z = c + roots_[std::size_t(a)] * s;
    d1 += a_.col(a) * (q(a) / z);
    d2 += a_.col(a) * (q(a) * roots_[std::size_t(a)] / z);
  }
  Mat2 g;
  g.col(0) = d1.imag() / kPi;
  g.col(1) = d2.imag() / kPi;
  return g;
}

Mat2 FundamentalStrain::angular(const Vec2& xi, double theta) const {
  Mat2 g = Mat2::Zero();
  if (xi.x() != 0) g += xi.x() * unit_angular(0, theta);
  if (xi.y() != 0) g += xi.y() * unit_angular(1, theta);
  return g;
}

Mat2 FundamentalStrain::operator()(const Vec2& xi, const Vec2& x) const {
  double r = x.norm();
  if (!(r > 0)) throw ValidationError("fundamental_strain: x must be nonzero");
  return angular(xi, std::atan2(x.y(), x.x())) / r;
}

double FundamentalStrain::prelog(const Vec2& xi, int points) const {
  double sum = 0;
  for (int k = 0; k < points; ++k) sum += tensor_.quad(angular(xi, 2 * kPi * k / points));
  return 0.5 * sum * 2 * kPi / points;
}

Mat2 fundamental_strain(const ElasticTensor& tensor, const Vec2& xi, const Vec2& x) {
  static std::mutex lock;
  static std::map<std::vector<double>, FundamentalStrain> cache;
  std::vector<double> key(tensor.matrix().data(), tensor.matrix().data() + 16);
  const FundamentalStrain* f;
  {
    std::lock_guard guard(lock);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, FundamentalStrain(tensor)).first;
    f = &it->second;
  }
  return (*f)(xi, x);
}

}  // namespace dislo
