#include "tbgeo/manifold.hpp"

#include <sstream>

namespace tbgeo {

Eigen::VectorXd christoffel_contract(const ChristoffelSymbols& gamma,
                                     const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = static_cast<Eigen::Index>(gamma.size());
  Eigen::VectorXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out[k] = a.dot(gamma[k] * b);
  return out;
}

Eigen::MatrixXd christoffel_fiber_matrix(const ChristoffelSymbols& gamma,
                                         const Eigen::VectorXd& u) {
  const auto n = static_cast<Eigen::Index>(gamma.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index k = 0; k < n; ++k) c.row(k) = (gamma[k] * u).transpose();
  return c;
}

VectorField constant_field(const Eigen::VectorXd& value) {
  const auto n = value.size();
  return VectorField{
      [value](const Eigen::VectorXd&) { return value; },
      [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n).eval(); }};
}

ChartManifold::ChartManifold(int dim, Box domain, MetricFn metric, FdConfig fd)
    : dim_(dim), domain_(std::move(domain)), metric_fn_(std::move(metric)), fd_(fd) {
  if (dim_ <= 0) throw DimensionError("ChartManifold: dimension must be positive");
  if (domain_.lo.size() != dim_ || domain_.hi.size() != dim_)
    throw DimensionError("ChartManifold: domain box dimension mismatch");
}

ChartManifold& ChartManifold::with_christoffel(ChristoffelFn fn) {
  christoffel_fn_ = std::move(fn);
  return *this;
}

ChartManifold& ChartManifold::with_curvature(CurvatureFn fn) {
  curvature_fn_ = std::move(fn);
  return *this;
}

void ChartManifold::require_in_domain(const ChartPoint& p) const {
  require_dim(p, "point");
  if (!domain_.contains(p)) {
    std::ostringstream os;
    os << "point outside chart domain: [" << p.transpose() << "]";
    throw DomainError(os.str());
  }
}

void ChartManifold::require_dim(const Eigen::VectorXd& v, const char* what) const {
  if (v.size() != dim_) {
    std::ostringstream os;
    os << what << " has dimension " << v.size() << ", manifold dimension is " << dim_;
    throw DimensionError(os.str());
  }
}

Eigen::MatrixXd ChartManifold::metric(const ChartPoint& p) const {
  require_in_domain(p);
  Eigen::MatrixXd g = metric_fn_(p);
  if (g.rows() != dim_ || g.cols() != dim_)
    throw DimensionError("metric_fn returned a matrix of wrong size");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NumericalError("metric_fn output is not symmetric");
  return 0.5 * (g + g.transpose());
}

double ChartManifold::metric_eval(const ChartPoint& p, const TangentVector& v,
                                  const TangentVector& w) const {
  require_dim(v, "first tangent vector");
  require_dim(w, "second tangent vector");
  return v.dot(metric(p) * w);
}

ChristoffelSymbols ChartManifold::christoffel(const ChartPoint& p) const {
  if (christoffel_fn_) {
    require_in_domain(p);
    return christoffel_fn_(p);
  }
  return christoffel_from_metric(p);
}

ChristoffelSymbols ChartManifold::christoffel_fd(const ChartPoint& p) const {
  return christoffel_from_metric(p);
}

ChristoffelSymbols ChartManifold::christoffel_from_metric(const ChartPoint& p) const {
  const Eigen::MatrixXd g = metric(p);
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw NumericalError("christoffel: metric matrix is singular or not positive definite");
  const Eigen::MatrixXd ginv = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));

  // dg[i](j,l) = ∂_i g_{jl}
  std::vector<Eigen::MatrixXd> dg(dim_);
  ChartPoint q = p;
  for (int i = 0; i < dim_; ++i) {
    const double h = scaled_step(fd_.step, p[i]);
    q[i] = p[i] + h;
    const Eigen::MatrixXd gp = metric(q);
    q[i] = p[i] - h;
    const Eigen::MatrixXd gm = metric(q);
    q[i] = p[i];
    dg[i] = (gp - gm) / (2.0 * h);
    if (!dg[i].allFinite()) throw NumericalError("christoffel: non-finite metric derivative");
  }

  ChristoffelSymbols gamma(dim_, Eigen::MatrixXd::Zero(dim_, dim_));
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) {
        double s = 0.0;
        for (int l = 0; l < dim_; ++l)
          s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * s;
        gamma[k](j, i) = gamma[k](i, j);
      }
  return gamma;
}

Eigen::MatrixXd ChartManifold::field_jacobian(const VectorField& f, const ChartPoint& p) const {
  if (f.jacobian) return f.jacobian(p);
  return fd_jacobian(f.eval, p, fd_.step);
}

TangentVector ChartManifold::covariant_derivative(const VectorField& X, const VectorField& Y,
                                                  const ChartPoint& p) const {
  require_in_domain(p);
  const Eigen::VectorXd xv = X(p);
  const Eigen::VectorXd yv = Y(p);
  require_dim(xv, "direction field value");
  require_dim(yv, "field value");
  const Eigen::MatrixXd jy = field_jacobian(Y, p);
  return jy * xv + christoffel_contract(christoffel(p), xv, yv);
}

TangentVector ChartManifold::curvature(const TangentVector& x, const TangentVector& y,
                                       const TangentVector& z, const ChartPoint& p) const {
  if (curvature_fn_) {
    require_in_domain(p);
    return curvature_fn_(p, x, y, z);
  }
  return curvature_fd(x, y, z, p);
}

TangentVector ChartManifold::curvature_fd(const TangentVector& x, const TangentVector& y,
                                          const TangentVector& z, const ChartPoint& p) const {
  require_in_domain(p);
  require_dim(x, "curvature argument x");
  require_dim(y, "curvature argument y");
  require_dim(z, "curvature argument z");

  const ChristoffelSymbols gamma = christoffel(p);
  // Differentiating analytic symbols tolerates the tight step; differentiating
  // FD symbols needs the wider one to stay above their noise floor.
  const double h0 = christoffel_fn_ ? fd_.step : fd_.nested_step;

  // dgamma[i][k](j,l) = ∂_i Γ^k_{jl}
  std::vector<ChristoffelSymbols> dgamma(dim_);
  ChartPoint q = p;
  for (int i = 0; i < dim_; ++i) {
    const double h = scaled_step(h0, p[i]);
    q[i] = p[i] + h;
    const ChristoffelSymbols gp = christoffel(q);
    q[i] = p[i] - h;
    const ChristoffelSymbols gm = christoffel(q);
    q[i] = p[i];
    dgamma[i].resize(dim_);
    for (int k = 0; k < dim_; ++k) {
      dgamma[i][k] = (gp[k] - gm[k]) / (2.0 * h);
      if (!dgamma[i][k].allFinite())
        throw NumericalError("curvature: non-finite Christoffel derivative");
    }
  }

  // R^k_{lij} = ∂_i Γ^k_{jl} − ∂_j Γ^k_{il} + Γ^k_{im} Γ^m_{jl} − Γ^k_{jm} Γ^m_{il}
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const double xy = x[i] * y[j];
        if (xy == 0.0) continue;
        for (int l = 0; l < dim_; ++l) {
          double r = dgamma[i][k](j, l) - dgamma[j][k](i, l);
          for (int m = 0; m < dim_; ++m)
            r += gamma[k](i, m) * gamma[m](j, l) - gamma[k](j, m) * gamma[m](i, l);
          acc += r * xy * z[l];
        }
      }
    out[k] = acc;
  }
  return out;
}

double ChartManifold::koszul_rhs(const VectorField& X, const VectorField& Y,
                                 const VectorField& Z, const ChartPoint& p) const {
  require_in_domain(p);

  auto pairing = [this](const VectorField& A, const VectorField& B) {
    return [this, &A, &B](const Eigen::VectorXd& q) { return metric_eval(q, A(q), B(q)); };
  };
  auto derive_along = [this, &p](const std::function<double(const Eigen::VectorXd&)>& s,
                                 const Eigen::VectorXd& dir) {
    return fd_gradient(s, p, fd_.step).dot(dir);
  };

  const Eigen::VectorXd xv = X(p), yv = Y(p), zv = Z(p);
  const Eigen::VectorXd bxy = lie_bracket(X, Y, p, fd_);
  const Eigen::VectorXd bxz = lie_bracket(X, Z, p, fd_);
  const Eigen::VectorXd byz = lie_bracket(Y, Z, p, fd_);

  return derive_along(pairing(Y, Z), xv) + derive_along(pairing(X, Z), yv) -
         derive_along(pairing(X, Y), zv) + metric_eval(p, bxy, zv) -
         metric_eval(p, bxz, yv) - metric_eval(p, byz, xv);
}

Eigen::VectorXd lie_bracket(const VectorField& X, const VectorField& Y,
                            const ChartPoint& p, const FdConfig& fd) {
  const Eigen::MatrixXd jx = X.jacobian ? X.jacobian(p) : fd_jacobian(X.eval, p, fd.step);
  const Eigen::MatrixXd jy = Y.jacobian ? Y.jacobian(p) : fd_jacobian(Y.eval, p, fd.step);
  Eigen::VectorXd out = jy * X(p) - jx * Y(p);
  if (!out.allFinite()) throw NumericalError("lie_bracket: non-finite derivative estimate");
  return out;
}

} // namespace tbgeo
