#include "sed/models/logreg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>

#include "sed/error.hpp"
#include "sed/models/cells.hpp"

namespace sed {

namespace {

using Vec = Eigen::VectorXd;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>;

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

double logreg_loss_and_grad(const LogRegModel& m, const RowMatrix& x,
                            const std::vector<unsigned char>& y,
                            const std::vector<double>& sample_weights,
                            double inverse_reg, std::vector<double>* grad_w,
                            double* grad_b) {
  if (x.rows == 0) throw ValidationError("empty training set");
  if (m.w.size() != x.cols)
    throw ValidationError("weight vector does not match feature width");
  if (y.size() != x.rows || sample_weights.size() != x.rows)
    throw ValidationError("labels/weights do not match the sample count");
  if (inverse_reg <= 0.0)
    throw ConfigError("inverse regularization strength must be positive");

  Eigen::Map<const RMat> xm(x.data.data(), static_cast<Eigen::Index>(x.rows),
                            static_cast<Eigen::Index>(x.cols));
  Eigen::Map<const Vec> wm(m.w.data(), static_cast<Eigen::Index>(m.w.size()));

  Vec z = xm * wm;
  z.array() += m.b;

  double weight_mass = 0.0;
  double data_loss = 0.0;
  Vec dz(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const double sw = sample_weights[idx];
    const double yi = y[idx] ? 1.0 : 0.0;
    weight_mass += sw;
    data_loss += sw * (softplus(z[i]) - yi * z[i]);
    dz[i] = sw * (sigmoid(z[i]) - yi);
  }
  if (weight_mass <= 0.0)
    throw ValidationError("sample weights must have positive mass");

  const double reg = wm.squaredNorm() / (2.0 * inverse_reg);
  const double loss = (data_loss + reg) / weight_mass;

  if (grad_w) {
    grad_w->resize(m.w.size());
    Eigen::Map<Vec> gm(grad_w->data(),
                       static_cast<Eigen::Index>(grad_w->size()));
    gm = (xm.transpose() * dz + wm / inverse_reg) / weight_mass;
  }
  if (grad_b) *grad_b = dz.sum() / weight_mass;
  return loss;
}

LogRegModel train_logreg(const RowMatrix& x,
                         const std::vector<unsigned char>& y,
                         const LogRegConfig& cfg, LogRegReport* report) {
  if (cfg.class_weights.size() != 2)
    throw ConfigError("expected one class weight per class");

  std::vector<double> sw(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    sw[i] = cfg.class_weights[y[i] ? 1 : 0];

  const std::size_t dim = x.cols;
  LogRegModel model;
  model.w.assign(dim, 0.0);
  model.b = 0.0;

  // theta = [w; b] flattened for the quasi-Newton machinery.
  auto eval = [&](const Vec& theta, Vec& grad) {
    LogRegModel probe;
    probe.w.assign(theta.data(), theta.data() + dim);
    probe.b = theta[static_cast<Eigen::Index>(dim)];
    std::vector<double> gw;
    double gb = 0.0;
    const double loss =
        logreg_loss_and_grad(probe, x, y, sw, cfg.inverse_reg, &gw, &gb);
    grad.resize(static_cast<Eigen::Index>(dim) + 1);
    for (std::size_t j = 0; j < dim; ++j)
      grad[static_cast<Eigen::Index>(j)] = gw[j];
    grad[static_cast<Eigen::Index>(dim)] = gb;
    return loss;
  };

  Vec theta = Vec::Zero(static_cast<Eigen::Index>(dim) + 1);
  Vec grad;
  double loss = eval(theta, grad);

  std::deque<Vec> s_hist, y_hist;
  std::deque<double> rho_hist;

  LogRegReport rep;
  std::size_t iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    rep.grad_norm = grad.norm();
    if (rep.grad_norm <= cfg.grad_tol) {
      rep.converged = true;
      break;
    }

    // Two-loop recursion for the search direction.
    Vec q = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma = s_hist.back().dot(y_hist.back()) /
                           y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += s_hist[i] * (alpha[i] - beta);
    }
    Vec dir = -q;

    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      // Not a descent direction; drop the memory and fall back to the
      // gradient.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -grad;
      slope = grad.dot(dir);
    }

    // Backtracking line search with the sufficient-decrease condition.
    const double c1 = 1e-4;
    double step = 1.0;
    Vec theta_new;
    Vec grad_new;
    double loss_new = loss;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      theta_new = theta + step * dir;
      loss_new = eval(theta_new, grad_new);
      if (std::isfinite(loss_new) && loss_new <= loss + c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step too small to make progress

    const Vec s = theta_new - theta;
    const Vec yv = grad_new - grad;
    const double sy = s.dot(yv);
    if (sy > 1e-10) {
      s_hist.push_back(s);
      y_hist.push_back(yv);
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > cfg.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    theta = theta_new;
    grad = grad_new;
    loss = loss_new;
  }

  rep.iterations = iter;
  rep.final_loss = loss;
  rep.grad_norm = grad.norm();
  if (report) *report = rep;

  model.w.assign(theta.data(), theta.data() + dim);
  model.b = theta[static_cast<Eigen::Index>(dim)];
  return model;
}

double logreg_score(const LogRegModel& m, const std::vector<double>& x) {
  if (x.size() != m.w.size())
    throw ValidationError("feature vector does not match weight width");
  double z = m.b;
  for (std::size_t i = 0; i < x.size(); ++i) z += m.w[i] * x[i];
  return sigmoid(z);
}

}  // namespace sed
