#include "sed/models/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace sed {

namespace {

double rel_err(double analytic, double numeric) {
  const double denom =
      std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
  return std::fabs(analytic - numeric) / denom;
}

}  // namespace

GradCheckReport check_network_gradients(
    const NetworkConfig& cfg, const NetworkParams& params,
    const RowMatrix& batch, const std::vector<unsigned char>& labels,
    const std::vector<double>& sample_weights, double step) {
  NetworkParams probe = params;
  NetworkParams grads = params.zeros_like();
  network_loss_and_grad(cfg, probe, batch, labels, sample_weights, 0.0,
                        nullptr, &grads);

  GradCheckReport report;
  for (std::size_t bi = 0; bi < probe.blocks.size(); ++bi) {
    GradCheckBlock blk;
    blk.name = probe.blocks[bi].name;
    std::vector<double>& values = probe.blocks[bi].m.data;
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double saved = values[j];
      values[j] = saved + step;
      const double up = network_loss_and_grad(cfg, probe, batch, labels,
                                              sample_weights, 0.0, nullptr,
                                              nullptr);
      values[j] = saved - step;
      const double down = network_loss_and_grad(cfg, probe, batch, labels,
                                                sample_weights, 0.0, nullptr,
                                                nullptr);
      values[j] = saved;
      const double numeric = (up - down) / (2.0 * step);
      blk.max_rel_err =
          std::max(blk.max_rel_err,
                   rel_err(grads.blocks[bi].m.data[j], numeric));
    }
    report.max_rel_err = std::max(report.max_rel_err, blk.max_rel_err);
    report.blocks.push_back(blk);
  }
  return report;
}

GradCheckReport check_logreg_gradients(
    const LogRegModel& model, const RowMatrix& x,
    const std::vector<unsigned char>& y,
    const std::vector<double>& sample_weights, double inverse_reg,
    double step) {
  LogRegModel probe = model;
  std::vector<double> gw;
  double gb = 0.0;
  logreg_loss_and_grad(probe, x, y, sample_weights, inverse_reg, &gw, &gb);

  GradCheckReport report;
  GradCheckBlock wblk{"w", 0.0};
  for (std::size_t j = 0; j < probe.w.size(); ++j) {
    const double saved = probe.w[j];
    probe.w[j] = saved + step;
    const double up = logreg_loss_and_grad(probe, x, y, sample_weights,
                                           inverse_reg, nullptr, nullptr);
    probe.w[j] = saved - step;
    const double down = logreg_loss_and_grad(probe, x, y, sample_weights,
                                             inverse_reg, nullptr, nullptr);
    probe.w[j] = saved;
    wblk.max_rel_err =
        std::max(wblk.max_rel_err, rel_err(gw[j], (up - down) / (2.0 * step)));
  }
  report.blocks.push_back(wblk);

  GradCheckBlock bblk{"b", 0.0};
  const double saved = probe.b;
  probe.b = saved + step;
  const double up = logreg_loss_and_grad(probe, x, y, sample_weights,
                                         inverse_reg, nullptr, nullptr);
  probe.b = saved - step;
  const double down = logreg_loss_and_grad(probe, x, y, sample_weights,
                                           inverse_reg, nullptr, nullptr);
  probe.b = saved;
  bblk.max_rel_err = rel_err(gb, (up - down) / (2.0 * step));
  report.blocks.push_back(bblk);

  report.max_rel_err =
      std::max(wblk.max_rel_err, bblk.max_rel_err);
  return report;
}

}  // namespace sed
