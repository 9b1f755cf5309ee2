#include "sed/models/cells.hpp"

#include <cmath>

#include "sed/error.hpp"

namespace sed {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// a[j] = x . w_x[:, j] + h_prev . w_h[:, j] + bias[j] for all gate columns.
void gate_preactivations(const RecurrentParams& p, const double* x,
                         std::size_t input_dim, const double* h_prev,
                         std::size_t units, std::size_t gates,
                         std::vector<double>& a) {
  const std::size_t width = gates * units;
  if (p.w_x.rows != input_dim || p.w_x.cols != width ||
      p.w_h.rows != units || p.w_h.cols != width || p.bias.size() != width)
    throw ConfigError("recurrent parameter shapes do not match layer size");

  a.assign(p.bias.begin(), p.bias.end());
  for (std::size_t r = 0; r < input_dim; ++r) {
    const double xv = x[r];
    const double* wrow = p.w_x.row(r);
    for (std::size_t j = 0; j < width; ++j) a[j] += xv * wrow[j];
  }
  for (std::size_t r = 0; r < units; ++r) {
    const double hv = h_prev[r];
    const double* wrow = p.w_h.row(r);
    for (std::size_t j = 0; j < width; ++j) a[j] += hv * wrow[j];
  }
}

}  // namespace

void lstm_cell_forward(const RecurrentParams& p, const double* x,
                       std::size_t input_dim, const double* h_prev,
                       const double* c_prev, std::size_t units, double* h_out,
                       double* c_out) {
  std::vector<double> a;
  gate_preactivations(p, x, input_dim, h_prev, units, 4, a);
  for (std::size_t u = 0; u < units; ++u) {
    const double i = sigmoid(a[u]);
    const double f = sigmoid(a[units + u]);
    const double g = std::tanh(a[2 * units + u]);
    const double o = sigmoid(a[3 * units + u]);
    const double c = f * c_prev[u] + i * g;
    c_out[u] = c;
    h_out[u] = o * std::tanh(c);
  }
}

void gru_cell_forward(const RecurrentParams& p, const double* x,
                      std::size_t input_dim, const double* h_prev,
                      std::size_t units, double* h_out) {
  const std::size_t width = 3 * units;
  if (p.w_x.rows != input_dim || p.w_x.cols != width ||
      p.w_h.rows != units || p.w_h.cols != width || p.bias.size() != width)
    throw ConfigError("recurrent parameter shapes do not match layer size");

  // Update and reset come straight from x and h_prev.
  std::vector<double> a(p.bias.begin(), p.bias.begin() + 2 * units);
  for (std::size_t r = 0; r < input_dim; ++r) {
    const double xv = x[r];
    const double* wrow = p.w_x.row(r);
    for (std::size_t j = 0; j < 2 * units; ++j) a[j] += xv * wrow[j];
  }
  for (std::size_t r = 0; r < units; ++r) {
    const double hv = h_prev[r];
    const double* wrow = p.w_h.row(r);
    for (std::size_t j = 0; j < 2 * units; ++j) a[j] += hv * wrow[j];
  }

  std::vector<double> z(units), rgate(units);
  for (std::size_t u = 0; u < units; ++u) {
    z[u] = sigmoid(a[u]);
    rgate[u] = sigmoid(a[units + u]);
  }

  // Candidate uses the reset-scaled previous state.
  std::vector<double> ah(p.bias.begin() + 2 * units, p.bias.end());
  for (std::size_t r = 0; r < input_dim; ++r) {
    const double xv = x[r];
    const double* wrow = p.w_x.row(r);
    for (std::size_t j = 0; j < units; ++j) ah[j] += xv * wrow[2 * units + j];
  }
  for (std::size_t r = 0; r < units; ++r) {
    const double hv = rgate[r] * h_prev[r];
    const double* wrow = p.w_h.row(r);
    for (std::size_t j = 0; j < units; ++j) ah[j] += hv * wrow[2 * units + j];
  }

  for (std::size_t u = 0; u < units; ++u) {
    const double cand = std::tanh(ah[u]);
    h_out[u] = (1.0 - z[u]) * h_prev[u] + z[u] * cand;
  }
}

}  // namespace sed
