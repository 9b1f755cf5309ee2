#pragma once

#include <cstddef>
#include <vector>

#include "sed/matrix.hpp"

namespace sed {

// Parameters of one recurrent layer. Gate weights are packed as column
// blocks of w_x (input_dim x gates*units), w_h (units x gates*units) and
// bias (gates*units), one block per gate:
//   lstm: input, forget, cell candidate, output (4 blocks)
//   gru:  update, reset, state candidate   (3 blocks)
struct RecurrentParams {
  RowMatrix w_x;
  RowMatrix w_h;
  std::vector<double> bias;
};

double sigmoid(double z);

// One step for a single sample. h, c must be sized to the unit count.
// c_new = f (.) c_prev + i (.) g,  h_new = o (.) tanh(c_new).
void lstm_cell_forward(const RecurrentParams& p, const double* x,
                       std::size_t input_dim, const double* h_prev,
                       const double* c_prev, std::size_t units, double* h_out,
                       double* c_out);

// h_new = (1-z) (.) h_prev + z (.) tanh(Wh x + Uh (r (.) h_prev) + bh);
// the reset gate scales h_prev before the candidate matmul.
void gru_cell_forward(const RecurrentParams& p, const double* x,
                      std::size_t input_dim, const double* h_prev,
                      std::size_t units, double* h_out);

}  // namespace sed
