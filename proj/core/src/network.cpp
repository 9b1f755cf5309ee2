#include "sed/models/network.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "sed/error.hpp"
#include "sed/models/cells.hpp"

namespace sed {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                          Eigen::RowMajor>;
using ConstMap = Eigen::Map<const Mat>;
using MutMap = Eigen::Map<Mat>;

ConstMap cmap(const ParamBlock& b) {
  return ConstMap(b.m.data.data(), static_cast<Eigen::Index>(b.m.rows),
                  static_cast<Eigen::Index>(b.m.cols));
}

MutMap mmap(ParamBlock& b) {
  return MutMap(b.m.data.data(), static_cast<Eigen::Index>(b.m.rows),
                static_cast<Eigen::Index>(b.m.cols));
}

Mat sigmoid_mat(const Mat& z) {
  Mat out(z.rows(), z.cols());
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < z.cols(); ++c) out(r, c) = sigmoid(z(r, c));
  }
  return out;
}

std::size_t gate_count(ModelKind kind) {
  return kind == ModelKind::kLstm ? 4 : 3;
}

// Inverted-dropout mask: entries are 0 or 1/(1-rate), drawn row-major.
Mat draw_mask(Rng& rng, Eigen::Index rows, Eigen::Index cols, double rate) {
  Mat m(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = rng.uniform() < rate ? 0.0 : keep_scale;
  return m;
}

struct LstmCache {
  std::vector<Mat> x, h_prev, c_prev, i, f, g, o, c;
};

struct GruCache {
  std::vector<Mat> x, h_prev, z, r, rh, hc;
};

// One batched lstm step; returns h and c via out-params, optionally caching.
void lstm_step(const ParamBlock& wx, const ParamBlock& wh,
               const ParamBlock& bias, const Mat& x, Mat& h, Mat& c,
               LstmCache* cache) {
  const Eigen::Index units = static_cast<Eigen::Index>(wh.m.rows);
  Mat a = x * cmap(wx) + h * cmap(wh);
  a.rowwise() += cmap(bias).row(0);

  Mat gi = sigmoid_mat(a.leftCols(units));
  Mat gf = sigmoid_mat(a.middleCols(units, units));
  Mat gg = a.middleCols(2 * units, units).array().tanh().matrix();
  Mat go = sigmoid_mat(a.rightCols(units));

  if (cache) {
    cache->x.push_back(x);
    cache->h_prev.push_back(h);
    cache->c_prev.push_back(c);
  }
  c = (gf.array() * c.array() + gi.array() * gg.array()).matrix();
  h = (go.array() * c.array().tanh()).matrix();
  if (cache) {
    cache->i.push_back(gi);
    cache->f.push_back(gf);
    cache->g.push_back(gg);
    cache->o.push_back(go);
    cache->c.push_back(c);
  }
}

void gru_step(const ParamBlock& wx, const ParamBlock& wh,
              const ParamBlock& bias, const Mat& x, Mat& h, GruCache* cache) {
  const Eigen::Index units = static_cast<Eigen::Index>(wh.m.rows);
  ConstMap wxm = cmap(wx), whm = cmap(wh), bm = cmap(bias);

  Mat a2 = x * wxm.leftCols(2 * units) + h * whm.leftCols(2 * units);
  a2.rowwise() += bm.row(0).leftCols(2 * units);
  Mat z = sigmoid_mat(a2.leftCols(units));
  Mat r = sigmoid_mat(a2.rightCols(units));

  Mat rh = (r.array() * h.array()).matrix();
  Mat ah = x * wxm.rightCols(units) + rh * whm.rightCols(units);
  ah.rowwise() += bm.row(0).rightCols(units);
  Mat hc = ah.array().tanh().matrix();

  if (cache) {
    cache->x.push_back(x);
    cache->h_prev.push_back(h);
    cache->z.push_back(z);
    cache->r.push_back(r);
    cache->rh.push_back(rh);
    cache->hc.push_back(hc);
  }
  h = ((1.0 - z.array()) * h.array() + z.array() * hc.array()).matrix();
}

// Backbone output: pre-activation features of the classifier head, one row
// per sample. Caches are filled only when training.
struct BackboneCaches {
  // recurrent
  LstmCache lstm1, lstm2;
  GruCache gru1, gru2;
  std::vector<Mat> feed2;      // dropped layer-1 outputs per frame
  std::vector<Mat> mask_in;    // input masks per frame
  std::vector<Mat> mask_mid;   // layer-1 -> layer-2 masks per frame
  // feed-forward
  Mat dnn_in, dnn_z1, dnn_a1d;
  Mat dnn_mask_in, dnn_mask_mid;
};

Mat backbone_forward(const NetworkConfig& cfg, const NetworkParams& params,
                     const RowMatrix& batch, double dropout_rate, Rng* rng,
                     BackboneCaches* cache) {
  const Eigen::Index n = static_cast<Eigen::Index>(batch.rows);
  ConstMap x_all(batch.data.data(), n,
                 static_cast<Eigen::Index>(batch.cols));
  const bool drop = dropout_rate > 0.0 && rng != nullptr;

  if (cfg.kind == ModelKind::kDnn) {
    const ParamBlock& w1 = params.at("dense1.w");
    const ParamBlock& b1 = params.at("dense1.b");
    const ParamBlock& w2 = params.at("dense2.w");
    const ParamBlock& b2 = params.at("dense2.b");

    Mat in = x_all;
    if (drop) {
      Mat m = draw_mask(*rng, in.rows(), in.cols(), dropout_rate);
      in = (in.array() * m.array()).matrix();
      if (cache) cache->dnn_mask_in = std::move(m);
    }
    Mat z1 = in * cmap(w1);
    z1.rowwise() += cmap(b1).row(0);
    Mat a1 = z1.cwiseMax(0.0);
    if (drop) {
      Mat m = draw_mask(*rng, a1.rows(), a1.cols(), dropout_rate);
      a1 = (a1.array() * m.array()).matrix();
      if (cache) cache->dnn_mask_mid = std::move(m);
    }
    Mat z2 = a1 * cmap(w2);
    z2.rowwise() += cmap(b2).row(0);
    if (cache) {
      cache->dnn_in = std::move(in);
      cache->dnn_z1 = std::move(z1);
      cache->dnn_a1d = std::move(a1);
    }
    return z2;
  }

  // Recurrent backbones. Frames are consumed in order; the hidden chains are
  // never masked, only the frame inputs and the layer-1 -> layer-2 feed.
  const ParamBlock& wx1 = params.at("rnn1.wx");
  const ParamBlock& wh1 = params.at("rnn1.wh");
  const ParamBlock& bb1 = params.at("rnn1.b");
  const ParamBlock& wx2 = params.at("rnn2.wx");
  const ParamBlock& wh2 = params.at("rnn2.wh");
  const ParamBlock& bb2 = params.at("rnn2.b");

  const Eigen::Index d = static_cast<Eigen::Index>(cfg.frame_dim);
  const Eigen::Index h1n = static_cast<Eigen::Index>(cfg.hidden1);
  const Eigen::Index h2n = static_cast<Eigen::Index>(cfg.hidden2);

  Mat h1 = Mat::Zero(n, h1n), c1 = Mat::Zero(n, h1n);
  Mat h2 = Mat::Zero(n, h2n), c2 = Mat::Zero(n, h2n);

  for (std::size_t t = 0; t < cfg.frames; ++t) {
    Mat xt = x_all.middleCols(static_cast<Eigen::Index>(t) * d, d);
    if (drop) {
      Mat m = draw_mask(*rng, n, d, dropout_rate);
      xt = (xt.array() * m.array()).matrix();
      if (cache) cache->mask_in.push_back(std::move(m));
    }
    if (cfg.kind == ModelKind::kLstm) {
      lstm_step(wx1, wh1, bb1, xt, h1, c1, cache ? &cache->lstm1 : nullptr);
    } else {
      gru_step(wx1, wh1, bb1, xt, h1, cache ? &cache->gru1 : nullptr);
    }

    Mat feed = h1;
    if (drop) {
      Mat m = draw_mask(*rng, n, h1n, dropout_rate);
      feed = (feed.array() * m.array()).matrix();
      if (cache) cache->mask_mid.push_back(std::move(m));
    }
    if (cache) cache->feed2.push_back(feed);
    if (cfg.kind == ModelKind::kLstm) {
      lstm_step(wx2, wh2, bb2, feed, h2, c2, cache ? &cache->lstm2 : nullptr);
    } else {
      gru_step(wx2, wh2, bb2, feed, h2, cache ? &cache->gru2 : nullptr);
    }
  }
  return h2;
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kDnn: return "dnn";
    case ModelKind::kGru: return "gru";
    case ModelKind::kLstm: return "lstm";
  }
  throw ConfigError("unknown model kind");
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "logreg") return ModelKind::kLogReg;
  if (name == "dnn") return ModelKind::kDnn;
  if (name == "gru") return ModelKind::kGru;
  if (name == "lstm") return ModelKind::kLstm;
  throw ValidationError("unknown model kind: " + name);
}

void NetworkConfig::validate() const {
  if (frames == 0 || frame_dim == 0)
    throw ConfigError("network needs at least one frame and one feature");
  if (hidden1 == 0 || hidden2 == 0)
    throw ConfigError("hidden sizes must be positive");
  if (classes != 2)
    throw ConfigError("the classifier head is binary");
  if (kind == ModelKind::kLogReg)
    throw ConfigError("the linear model does not use the network path");
}

ParamBlock& NetworkParams::at(const std::string& name) {
  for (ParamBlock& b : blocks)
    if (b.name == name) return b;
  throw ConfigError("missing parameter block: " + name);
}

const ParamBlock& NetworkParams::at(const std::string& name) const {
  for (const ParamBlock& b : blocks)
    if (b.name == name) return b;
  throw ConfigError("missing parameter block: " + name);
}

std::size_t NetworkParams::total_size() const {
  std::size_t n = 0;
  for (const ParamBlock& b : blocks) n += b.m.size();
  return n;
}

NetworkParams NetworkParams::zeros_like() const {
  NetworkParams z;
  z.blocks.reserve(blocks.size());
  for (const ParamBlock& b : blocks)
    z.blocks.push_back({b.name, RowMatrix(b.m.rows, b.m.cols, 0.0)});
  return z;
}

NetworkParams init_network(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(Rng::derive(seed, 0x696e6974));  // distinct init stream

  NetworkParams p;
  auto weight = [&](const std::string& name, std::size_t rows,
                    std::size_t cols, std::size_t fan_in) {
    ParamBlock b{name, RowMatrix(rows, cols)};
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : b.m.data) v = rng.uniform(-bound, bound);
    p.blocks.push_back(std::move(b));
  };
  auto bias = [&](const std::string& name, std::size_t cols) {
    p.blocks.push_back({name, RowMatrix(1, cols, 0.0)});
  };

  if (cfg.kind == ModelKind::kDnn) {
    weight("dense1.w", cfg.input_dim(), cfg.hidden1, cfg.input_dim());
    bias("dense1.b", cfg.hidden1);
    weight("dense2.w", cfg.hidden1, cfg.hidden2, cfg.hidden1);
    bias("dense2.b", cfg.hidden2);
  } else {
    const std::size_t g = gate_count(cfg.kind);
    weight("rnn1.wx", cfg.frame_dim, g * cfg.hidden1, cfg.frame_dim);
    weight("rnn1.wh", cfg.hidden1, g * cfg.hidden1, cfg.hidden1);
    bias("rnn1.b", g * cfg.hidden1);
    weight("rnn2.wx", cfg.hidden1, g * cfg.hidden2, cfg.hidden1);
    weight("rnn2.wh", cfg.hidden2, g * cfg.hidden2, cfg.hidden2);
    bias("rnn2.b", g * cfg.hidden2);
    if (cfg.kind == ModelKind::kLstm) {
      // Forget gate block is the second group of columns.
      for (std::size_t u = 0; u < cfg.hidden1; ++u)
        p.at("rnn1.b").m.at(0, cfg.hidden1 + u) = 1.0;
      for (std::size_t u = 0; u < cfg.hidden2; ++u)
        p.at("rnn2.b").m.at(0, cfg.hidden2 + u) = 1.0;
    }
  }
  weight("readout.w", cfg.hidden2, cfg.classes, cfg.hidden2);
  bias("readout.b", cfg.classes);
  return p;
}

RowMatrix network_forward(const NetworkConfig& cfg,
                          const NetworkParams& params,
                          const RowMatrix& batch) {
  cfg.validate();
  if (batch.cols != cfg.input_dim())
    throw ValidationError("batch width does not match the window shape");

  Mat y = backbone_forward(cfg, params, batch, 0.0, nullptr, nullptr);
  Mat feats = y.cwiseMax(0.0);
  Mat logits = feats * cmap(params.at("readout.w"));
  logits.rowwise() += cmap(params.at("readout.b")).row(0);

  RowMatrix probs(batch.rows, cfg.classes);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    double zsum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      zsum += std::exp(logits(r, c) - m);
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      probs.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          std::exp(logits(r, c) - m) / zsum;
  }
  return probs;
}

double network_score(const NetworkConfig& cfg, const NetworkParams& params,
                     const std::vector<double>& window) {
  RowMatrix batch(1, window.size());
  batch.data = window;
  const RowMatrix probs = network_forward(cfg, params, batch);
  return probs.at(0, 1);
}

double network_loss_and_grad(const NetworkConfig& cfg,
                             const NetworkParams& params,
                             const RowMatrix& batch,
                             const std::vector<unsigned char>& labels,
                             const std::vector<double>& sample_weights,
                             double dropout_rate, Rng* rng,
                             NetworkParams* grads) {
  cfg.validate();
  if (batch.cols != cfg.input_dim())
    throw ValidationError("batch width does not match the window shape");
  if (labels.size() != batch.rows || sample_weights.size() != batch.rows)
    throw ValidationError("labels/weights do not match the batch size");
  if (batch.rows == 0) throw ValidationError("empty batch");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw ConfigError("dropout rate must be in [0, 1)");

  const Eigen::Index n = static_cast<Eigen::Index>(batch.rows);
  const bool drop = dropout_rate > 0.0 && rng != nullptr;

  BackboneCaches cache;
  Mat y = backbone_forward(cfg, params, batch, dropout_rate, rng, &cache);

  Mat feats = y.cwiseMax(0.0);
  Mat head_mask;
  Mat feats_d = feats;
  if (drop) {
    head_mask = draw_mask(*rng, feats.rows(), feats.cols(), dropout_rate);
    feats_d = (feats.array() * head_mask.array()).matrix();
  }
  Mat logits = feats_d * cmap(params.at("readout.w"));
  logits.rowwise() += cmap(params.at("readout.b")).row(0);

  // Stable softmax cross-entropy and its gradient, weighted per sample and
  // averaged over the batch.
  double loss = 0.0;
  Mat dlogits(n, logits.cols());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double m = logits.row(r).maxCoeff();
    double zsum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      zsum += std::exp(logits(r, c) - m);
    const double log_z = std::log(zsum);
    const std::size_t yi = labels[static_cast<std::size_t>(r)] ? 1 : 0;
    const double w = sample_weights[static_cast<std::size_t>(r)];
    loss += w * (log_z + m - logits(r, static_cast<Eigen::Index>(yi)));
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      const double p = std::exp(logits(r, c) - m) / zsum;
      dlogits(r, c) =
          w * inv_n *
          (p - (static_cast<std::size_t>(c) == yi ? 1.0 : 0.0));
    }
  }
  loss *= inv_n;
  if (!grads) return loss;

  NetworkParams& g = *grads;
  mmap(g.at("readout.w")).noalias() += feats_d.transpose() * dlogits;
  mmap(g.at("readout.b")).row(0) += dlogits.colwise().sum();

  Mat dfeats = dlogits * cmap(params.at("readout.w")).transpose();
  if (drop) dfeats = (dfeats.array() * head_mask.array()).matrix();
  Mat dy =
      (dfeats.array() * (y.array() > 0.0).cast<double>()).matrix();

  if (cfg.kind == ModelKind::kDnn) {
    const ParamBlock& w2 = params.at("dense2.w");

    mmap(g.at("dense2.w")).noalias() += cache.dnn_a1d.transpose() * dy;
    mmap(g.at("dense2.b")).row(0) += dy.colwise().sum();
    Mat da1 = dy * cmap(w2).transpose();
    if (drop) da1 = (da1.array() * cache.dnn_mask_mid.array()).matrix();
    Mat dz1 =
        (da1.array() * (cache.dnn_z1.array() > 0.0).cast<double>()).matrix();
    mmap(g.at("dense1.w")).noalias() += cache.dnn_in.transpose() * dz1;
    mmap(g.at("dense1.b")).row(0) += dz1.colwise().sum();
    return loss;
  }

  // Backpropagation through time over both recurrent layers. dh/dc carry the
  // running state gradients; layer-2 input gradients feed layer 1 through the
  // (possibly masked) feed connection.
  const ParamBlock& wx1 = params.at("rnn1.wx");
  const ParamBlock& wh1 = params.at("rnn1.wh");
  const ParamBlock& wx2 = params.at("rnn2.wx");
  const ParamBlock& wh2 = params.at("rnn2.wh");

  const Eigen::Index h1n = static_cast<Eigen::Index>(cfg.hidden1);
  const Eigen::Index h2n = static_cast<Eigen::Index>(cfg.hidden2);

  Mat dh2 = dy;
  Mat dc2 = Mat::Zero(n, h2n);
  Mat dh1 = Mat::Zero(n, h1n);
  Mat dc1 = Mat::Zero(n, h1n);

  auto lstm_back = [&](const LstmCache& cacheL, const ParamBlock& wx,
                       const ParamBlock& wh, ParamBlock& gwx, ParamBlock& gwh,
                       ParamBlock& gb, std::size_t t, Mat& dh, Mat& dc,
                       Mat& dx_out) {
    const Eigen::Index units = static_cast<Eigen::Index>(wh.m.rows);
    const Mat& gi = cacheL.i[t];
    const Mat& gf = cacheL.f[t];
    const Mat& gg = cacheL.g[t];
    const Mat& go = cacheL.o[t];
    const Mat& cc = cacheL.c[t];
    const Mat& cp = cacheL.c_prev[t];

    Mat tanh_c = cc.array().tanh().matrix();
    Mat d_o = (dh.array() * tanh_c.array()).matrix();
    dc = ((dh.array() * go.array()) * (1.0 - tanh_c.array().square()) +
          dc.array())
             .matrix();

    Mat d_i = (dc.array() * gg.array()).matrix();
    Mat d_f = (dc.array() * cp.array()).matrix();
    Mat d_g = (dc.array() * gi.array()).matrix();
    Mat dc_prev = (dc.array() * gf.array()).matrix();

    Mat da(n, 4 * units);
    da.leftCols(units) =
        (d_i.array() * gi.array() * (1.0 - gi.array())).matrix();
    da.middleCols(units, units) =
        (d_f.array() * gf.array() * (1.0 - gf.array())).matrix();
    da.middleCols(2 * units, units) =
        (d_g.array() * (1.0 - gg.array().square())).matrix();
    da.rightCols(units) =
        (d_o.array() * go.array() * (1.0 - go.array())).matrix();

    mmap(gwx).noalias() += cacheL.x[t].transpose() * da;
    mmap(gwh).noalias() += cacheL.h_prev[t].transpose() * da;
    mmap(gb).row(0) += da.colwise().sum();

    dx_out = da * cmap(wx).transpose();
    dh = da * cmap(wh).transpose();
    dc = dc_prev;
  };

  auto gru_back = [&](const GruCache& cacheG, const ParamBlock& wx,
                      const ParamBlock& wh, ParamBlock& gwx, ParamBlock& gwh,
                      ParamBlock& gb, std::size_t t, Mat& dh, Mat& dx_out) {
    const Eigen::Index units = static_cast<Eigen::Index>(wh.m.rows);
    const Mat& z = cacheG.z[t];
    const Mat& r = cacheG.r[t];
    const Mat& hc = cacheG.hc[t];
    const Mat& hp = cacheG.h_prev[t];
    const Mat& rh = cacheG.rh[t];
    ConstMap wxm = cmap(wx), whm = cmap(wh);

    Mat dz = (dh.array() * (hc.array() - hp.array())).matrix();
    Mat dhc = (dh.array() * z.array()).matrix();
    Mat dhp = (dh.array() * (1.0 - z.array())).matrix();

    Mat dah = (dhc.array() * (1.0 - hc.array().square())).matrix();
    Mat drh = dah * whm.rightCols(units).transpose();
    Mat dr = (drh.array() * hp.array()).matrix();
    dhp += (drh.array() * r.array()).matrix();

    Mat daz = (dz.array() * z.array() * (1.0 - z.array())).matrix();
    Mat dar = (dr.array() * r.array() * (1.0 - r.array())).matrix();

    MutMap gwxm = mmap(gwx);
    MutMap gwhm = mmap(gwh);
    gwxm.leftCols(units).noalias() += cacheG.x[t].transpose() * daz;
    gwxm.middleCols(units, units).noalias() +=
        cacheG.x[t].transpose() * dar;
    gwxm.rightCols(units).noalias() += cacheG.x[t].transpose() * dah;
    gwhm.leftCols(units).noalias() += hp.transpose() * daz;
    gwhm.middleCols(units, units).noalias() += hp.transpose() * dar;
    gwhm.rightCols(units).noalias() += rh.transpose() * dah;
    MutMap gbm = mmap(gb);
    gbm.row(0).leftCols(units) += daz.colwise().sum();
    gbm.row(0).middleCols(units, units) += dar.colwise().sum();
    gbm.row(0).rightCols(units) += dah.colwise().sum();

    dx_out = daz * wxm.leftCols(units).transpose() +
             dar * wxm.middleCols(units, units).transpose() +
             dah * wxm.rightCols(units).transpose();
    dhp += daz * whm.leftCols(units).transpose() +
           dar * whm.middleCols(units, units).transpose();
    dh = dhp;
  };

  for (std::size_t tt = cfg.frames; tt-- > 0;) {
    Mat dfeed;  // gradient at layer-2's input for this frame
    if (cfg.kind == ModelKind::kLstm) {
      lstm_back(cache.lstm2, wx2, wh2, g.at("rnn2.wx"), g.at("rnn2.wh"),
                g.at("rnn2.b"), tt, dh2, dc2, dfeed);
    } else {
      gru_back(cache.gru2, wx2, wh2, g.at("rnn2.wx"), g.at("rnn2.wh"),
               g.at("rnn2.b"), tt, dh2, dfeed);
    }
    if (drop)
      dfeed = (dfeed.array() * cache.mask_mid[tt].array()).matrix();
    dh1 += dfeed;

    Mat dx;  // input-frame gradient, unused beyond this point
    if (cfg.kind == ModelKind::kLstm) {
      lstm_back(cache.lstm1, wx1, wh1, g.at("rnn1.wx"), g.at("rnn1.wh"),
                g.at("rnn1.b"), tt, dh1, dc1, dx);
    } else {
      gru_back(cache.gru1, wx1, wh1, g.at("rnn1.wx"), g.at("rnn1.wh"),
               g.at("rnn1.b"), tt, dh1, dx);
    }
  }
  return loss;
}

}  // namespace sed
