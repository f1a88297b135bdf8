#include "propaxis/vgae/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "propaxis/common/error.hpp"
#include "propaxis/num/kernels.hpp"
#include "propaxis/num/tape.hpp"

namespace propaxis::vgae {

using num::kernels::matmul;
using num::kernels::sum_all;
using num::kernels::transpose;
using num::Tape;

void TrainConfig::validate() const {
    if (T < 2) raise(ErrorKind::Domain, "config: T must be >= 2");
    if (d1 < 1) raise(ErrorKind::Domain, "config: d1 must be >= 1");
    if (epochs < 0) raise(ErrorKind::Domain, "config: epochs must be >= 0");
    if (!(lr > 0.0)) raise(ErrorKind::Domain, "config: lr must be positive");
    if (lambda < 0.0 || gamma_sup < 0.0)
        raise(ErrorKind::Domain, "config: lambda and gamma_sup must be non-negative");
    if (kl_target < 0.0)
        raise(ErrorKind::Domain, "config: kl_target must be positive (or 0 for the scaled default)");
    if (!(kp > 0.0) || !(ki > 0.0)) raise(ErrorKind::Domain, "config: kp and ki must be positive");
    if (beta_min < 0.0 || beta_max < beta_min)
        raise(ErrorKind::Domain, "config: need 0 <= beta_min <= beta_max");
}

double TrainConfig::resolve_kl_target(std::size_t n_nodes) const {
    return kl_target > 0.0 ? kl_target
                           : static_cast<double>(n_nodes) * static_cast<double>(T);
}

TrainConfig train_config_from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        raise(ErrorKind::Malformed, origin + ": config is not a JSON object");
    TrainConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "T") cfg.T = value.get<int>();
        else if (key == "d1") cfg.d1 = value.get<int>();
        else if (key == "epochs") cfg.epochs = value.get<int>();
        else if (key == "lr") cfg.lr = value.get<double>();
        else if (key == "lambda") cfg.lambda = value.get<double>();
        else if (key == "gamma_sup") cfg.gamma_sup = value.get<double>();
        else if (key == "kl_target") cfg.kl_target = value.get<double>();
        else if (key == "kp") cfg.kp = value.get<double>();
        else if (key == "ki") cfg.ki = value.get<double>();
        else if (key == "beta_min") cfg.beta_min = value.get<double>();
        else if (key == "beta_max") cfg.beta_max = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else raise(ErrorKind::Malformed, origin + ": unknown config key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

std::string train_config_to_json_text(const TrainConfig& cfg) {
    nlohmann::json j;
    j["T"] = cfg.T;
    j["d1"] = cfg.d1;
    j["epochs"] = cfg.epochs;
    j["lr"] = cfg.lr;
    j["lambda"] = cfg.lambda;
    j["gamma_sup"] = cfg.gamma_sup;
    j["kl_target"] = cfg.kl_target;
    j["kp"] = cfg.kp;
    j["ki"] = cfg.ki;
    j["beta_min"] = cfg.beta_min;
    j["beta_max"] = cfg.beta_max;
    j["seed"] = cfg.seed;
    return j.dump(2);
}

PiController PiController::from_config(const TrainConfig& cfg, std::size_t n_nodes) {
    PiController pc;
    pc.kp = cfg.kp;
    pc.ki = cfg.ki;
    pc.kl_target = cfg.resolve_kl_target(n_nodes);
    pc.beta_min = cfg.beta_min;
    pc.beta_max = cfg.beta_max;
    pc.integral = 0.0;
    pc.last_beta = cfg.beta_min;
    return pc;
}

double PiController::update(double observed_kl) {
    if (observed_kl < 0.0) raise(ErrorKind::Domain, "pi_update: observed_kl must be >= 0");
    // Both terms act on the error relative to the set-point, so the loop gain
    // is independent of the KL scale (which grows with the graph). kErrScale
    // sets the width of the proportional band to roughly +-half the target.
    const double e = (kl_target - observed_kl) / kl_target;
    const double p = kp / (1.0 + std::exp(kErrScale * e));
    // The integral is frozen at a bound except in the direction that moves
    // beta back inside; -ki*e > 0 raises beta.
    const bool inside = last_beta > beta_min && last_beta < beta_max;
    const bool recovers_low = last_beta <= beta_min && e < 0.0;
    const bool recovers_high = last_beta >= beta_max && e > 0.0;
    if (inside || recovers_low || recovers_high) integral -= ki * e;
    const double beta = std::clamp(p + integral + beta_min, beta_min, beta_max);
    last_beta = beta;
    return beta;
}

namespace {

Matrix bce_weights_for(const Matrix& a) {
    const double n1 = sum_all(a);
    if (n1 <= 0.0) raise(ErrorKind::Data, "recon_loss: adjacency has no edges (degenerate graph)");
    const double total = static_cast<double>(a.size());
    const double pos_weight = (total - n1) / n1;
    Matrix w(a.rows, a.cols, 1.0);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (a.data[i] != 0.0) w.data[i] = pos_weight;
    return w;
}

void check_adjacency(const Matrix& a) {
    if (a.rows != a.cols) raise(ErrorKind::Shape, "adjacency must be square, got " + a.shape_str());
    for (std::size_t i = 0; i < a.rows; ++i)
        if (a.at(i, i) != 1.0)
            raise(ErrorKind::Data, "adjacency must carry self-loops (diagonal of ones)");
}

struct EncoderVars {
    Tape::Var w1, w_mu, w_sigma;
    Tape::Var mu, log_sigma, z;
};

EncoderVars build_encoder(Tape& t, const bhin::PreparedInputs& in, const EncoderParams& p,
                          const Matrix& eps) {
    EncoderVars v;
    auto atilde = t.leaf(in.atilde);
    v.w1 = t.leaf(p.w1);
    v.w_mu = t.leaf(p.w_mu);
    v.w_sigma = t.leaf(p.w_sigma);
    // With identity features X W1 is W1 itself; skip the multiplication.
    auto xw1 = in.x_is_identity ? v.w1 : t.matmul(t.leaf(in.x), v.w1);
    auto h = t.relu(t.matmul(atilde, xw1));
    v.mu = t.matmul(atilde, t.matmul(h, v.w_mu));
    v.log_sigma = t.clamp(t.matmul(atilde, t.matmul(h, v.w_sigma)), -6.0, 6.0);
    auto sigma = t.exp(v.log_sigma);
    v.z = t.relu(t.add(v.mu, t.hadamard(sigma, t.leaf(eps))));
    return v;
}

struct DiscVars {
    Tape::Var w1, b1, w2, b2;
};

Tape::Var disc_forward(Tape& t, const DiscVars& d, Tape::Var input) {
    auto h = t.relu(t.add_rowvec(t.matmul(input, d.w1), d.b1));
    return t.add_rowvec(t.matmul(h, d.w2), d.b2);
}

struct LossVars {
    Tape::Var recon, kl, tc, total;
    std::optional<Tape::Var> anchor;
};

Matrix anchor_mask(std::size_t n, int t_dims, std::span<const AnchorLabel> anchors) {
    Matrix mask(n, static_cast<std::size_t>(t_dims));
    for (const auto& a : anchors) {
        if (a.node_index >= n)
            raise(ErrorKind::Data, "anchor node index " + std::to_string(a.node_index) +
                                       " outside graph of " + std::to_string(n) + " nodes");
        if (a.axis < 0 || a.axis >= t_dims)
            raise(ErrorKind::Data, "anchor axis " + std::to_string(a.axis) + " outside [0, " +
                                       std::to_string(t_dims) + ")");
        for (int k = 0; k < t_dims; ++k)
            if (k != a.axis) mask.at(a.node_index, static_cast<std::size_t>(k)) = 1.0;
    }
    return mask;
}

LossVars build_losses(Tape& t, const EncoderVars& enc, const Discriminator& disc, const Matrix& a,
                      const Matrix& weights, double beta, double lambda, double gamma,
                      const Matrix* mask) {
    LossVars l;
    auto logits = t.matmul(enc.z, t.transpose(enc.z));
    l.recon = t.bce_mean(logits, a, weights);

    auto mu2 = t.hadamard(enc.mu, enc.mu);
    auto two_ls = t.scale(enc.log_sigma, 2.0);
    auto inner = t.sub(t.add(mu2, t.exp(two_ls)), t.add_const(two_ls, 1.0));
    l.kl = t.scale(t.sum(inner), 0.5);

    DiscVars dv{t.leaf(disc.w1), t.leaf(disc.b1), t.leaf(disc.w2), t.leaf(disc.b2)};
    l.tc = t.mean_all(disc_forward(t, dv, enc.z));

    // The reconstruction term is a mean while the KL is a sum, so beta
    // multiplies the per-node KL (the reference VGAE convention); this keeps
    // the controller's operating range at the O(0.1..1) scale its gains
    // assume. Reported KL values stay unscaled.
    const double per_node = 1.0 / static_cast<double>(a.rows);
    l.total = t.add(t.add(l.recon, t.scale(l.kl, beta * per_node)), t.scale(l.tc, lambda));
    if (mask) {
        auto masked = t.hadamard(enc.z, t.leaf(*mask));
        l.anchor = t.sum(t.hadamard(masked, masked));
        l.total = t.add(l.total, t.scale(*l.anchor, gamma));
    }
    return l;
}

} // namespace

std::pair<Matrix, Matrix> encode(const bhin::PreparedInputs& inputs, const EncoderParams& params) {
    const Matrix xw1 = inputs.x_is_identity ? params.w1 : matmul(inputs.x, params.w1);
    Matrix h = matmul(inputs.atilde, xw1);
    for (double& v : h.data) v = v > 0.0 ? v : 0.0;
    Matrix mu = matmul(inputs.atilde, matmul(h, params.w_mu));
    Matrix ls = matmul(inputs.atilde, matmul(h, params.w_sigma));
    for (double& v : ls.data) v = std::clamp(v, -6.0, 6.0);
    return {std::move(mu), std::move(ls)};
}

Matrix reparameterize(const Matrix& mu, const Matrix& log_sigma, num::RngState& rng) {
    num::require_same_shape(mu, log_sigma, "reparameterize");
    Matrix z(mu.rows, mu.cols);
    for (std::size_t i = 0; i < z.data.size(); ++i) {
        const double pre = mu.data[i] + std::exp(log_sigma.data[i]) * rng.next_gaussian();
        z.data[i] = pre > 0.0 ? pre : 0.0;
    }
    return z;
}

Matrix decode(const Matrix& z) {
    Matrix logits = matmul(z, transpose(z));
    for (double& v : logits.data) v = num::kernels::sigmoid(v);
    return logits;
}

double recon_loss(const Matrix& z, const Matrix& a) {
    check_adjacency(a);
    if (z.rows != a.rows)
        raise(ErrorKind::Shape, "recon_loss: Z has " + std::to_string(z.rows) +
                                    " rows but A is " + a.shape_str());
    const Matrix weights = bce_weights_for(a);
    const Matrix logits = matmul(z, transpose(z));
    return num::kernels::bce_mean(logits, a, weights);
}

double kl_term(const Matrix& mu, const Matrix& log_sigma) {
    num::require_same_shape(mu, log_sigma, "kl_term");
    Matrix inner(mu.rows, mu.cols);
    for (std::size_t i = 0; i < inner.data.size(); ++i) {
        const double m = mu.data[i];
        const double two_ls = 2.0 * log_sigma.data[i];
        inner.data[i] = m * m + std::exp(two_ls) - 1.0 - two_ls;
    }
    return 0.5 * sum_all(inner);
}

double tc_loss(const Matrix& z, const Discriminator& disc) {
    Matrix h = matmul(z, disc.w1);
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j) {
            h.at(i, j) += disc.b1.at(0, j);
            if (!(h.at(i, j) > 0.0)) h.at(i, j) = 0.0;
        }
    Matrix logits = matmul(h, disc.w2);
    for (std::size_t i = 0; i < logits.rows; ++i) logits.at(i, 0) += disc.b2.at(0, 0);
    return sum_all(logits) / static_cast<double>(logits.size());
}

void disc_step(const Matrix& z_detached, Discriminator& disc, num::AdamState& adam,
               num::RngState& rng) {
    const std::size_t n = z_detached.rows;
    const std::size_t t_dims = z_detached.cols;

    // Negatives: each latent column independently shuffled across rows.
    Matrix zperm = z_detached;
    std::vector<std::size_t> perm(n);
    for (std::size_t col = 0; col < t_dims; ++col) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i-- > 1;)
            std::swap(perm[i], perm[rng.next_below(i + 1)]);
        for (std::size_t i = 0; i < n; ++i) zperm.at(i, col) = z_detached.at(perm[i], col);
    }

    Tape t;
    DiscVars dv{t.leaf(disc.w1), t.leaf(disc.b1), t.leaf(disc.w2), t.leaf(disc.b2)};
    auto real_logits = disc_forward(t, dv, t.leaf(z_detached));
    auto perm_logits = disc_forward(t, dv, t.leaf(zperm));
    const Matrix ones(n, 1, 1.0);
    const Matrix zeros(n, 1, 0.0);
    auto loss = t.scale(
        t.add(t.bce_mean(real_logits, ones, ones), t.bce_mean(perm_logits, zeros, ones)), 0.5);
    t.backward(loss);

    Matrix* params[] = {&disc.w1, &disc.b1, &disc.w2, &disc.b2};
    const Matrix* grads[] = {&t.grad(dv.w1), &t.grad(dv.b1), &t.grad(dv.w2), &t.grad(dv.b2)};
    adam.update(params, grads);
}

double anchor_penalty(const Matrix& z, std::span<const AnchorLabel> anchors) {
    const Matrix mask = anchor_mask(z.rows, static_cast<int>(z.cols), anchors);
    double total = 0.0;
    for (std::size_t i = 0; i < z.data.size(); ++i) {
        const double m = mask.data[i] * z.data[i];
        total += m * m;
    }
    return total;
}

ObjectiveParts objective_with_grads(const bhin::PreparedInputs& inputs, const EncoderParams& params,
                                    const Discriminator& disc, const Matrix& eps, double beta,
                                    double lambda, double gamma,
                                    std::span<const AnchorLabel> anchors,
                                    std::vector<Matrix>* grads_out) {
    check_adjacency(inputs.a);
    const Matrix weights = bce_weights_for(inputs.a);
    std::optional<Matrix> mask;
    if (!anchors.empty()) mask = anchor_mask(inputs.a.rows, static_cast<int>(eps.cols), anchors);

    Tape tape;
    EncoderVars enc = build_encoder(tape, inputs, params, eps);
    LossVars losses =
        build_losses(tape, enc, disc, inputs.a, weights, beta, lambda, gamma, mask ? &*mask : nullptr);

    ObjectiveParts parts;
    parts.recon = tape.value(losses.recon).at(0, 0);
    parts.kl = tape.value(losses.kl).at(0, 0);
    parts.tc = tape.value(losses.tc).at(0, 0);
    parts.anchor = losses.anchor ? tape.value(*losses.anchor).at(0, 0) : 0.0;
    parts.total = tape.value(losses.total).at(0, 0);
    if (grads_out) {
        tape.backward(losses.total);
        *grads_out = {tape.grad(enc.w1), tape.grad(enc.w_mu), tape.grad(enc.w_sigma)};
    }
    return parts;
}

TrainResult train(const bhin::PreparedInputs& inputs, const TrainConfig& cfg,
                  std::span<const AnchorLabel> anchors) {
    cfg.validate();
    check_adjacency(inputs.a);
    const std::size_t n = inputs.a.rows;
    const auto t_dims = static_cast<std::size_t>(cfg.T);
    const auto d1 = static_cast<std::size_t>(cfg.d1);
    const std::size_t f = inputs.x_is_identity ? n : inputs.x.cols;

    const Matrix weights = bce_weights_for(inputs.a);
    std::optional<Matrix> mask;
    if (!anchors.empty()) mask = anchor_mask(n, cfg.T, anchors);

    num::RngState rng(cfg.seed);
    TrainResult result;
    result.params.w1 = num::glorot_uniform(f, d1, rng);
    // The mean head starts non-negative so every rectified unit is live at
    // epoch 0; a sign-symmetric start leaves half the latent coordinates dead
    // behind the ReLU gate and the weaker axis never recovers.
    result.params.w_mu = num::glorot_uniform(d1, t_dims, rng);
    for (double& v : result.params.w_mu.data) v = std::fabs(v);
    result.params.w_sigma = num::glorot_uniform(d1, t_dims, rng);
    result.disc.w1 = num::glorot_uniform(t_dims, Discriminator::kHidden, rng);
    result.disc.b1 = Matrix(1, Discriminator::kHidden);
    result.disc.w2 = num::glorot_uniform(Discriminator::kHidden, 1, rng);
    result.disc.b2 = Matrix(1, 1);

    num::AdamState adam_model(cfg.lr);
    num::AdamState adam_disc(cfg.lr);
    PiController pi = PiController::from_config(cfg, n);
    double beta = cfg.beta_min;
    double min_z = std::numeric_limits<double>::infinity();

    result.history.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const Matrix eps = num::gaussian_matrix(n, t_dims, rng);

        Tape tape;
        EncoderVars enc = build_encoder(tape, inputs, result.params, eps);
        const Matrix& z_value = tape.value(enc.z);
        for (double v : z_value.data) min_z = std::min(min_z, v);

        // Discriminator sees this epoch's Z, detached.
        disc_step(z_value, result.disc, adam_disc, rng);

        LossVars losses = build_losses(tape, enc, result.disc, inputs.a, weights, beta,
                                       cfg.lambda, cfg.gamma_sup, mask ? &*mask : nullptr);

        EpochStats stats;
        stats.recon = tape.value(losses.recon).at(0, 0);
        stats.kl = tape.value(losses.kl).at(0, 0);
        stats.tc = tape.value(losses.tc).at(0, 0);
        stats.anchor = losses.anchor ? tape.value(*losses.anchor).at(0, 0) : 0.0;
        stats.beta = beta;
        stats.total = tape.value(losses.total).at(0, 0);
        if (!std::isfinite(stats.total))
            raise(ErrorKind::Numeric,
                  "train: non-finite loss at epoch " + std::to_string(epoch) +
                      " (recon=" + std::to_string(stats.recon) + ", kl=" + std::to_string(stats.kl) +
                      ", tc=" + std::to_string(stats.tc) +
                      ", anchor=" + std::to_string(stats.anchor) + ")");
        result.history.push_back(stats);

        tape.backward(losses.total);
        Matrix* params[] = {&result.params.w1, &result.params.w_mu, &result.params.w_sigma};
        const Matrix* grads[] = {&tape.grad(enc.w1), &tape.grad(enc.w_mu),
                                 &tape.grad(enc.w_sigma)};
        adam_model.update(params, grads);

        beta = pi.update(stats.kl);
    }

    auto [mu, log_sigma] = encode(inputs, result.params);
    Matrix z = reparameterize(mu, log_sigma, rng);
    for (double v : z.data) min_z = std::min(min_z, v);
    result.latent = LatentState{std::move(mu), std::move(log_sigma), std::move(z)};
    result.min_z_seen = std::isfinite(min_z) ? min_z : 0.0;
    return result;
}

std::vector<AnchorLabel> pick_anchors(const bhin::BhinGraph& g,
                                      const std::map<std::int64_t, int>& labels, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        raise(ErrorKind::Domain, "pick_anchors: fraction must be in (0, 1]");
    const std::vector<std::size_t> deg = g.degrees();

    struct Candidate {
        std::size_t degree;
        std::int64_t assertion_id;
        std::size_t node_index;
    };
    std::map<int, std::vector<Candidate>> by_label;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].kind != bhin::NodeKind::Assertion) continue;
        const std::int64_t aid = std::stoll(g.nodes[i].id);
        auto it = labels.find(aid);
        if (it == labels.end()) continue;
        by_label[it->second].push_back({deg[i], aid, i});
    }

    std::vector<AnchorLabel> anchors;
    for (auto& [label, cands] : by_label) {
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            return std::tie(a.degree, a.assertion_id) < std::tie(b.degree, b.assertion_id);
        });
        const auto take = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(cands.size())));
        for (std::size_t i = 0; i < take && i < cands.size(); ++i)
            anchors.push_back({cands[i].node_index, label});
    }
    return anchors;
}

} // namespace propaxis::vgae
