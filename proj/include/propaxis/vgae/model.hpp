#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "propaxis/bhin/graph.hpp"
#include "propaxis/num/adam.hpp"
#include "propaxis/num/matrix.hpp"
#include "propaxis/num/rng.hpp"

namespace propaxis::vgae {

using num::Matrix;

/// All knobs of the embedding model. JSON configs use exactly these field
/// names; unknown keys are rejected.
struct TrainConfig {
    int T = 2;           // latent dimensions, one per ideological side
    int d1 = 32;         // hidden width of the shared GCN layer
    int epochs = 500;
    double lr = 0.01;
    double lambda = 0.5;    // total-correlation weight
    double gamma_sup = 1.0; // anchor penalty weight
    // KL set-point for the PI controller. 0 selects the scale-aware default
    // of one nat per latent entry (N*T); an explicit positive value is used
    // as-is.
    double kl_target = 0.0;
    double kp = 0.01;
    double ki = 0.001;
    double beta_min = 0.0;
    double beta_max = 1.0;
    std::uint64_t seed = 42;

    void validate() const;
    double resolve_kl_target(std::size_t n_nodes) const;
};

/// Parses a config document; keys mirror TrainConfig field names exactly and
/// unknown keys are an error. Absent keys keep their defaults.
TrainConfig train_config_from_json_text(const std::string& text, const std::string& origin);
std::string train_config_to_json_text(const TrainConfig& cfg);

/// Encoder weights: one shared GCN layer plus linear mean / log-std heads.
struct EncoderParams {
    Matrix w1;      // F x d1
    Matrix w_mu;    // d1 x T
    Matrix w_sigma; // d1 x T
};

/// Two-layer perceptron scoring rows of Z; the output is the logit of the
/// density-ratio discriminator.
struct Discriminator {
    Matrix w1; // T x hidden
    Matrix b1; // 1 x hidden
    Matrix w2; // hidden x 1
    Matrix b2; // 1 x 1
    static constexpr int kHidden = 64;
};

/// PI feedback on the KL weight. The integral term only moves while it can
/// still influence the emitted beta: frozen at a bound except in the
/// direction that leaves it.
struct PiController {
    double kp = 0.01;
    double ki = 0.001;
    double kl_target = 50.0;
    double beta_min = 0.0;
    double beta_max = 1.0;
    double integral = 0.0;
    double last_beta = 0.0;

    /// Logistic width of the proportional term on the relative error.
    static constexpr double kErrScale = 10.0;

    static PiController from_config(const TrainConfig& cfg, std::size_t n_nodes);

    /// One update step; returns the new beta, always within
    /// [beta_min, beta_max].
    double update(double observed_kl);
};

struct AnchorLabel {
    std::size_t node_index = 0; // must be an Assertion node
    int axis = 0;               // leaning axis in [0, T)
};

struct LatentState {
    Matrix mu;        // N x T
    Matrix log_sigma; // N x T, clamped to [-6, 6]
    Matrix z;         // N x T, rectified sample (>= 0)
};

struct EpochStats {
    double recon = 0.0;
    double kl = 0.0;
    double tc = 0.0;
    double anchor = 0.0;
    double beta = 0.0; // beta used for this epoch's step
    double total = 0.0;
};

struct TrainResult {
    LatentState latent;
    EncoderParams params;
    Discriminator disc;
    std::vector<EpochStats> history;
    double min_z_seen = 0.0; // minimum over every Z entry sampled during training
};

// ---- forward ops (no tape; values match the training path) ----

/// H = ReLU(Atilde X W1); mu = Atilde H Wmu; log_sigma = clamp(Atilde H Wsigma, -6, 6).
std::pair<Matrix, Matrix> encode(const bhin::PreparedInputs& inputs, const EncoderParams& params);

/// Z = max(0, mu + exp(log_sigma) * eps), eps ~ N(0,1) elementwise.
Matrix reparameterize(const Matrix& mu, const Matrix& log_sigma, num::RngState& rng);

/// Edge probabilities sigmoid(Z Z^T).
Matrix decode(const Matrix& z);

/// Mean over all N^2 entries of stable_bce(z_i . z_j, A_ij, w_ij) with
/// w_ij = (N^2 - n1)/n1 on edges (n1 = number of ones in A) and 1 elsewhere.
double recon_loss(const Matrix& z, const Matrix& a);

/// Sum over entries of (mu^2 + sigma^2 - 1 - 2 log sigma) / 2, i.e. the KL of
/// the pre-rectification Gaussians against N(0, 1).
double kl_term(const Matrix& mu, const Matrix& log_sigma);

/// Mean discriminator logit over the rows of Z (the stable form of
/// log(phi) - log(1 - phi)).
double tc_loss(const Matrix& z, const Discriminator& disc);

/// One Adam step of the discriminator: binary cross-entropy toward 1 on the
/// true rows and 0 on rows with each latent column independently shuffled.
void disc_step(const Matrix& z_detached, Discriminator& disc, num::AdamState& adam,
               num::RngState& rng);

/// Sum over anchored rows of the squared off-axis coordinates.
double anchor_penalty(const Matrix& z, std::span<const AnchorLabel> anchors);

struct ObjectiveParts {
    double recon = 0.0, kl = 0.0, tc = 0.0, anchor = 0.0, total = 0.0;
};

/// Evaluates the full objective recon + beta*KL + lambda*TC + gamma*anchor
/// for fixed noise and a fixed discriminator; when grads_out is non-null it
/// receives d(total)/d{w1, w_mu, w_sigma}. This is the exact computation the
/// training step performs, exposed for gradient verification.
ObjectiveParts objective_with_grads(const bhin::PreparedInputs& inputs, const EncoderParams& params,
                                    const Discriminator& disc, const Matrix& eps, double beta,
                                    double lambda, double gamma,
                                    std::span<const AnchorLabel> anchors,
                                    std::vector<Matrix>* grads_out);

/// Full training loop; see EpochStats for the recorded components. Aborts
/// with epoch number and component values if the loss goes non-finite.
TrainResult train(const bhin::PreparedInputs& inputs, const TrainConfig& cfg,
                  std::span<const AnchorLabel> anchors = {});

/// Semi-supervised helper: for each label picks the lowest-degree labeled
/// assertions (ceil(fraction * count per label)), anchored to axis = label.
std::vector<AnchorLabel> pick_anchors(const bhin::BhinGraph& g,
                                      const std::map<std::int64_t, int>& labels, double fraction);

} // namespace propaxis::vgae
