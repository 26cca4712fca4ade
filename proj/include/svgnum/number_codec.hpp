#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace svgnum {

// Deterministic random source. Raw draws come from mt19937_64 so sequences
// are identical across platforms; the gaussian uses Box-Muller on demand
// (no cached second value) for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next() { return eng_(); }
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    double gaussian();                   // standard normal

private:
    std::mt19937_64 eng_;
};

struct FourierConfig {
    int k = 16; // frequency bands; feature dimension is 2k
};

// Interleaved [sin(2^j pi v), cos(2^j pi v)] for j = 0..k-1.
std::vector<double> fourier_features(double v, const FourierConfig& cfg);

double normalize(double n, double canvas_bound);   // v = n / M
double denormalize(double v, double canvas_bound); // n = M * v

// v + eps with eps ~ N(0, sigma^2); sigma = 0 returns v unchanged.
double add_noise(double v, double sigma, Rng& rng);

// Two hidden layers with GELU (tanh form), identity output.
struct MlpParams {
    std::array<int, 4> layer_dims{}; // d_in, d_h, d_h, d_out
    std::vector<std::vector<double>> weights; // 3 row-major (out x in) matrices
    std::vector<std::vector<double>> biases;  // 3 vectors

    std::size_t param_count() const;
};

MlpParams make_mlp(int d_in, int d_h, int d_out);
void init_mlp(MlpParams& mlp, Rng& rng); // uniform +-1/sqrt(fan_in)

std::vector<double> mlp_forward(const MlpParams& mlp, const std::vector<double>& input);

struct LossWeights {
    double lambda = 1e-5;
};

struct NumberCodecParams {
    FourierConfig fourier;
    MlpParams encoder;        // 2k -> d
    MlpParams decoder;        // d -> 1
    double canvas_bound = 512.0;
    double noise_sigma = 0.2; // normalized units

    // absolute-unit noise intensity: eta = sigma * M
    double noise_eta() const { return noise_sigma * canvas_bound; }

    int embed_dim() const { return encoder.layer_dims[3]; }
};

NumberCodecParams make_codec(int k, int d, double canvas_bound, double noise_sigma,
                             std::uint64_t seed);

// gamma -> encoder MLP; training mode perturbs v with gaussian noise first.
std::vector<double> encoder_forward(double v, const NumberCodecParams& params,
                                    bool training, Rng& rng);

// hidden vector -> scalar v_hat. Throws DimensionMismatch on bad input size.
double decoder_forward(const std::vector<double>& h, const NumberCodecParams& params);

// Mean squared error over de-normalized (absolute-unit) values.
double mse_loss(const std::vector<double>& predicted, const std::vector<double>& target);

// Sum over steps of -log softmax(logits)[target].
double cross_entropy_loss(const std::vector<std::vector<double>>& logits,
                          const std::vector<std::size_t>& targets);

double joint_loss(double ce, double mse, const LossWeights& w);

// Loss and analytic parameter gradient of mean((dec(enc(gamma(v))) - v)^2)
// over the batch. Gradients come back in flat parameter order (encoder
// weights/biases layer by layer, then decoder).
struct BatchGrad {
    double loss = 0.0;
    std::vector<double> grad; // length = total parameter count
};

BatchGrad autoencoder_batch_grad(const NumberCodecParams& params,
                                 const std::vector<double>& values);

std::vector<double> flatten_params(const NumberCodecParams& params);
void unflatten_params(NumberCodecParams& params, const std::vector<double>& flat);

// Max relative error between the analytic batch gradient and central finite
// differences, over every weight and bias.
double grad_check(const NumberCodecParams& params, const std::vector<double>& values,
                  double epsilon);

struct TrainResult {
    NumberCodecParams params;
    double final_mse = 0.0;
    std::vector<double> loss_curve; // loss per logging interval
};

// Plain full-batch gradient descent on the normalized reconstruction MSE.
// The seed drives weight initialization, so equal seeds give equal runs.
// Throws Error{Divergence} if the loss stops being finite.
TrainResult train_autoencoder(const std::vector<double>& values, int k, int d,
                              double canvas_bound, int steps, double learning_rate,
                              std::uint64_t seed);

// Checkpoint: flat little-endian binary of doubles next to a JSON sidecar
// (see docs/checkpoint.md). `path` names the binary; sidecar is path + ".json".
void save_checkpoint(const NumberCodecParams& params, const std::string& path);
NumberCodecParams load_checkpoint(const std::string& path);

} // namespace svgnum
