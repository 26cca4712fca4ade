#include "svgnum/number_codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "svgnum/errors.hpp"

namespace svgnum {

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
    // Box-Muller, one value per call
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> fourier_features(double v, const FourierConfig& cfg) {
    std::vector<double> out(2 * static_cast<std::size_t>(cfg.k));
    double freq = std::numbers::pi * v; // 2^0 pi v
    for (int j = 0; j < cfg.k; ++j) {
        out[2 * j] = std::sin(freq);
        out[2 * j + 1] = std::cos(freq);
        freq *= 2.0;
    }
    return out;
}

double normalize(double n, double canvas_bound) { return n / canvas_bound; }

double denormalize(double v, double canvas_bound) { return canvas_bound * v; }

double add_noise(double v, double sigma, Rng& rng) {
    if (sigma == 0.0) return v;
    return v + sigma * rng.gaussian();
}

std::size_t MlpParams::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += weights[l].size() + biases[l].size();
    return n;
}

MlpParams make_mlp(int d_in, int d_h, int d_out) {
    MlpParams mlp;
    mlp.layer_dims = {d_in, d_h, d_h, d_out};
    for (int l = 0; l < 3; ++l) {
        int in = mlp.layer_dims[l];
        int out = mlp.layer_dims[l + 1];
        mlp.weights.emplace_back(static_cast<std::size_t>(in) * out, 0.0);
        mlp.biases.emplace_back(out, 0.0);
    }
    return mlp;
}

void init_mlp(MlpParams& mlp, Rng& rng) {
    for (int l = 0; l < 3; ++l) {
        double bound = 1.0 / std::sqrt(static_cast<double>(mlp.layer_dims[l]));
        for (double& w : mlp.weights[l]) w = rng.uniform(-bound, bound);
        for (double& b : mlp.biases[l]) b = rng.uniform(-bound, bound);
    }
}

namespace {

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;

double gelu(double x) {
    return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
}

double gelu_grad(double x) {
    double u = kGeluC * (x + kGeluA * x * x * x);
    double t = std::tanh(u);
    double du = kGeluC * (1.0 + 3.0 * kGeluA * x * x);
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
}

void affine(const std::vector<double>& w, const std::vector<double>& b,
            const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t rows = b.size();
    const std::size_t cols = x.size();
    out.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
        out[r] = acc;
    }
}

// Activations cached for the backward pass: inputs[l] feeds layer l,
// pre[l] is its affine output (before GELU on hidden layers).
struct MlpTape {
    std::vector<std::vector<double>> inputs; // 3 entries
    std::vector<std::vector<double>> pre;    // 3 entries
    std::vector<double> out;
};

void mlp_forward_tape(const MlpParams& mlp, const std::vector<double>& x, MlpTape& tape) {
    tape.inputs.resize(3);
    tape.pre.resize(3);
    std::vector<double> cur = x;
    for (int l = 0; l < 3; ++l) {
        tape.inputs[l] = cur;
        affine(mlp.weights[l], mlp.biases[l], cur, tape.pre[l]);
        if (l < 2) {
            cur.resize(tape.pre[l].size());
            for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = gelu(tape.pre[l][i]);
        } else {
            cur = tape.pre[l];
        }
    }
    tape.out = cur;
}

// Accumulates dL/dW, dL/db into grads (same shapes as the MLP) and returns
// dL/dinput through `dx`.
void mlp_backward(const MlpParams& mlp, const MlpTape& tape, std::vector<double> dout,
                  std::vector<std::vector<double>>& gw, std::vector<std::vector<double>>& gb,
                  std::vector<double>& dx) {
    for (int l = 2; l >= 0; --l) {
        const std::vector<double>& in = tape.inputs[l];
        // dout currently holds dL/d(post-activation of layer l)
        if (l < 2)
            for (std::size_t i = 0; i < dout.size(); ++i)
                dout[i] *= gelu_grad(tape.pre[l][i]);
        const std::size_t rows = dout.size();
        const std::size_t cols = in.size();
        for (std::size_t r = 0; r < rows; ++r) {
            gb[l][r] += dout[r];
            double* gwr = gw[l].data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) gwr[c] += dout[r] * in[c];
        }
        std::vector<double> din(cols, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* wr = mlp.weights[l].data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) din[c] += dout[r] * wr[c];
        }
        dout = std::move(din);
    }
    dx = std::move(dout);
}

std::vector<std::vector<double>> zero_like(const std::vector<std::vector<double>>& src) {
    std::vector<std::vector<double>> out;
    out.reserve(src.size());
    for (const auto& v : src) out.emplace_back(v.size(), 0.0);
    return out;
}

} // namespace

std::vector<double> mlp_forward(const MlpParams& mlp, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != mlp.layer_dims[0])
        fail(Errc::DimensionMismatch,
             "input size " + std::to_string(input.size()) + " != " +
                 std::to_string(mlp.layer_dims[0]));
    MlpTape tape;
    mlp_forward_tape(mlp, input, tape);
    return tape.out;
}

NumberCodecParams make_codec(int k, int d, double canvas_bound, double noise_sigma,
                             std::uint64_t seed) {
    NumberCodecParams p;
    p.fourier.k = k;
    p.encoder = make_mlp(2 * k, d, d);
    p.decoder = make_mlp(d, d, 1);
    p.canvas_bound = canvas_bound;
    p.noise_sigma = noise_sigma;
    Rng rng(seed);
    init_mlp(p.encoder, rng);
    init_mlp(p.decoder, rng);
    return p;
}

std::vector<double> encoder_forward(double v, const NumberCodecParams& params,
                                    bool training, Rng& rng) {
    double vin = training ? add_noise(v, params.noise_sigma, rng) : v;
    return mlp_forward(params.encoder, fourier_features(vin, params.fourier));
}

double decoder_forward(const std::vector<double>& h, const NumberCodecParams& params) {
    return mlp_forward(params.decoder, h)[0];
}

double mse_loss(const std::vector<double>& predicted, const std::vector<double>& target) {
    if (predicted.empty() || predicted.size() != target.size())
        fail(Errc::EmptyIndexSet, "mse_loss needs equal nonempty lists");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        double d = predicted[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predicted.size());
}

double cross_entropy_loss(const std::vector<std::vector<double>>& logits,
                          const std::vector<std::size_t>& targets) {
    if (logits.size() != targets.size())
        fail(Errc::IndexOutOfRange, "one target per step required");
    double total = 0.0;
    for (std::size_t t = 0; t < logits.size(); ++t) {
        const auto& row = logits[t];
        if (targets[t] >= row.size())
            fail(Errc::IndexOutOfRange,
                 "target " + std::to_string(targets[t]) + " at step " + std::to_string(t));
        double mx = row[0];
        for (double x : row) mx = std::max(mx, x);
        double sum = 0.0;
        for (double x : row) sum += std::exp(x - mx);
        total += mx + std::log(sum) - row[targets[t]];
    }
    return total;
}

double joint_loss(double ce, double mse, const LossWeights& w) {
    return ce + w.lambda * mse;
}

std::vector<double> flatten_params(const NumberCodecParams& params) {
    std::vector<double> flat;
    flat.reserve(params.encoder.param_count() + params.decoder.param_count());
    for (const MlpParams* mlp : {&params.encoder, &params.decoder})
        for (int l = 0; l < 3; ++l) {
            flat.insert(flat.end(), mlp->weights[l].begin(), mlp->weights[l].end());
            flat.insert(flat.end(), mlp->biases[l].begin(), mlp->biases[l].end());
        }
    return flat;
}

void unflatten_params(NumberCodecParams& params, const std::vector<double>& flat) {
    std::size_t pos = 0;
    for (MlpParams* mlp : {&params.encoder, &params.decoder})
        for (int l = 0; l < 3; ++l) {
            std::copy_n(flat.begin() + pos, mlp->weights[l].size(), mlp->weights[l].begin());
            pos += mlp->weights[l].size();
            std::copy_n(flat.begin() + pos, mlp->biases[l].size(), mlp->biases[l].begin());
            pos += mlp->biases[l].size();
        }
    if (pos != flat.size())
        fail(Errc::DimensionMismatch, "flat parameter vector has wrong length");
}

namespace {

struct SampleGrad {
    std::vector<std::vector<double>> enc_w, enc_b, dec_w, dec_b;
    double loss = 0.0;
};

void sample_grad(const NumberCodecParams& p, double v, double scale, SampleGrad& g) {
    MlpTape enc_tape, dec_tape;
    mlp_forward_tape(p.encoder, fourier_features(v, p.fourier), enc_tape);
    mlp_forward_tape(p.decoder, enc_tape.out, dec_tape);
    double err = dec_tape.out[0] - v;
    g.loss += err * err;

    std::vector<double> dh;
    mlp_backward(p.decoder, dec_tape, {2.0 * err * scale}, g.dec_w, g.dec_b, dh);
    std::vector<double> dgamma;
    mlp_backward(p.encoder, enc_tape, std::move(dh), g.enc_w, g.enc_b, dgamma);
}

std::vector<double> collect_flat(const NumberCodecParams& p, const SampleGrad& g) {
    std::vector<double> flat;
    flat.reserve(p.encoder.param_count() + p.decoder.param_count());
    for (auto [w, b] : {std::pair{&g.enc_w, &g.enc_b}, std::pair{&g.dec_w, &g.dec_b}})
        for (int l = 0; l < 3; ++l) {
            flat.insert(flat.end(), (*w)[l].begin(), (*w)[l].end());
            flat.insert(flat.end(), (*b)[l].begin(), (*b)[l].end());
        }
    return flat;
}

} // namespace

BatchGrad autoencoder_batch_grad(const NumberCodecParams& params,
                                 const std::vector<double>& values) {
    if (values.empty())
        fail(Errc::EmptyIndexSet, "empty batch");
    const std::size_t n = values.size();
    const double scale = 1.0 / static_cast<double>(n);

    // Fixed chunking keeps the accumulation order independent of the thread
    // count, so parallel and serial runs are bitwise identical.
    constexpr std::size_t kChunks = 16;
    const std::size_t chunks = std::min(kChunks, n);
    std::vector<SampleGrad> partial(chunks);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t c = 0; c < chunks; ++c) {
        SampleGrad& g = partial[c];
        g.enc_w = zero_like(params.encoder.weights);
        g.enc_b = zero_like(params.encoder.biases);
        g.dec_w = zero_like(params.decoder.weights);
        g.dec_b = zero_like(params.decoder.biases);
        for (std::size_t i = c; i < n; i += chunks)
            sample_grad(params, values[i], scale, g);
    }

    for (std::size_t c = 1; c < chunks; ++c) {
        partial[0].loss += partial[c].loss;
        for (auto [dst, src] : {std::pair{&partial[0].enc_w, &partial[c].enc_w},
                                std::pair{&partial[0].enc_b, &partial[c].enc_b},
                                std::pair{&partial[0].dec_w, &partial[c].dec_w},
                                std::pair{&partial[0].dec_b, &partial[c].dec_b}})
            for (std::size_t l = 0; l < dst->size(); ++l)
                for (std::size_t j = 0; j < (*dst)[l].size(); ++j)
                    (*dst)[l][j] += (*src)[l][j];
    }

    BatchGrad out;
    out.loss = partial[0].loss * scale;
    out.grad = collect_flat(params, partial[0]);
    return out;
}

double grad_check(const NumberCodecParams& params, const std::vector<double>& values,
                  double epsilon) {
    BatchGrad analytic = autoencoder_batch_grad(params, values);
    if (!std::isfinite(analytic.loss))
        return HUGE_VAL;
    NumberCodecParams probe = params;
    std::vector<double> flat = flatten_params(params);

    double max_rel = 0.0;
    for (std::size_t j = 0; j < flat.size(); ++j) {
        double keep = flat[j];
        flat[j] = keep + epsilon;
        unflatten_params(probe, flat);
        double up = autoencoder_batch_grad(probe, values).loss;
        flat[j] = keep - epsilon;
        unflatten_params(probe, flat);
        double dn = autoencoder_batch_grad(probe, values).loss;
        flat[j] = keep;
        double numeric = (up - dn) / (2.0 * epsilon);
        if (!std::isfinite(numeric) || !std::isfinite(analytic.grad[j]))
            return HUGE_VAL;
        double denom = std::max({std::fabs(analytic.grad[j]), std::fabs(numeric), 1e-6});
        max_rel = std::max(max_rel, std::fabs(analytic.grad[j] - numeric) / denom);
    }
    return max_rel;
}

TrainResult train_autoencoder(const std::vector<double>& values, int k, int d,
                              double canvas_bound, int steps, double learning_rate,
                              std::uint64_t seed) {
    if (values.empty())
        fail(Errc::EmptyIndexSet, "train_autoencoder needs values");
    TrainResult res;
    res.params = make_codec(k, d, canvas_bound, 0.0, seed);
    std::vector<double> flat = flatten_params(res.params);

    for (int step = 0; step < steps; ++step) {
        BatchGrad g = autoencoder_batch_grad(res.params, values);
        if (!std::isfinite(g.loss))
            fail(Errc::Divergence, "loss became non-finite at step " + std::to_string(step));
        res.final_mse = g.loss;
        if (step % 100 == 0) res.loss_curve.push_back(g.loss);
        for (std::size_t j = 0; j < flat.size(); ++j)
            flat[j] -= learning_rate * g.grad[j];
        unflatten_params(res.params, flat);
    }
    BatchGrad g = autoencoder_batch_grad(res.params, values);
    if (!std::isfinite(g.loss))
        fail(Errc::Divergence, "final loss non-finite");
    res.final_mse = g.loss;
    res.loss_curve.push_back(g.loss);
    return res;
}

void save_checkpoint(const NumberCodecParams& params, const std::string& path) {
    std::vector<double> flat = flatten_params(params);
    std::ofstream bin(path, std::ios::binary);
    if (!bin) fail(Errc::IoError, "cannot write " + path);
    for (double v : flat) {
        std::uint64_t u;
        static_assert(sizeof(u) == sizeof(v));
        std::memcpy(&u, &v, 8);
        char le[8];
        for (int b = 0; b < 8; ++b) le[b] = static_cast<char>((u >> (8 * b)) & 0xFF);
        bin.write(le, 8);
    }
    bin.close();

    nlohmann::json side;
    side["k"] = params.fourier.k;
    side["d"] = params.embed_dim();
    side["M"] = params.canvas_bound;
    side["noise_sigma"] = params.noise_sigma;
    side["encoder_dims"] = params.encoder.layer_dims;
    side["decoder_dims"] = params.decoder.layer_dims;
    side["count"] = flat.size();
    std::ofstream js(path + ".json");
    if (!js) fail(Errc::IoError, "cannot write " + path + ".json");
    js << side.dump(2) << "\n";
}

NumberCodecParams load_checkpoint(const std::string& path) {
    std::ifstream js(path + ".json");
    if (!js) fail(Errc::IoError, "cannot read " + path + ".json");
    nlohmann::json side = nlohmann::json::parse(js, nullptr, false);
    if (side.is_discarded())
        fail(Errc::BadConfig, "sidecar is not valid JSON: " + path + ".json");

    NumberCodecParams p;
    p.fourier.k = side.at("k").get<int>();
    p.canvas_bound = side.at("M").get<double>();
    p.noise_sigma = side.at("noise_sigma").get<double>();
    auto enc = side.at("encoder_dims").get<std::array<int, 4>>();
    auto dec = side.at("decoder_dims").get<std::array<int, 4>>();
    p.encoder = make_mlp(enc[0], enc[1], enc[3]);
    p.decoder = make_mlp(dec[0], dec[1], dec[3]);
    if (p.encoder.layer_dims != enc || p.decoder.layer_dims != dec)
        fail(Errc::BadConfig, "sidecar dims are not a 2-hidden-layer shape");

    std::size_t count = p.encoder.param_count() + p.decoder.param_count();
    if (side.at("count").get<std::size_t>() != count)
        fail(Errc::BadConfig, "sidecar count disagrees with dims");
    std::ifstream bin(path, std::ios::binary);
    if (!bin) fail(Errc::IoError, "cannot read " + path);
    std::vector<double> flat(count);
    for (double& v : flat) {
        char le[8];
        if (!bin.read(le, 8))
            fail(Errc::IoError, "checkpoint truncated: " + path);
        std::uint64_t u = 0;
        for (int b = 0; b < 8; ++b)
            u |= static_cast<std::uint64_t>(static_cast<unsigned char>(le[b])) << (8 * b);
        std::memcpy(&v, &u, 8);
    }
    char extra;
    if (bin.read(&extra, 1))
        fail(Errc::BadConfig, "checkpoint longer than sidecar count");
    unflatten_params(p, flat);
    return p;
}

} // namespace svgnum
