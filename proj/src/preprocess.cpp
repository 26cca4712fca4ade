#include "svgnum/preprocess.hpp"

#include <cmath>

#include "svgnum/errors.hpp"
#include "svgnum/numeric.hpp"
#include "svgnum/ssim.hpp"

namespace svgnum {

const char* filter_reason_name(FilterReason r) {
    switch (r) {
    case FilterReason::Ok: return "Ok";
    case FilterReason::OutOfBounds: return "OutOfBounds";
    case FilterReason::LowSsim: return "LowSsim";
    case FilterReason::ParseFailure: return "ParseFailure";
    }
    return "?";
}

double max_abs_numeric(const SvgDocument& doc) {
    double m = 0.0;
    auto feed = [&m](double v) { m = std::max(m, std::fabs(v)); };
    for (double v : doc.view_box) feed(v);
    for (const auto& el : doc.paths) {
        if (el.stroke_width) feed(*el.stroke_width);
        for (const auto& cmd : to_absolute(el.commands)) {
            if (cmd.op == 'A') {
                feed(cmd.params[0]); // rx
                feed(cmd.params[1]); // ry
                feed(cmd.params[5]); // x
                feed(cmd.params[6]); // y
            } else {
                for (double p : cmd.params) feed(p);
            }
        }
    }
    return m;
}

double max_abs_emitted(const SvgDocument& doc, int precision) {
    struct BoundSink : CanonicalSink {
        double m = 0.0;
        int precision;
        explicit BoundSink(int p) : precision(p) {}
        void structure(std::string_view) override {}
        void opcode(char) override {}
        void number(double v) override {
            m = std::max(m, std::fabs(round_to_precision(v, precision)));
        }
    } sink(precision);
    emit_canonical(doc, sink);
    return sink.m;
}

SvgDocument apply_scale(const SvgDocument& doc, double s) {
    if (!(s > 0))
        fail(Errc::DegenerateDocument, "scale factor must be positive");
    SvgDocument out = doc;
    out.width *= s;
    out.height *= s;
    for (double& v : out.view_box) v *= s;
    for (auto& el : out.paths) {
        if (el.stroke_width) el.stroke_width = *el.stroke_width * s;
        for (auto& cmd : el.commands) {
            if (cmd.op == 'A' || cmd.op == 'a') {
                cmd.params[0] *= s; // rx
                cmd.params[1] *= s; // ry
                cmd.params[5] *= s; // x
                cmd.params[6] *= s; // y
            } else {
                for (double& p : cmd.params) p *= s;
            }
        }
    }
    return out;
}

NormalizeResult normalize_to_canvas(const SvgDocument& doc, const CanvasConfig& cfg) {
    const double m = max_abs_numeric(doc);
    if (m == 0.0)
        fail(Errc::DegenerateDocument, "all scalable numerics are zero");
    const double s = cfg.canvas_bound / m;
    return NormalizeResult{apply_scale(doc, s), s};
}

FilterVerdict filter_check(const SvgDocument& original, const SvgDocument& normalized,
                           const CanvasConfig& cfg, const Renderer& renderer) {
    FilterVerdict v;
    v.max_abs_value = max_abs_emitted(normalized, cfg.precision);
    if (*v.max_abs_value > cfg.canvas_bound) {
        v.reason = FilterReason::OutOfBounds;
        return v;
    }
    RasterImage ra, rb;
    try {
        ra = renderer(original);
        rb = renderer(normalized);
    } catch (const Error&) {
        v.reason = FilterReason::ParseFailure;
        return v;
    }
    double score;
    try {
        score = ssim(ra, rb);
    } catch (const Error&) {
        v.reason = FilterReason::ParseFailure;
        return v;
    }
    v.ssim = score;
    if (score < cfg.ssim_threshold) {
        v.reason = FilterReason::LowSsim;
        return v;
    }
    v.accepted = true;
    v.reason = FilterReason::Ok;
    return v;
}

} // namespace svgnum
