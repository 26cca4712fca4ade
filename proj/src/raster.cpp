#include "svgnum/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "svgnum/errors.hpp"

namespace svgnum {

namespace {

using Pt = std::array<double, 2>;

constexpr int kMaxSplitDepth = 24;

double dist_point_segment(const Pt& p, const Pt& a, const Pt& b) {
    double vx = b[0] - a[0], vy = b[1] - a[1];
    double wx = p[0] - a[0], wy = p[1] - a[1];
    double vv = vx * vx + vy * vy;
    double t = vv > 0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
    double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

void flatten_cubic(const Pt& p0, const Pt& p1, const Pt& p2, const Pt& p3,
                   double tol, int depth, std::vector<Pt>& out) {
    if (depth >= kMaxSplitDepth ||
        (dist_point_segment(p1, p0, p3) <= tol && dist_point_segment(p2, p0, p3) <= tol)) {
        out.push_back(p3);
        return;
    }
    auto mid = [](const Pt& a, const Pt& b) { return Pt{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2}; };
    Pt p01 = mid(p0, p1), p12 = mid(p1, p2), p23 = mid(p2, p3);
    Pt p012 = mid(p01, p12), p123 = mid(p12, p23);
    Pt c = mid(p012, p123);
    flatten_cubic(p0, p01, p012, c, tol, depth + 1, out);
    flatten_cubic(c, p123, p23, p3, tol, depth + 1, out);
}

void flatten_quad(const Pt& p0, const Pt& p1, const Pt& p2, double tol, std::vector<Pt>& out) {
    // exact degree elevation to cubic
    Pt c1{p0[0] + 2.0 / 3.0 * (p1[0] - p0[0]), p0[1] + 2.0 / 3.0 * (p1[1] - p0[1])};
    Pt c2{p2[0] + 2.0 / 3.0 * (p1[0] - p2[0]), p2[1] + 2.0 / 3.0 * (p1[1] - p2[1])};
    flatten_cubic(p0, c1, c2, p2, tol, 0, out);
}

// Endpoint-to-center arc conversion (SVG implementation notes F.6.5/F.6.6),
// then cubic segments spanning at most a quarter turn.
void flatten_arc(const Pt& p0, double rx, double ry, double rot_deg,
                 bool large_arc, bool sweep, const Pt& p1, double tol,
                 std::vector<Pt>& out) {
    if (p0 == p1) return;
    rx = std::fabs(rx);
    ry = std::fabs(ry);
    if (rx == 0 || ry == 0) {
        out.push_back(p1);
        return;
    }
    const double phi = rot_deg * std::numbers::pi / 180.0;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double dx2 = (p0[0] - p1[0]) / 2, dy2 = (p0[1] - p1[1]) / 2;
    const double x1p = cphi * dx2 + sphi * dy2;
    const double y1p = -sphi * dx2 + cphi * dy2;

    double lam = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
    if (lam > 1) { // radii too small: scale them up
        double s = std::sqrt(lam);
        rx *= s;
        ry *= s;
    }
    double num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p;
    double den = rx * rx * y1p * y1p + ry * ry * x1p * x1p;
    double coef = den > 0 ? std::sqrt(std::max(0.0, num / den)) : 0.0;
    if (large_arc == sweep) coef = -coef;
    const double cxp = coef * rx * y1p / ry;
    const double cyp = -coef * ry * x1p / rx;
    const double cx = cphi * cxp - sphi * cyp + (p0[0] + p1[0]) / 2;
    const double cy = sphi * cxp + cphi * cyp + (p0[1] + p1[1]) / 2;

    auto angle = [](double ux, double uy, double vx, double vy) {
        double dot = ux * vx + uy * vy;
        double len = std::sqrt((ux * ux + uy * uy) * (vx * vx + vy * vy));
        double a = std::acos(std::clamp(dot / len, -1.0, 1.0));
        return (ux * vy - uy * vx) < 0 ? -a : a;
    };
    double theta1 = angle(1, 0, (x1p - cxp) / rx, (y1p - cyp) / ry);
    double dtheta = angle((x1p - cxp) / rx, (y1p - cyp) / ry,
                          (-x1p - cxp) / rx, (-y1p - cyp) / ry);
    if (!sweep && dtheta > 0) dtheta -= 2 * std::numbers::pi;
    if (sweep && dtheta < 0) dtheta += 2 * std::numbers::pi;

    const int segments = std::max(1, static_cast<int>(
        std::ceil(std::fabs(dtheta) / (std::numbers::pi / 2))));
    const double delta = dtheta / segments;
    // tangent-length factor for a cubic approximating a `delta` arc
    const double t = 4.0 / 3.0 * std::tan(delta / 4.0);

    Pt prev = p0;
    for (int s = 0; s < segments; ++s) {
        double a0 = theta1 + s * delta;
        double a1 = a0 + delta;
        auto point = [&](double a) {
            double px = rx * std::cos(a), py = ry * std::sin(a);
            return Pt{cphi * px - sphi * py + cx, sphi * px + cphi * py + cy};
        };
        auto deriv = [&](double a) {
            double px = -rx * std::sin(a), py = ry * std::cos(a);
            return Pt{cphi * px - sphi * py, sphi * px + cphi * py};
        };
        Pt e = point(a1);
        Pt d0 = deriv(a0), d1 = deriv(a1);
        Pt c1{prev[0] + t * d0[0], prev[1] + t * d0[1]};
        Pt c2{e[0] - t * d1[0], e[1] - t * d1[1]};
        flatten_cubic(prev, c1, c2, e, tol, 0, out);
        prev = e;
    }
}

} // namespace

std::vector<Polyline> flatten_path(const std::vector<PathCommand>& commands,
                                   double tolerance) {
    if (!(tolerance > 0))
        fail(Errc::RenderFailure, "tolerance must be positive");
    std::vector<Polyline> out;
    const auto abs_cmds = to_absolute(commands);

    Polyline cur;
    Pt pos{0, 0}, start{0, 0};
    Pt prev_cubic_ctrl{0, 0}, prev_quad_ctrl{0, 0};
    bool had_cubic = false, had_quad = false;

    auto begin_subpath = [&](const Pt& p) {
        if (cur.points.size() > 1) out.push_back(std::move(cur));
        cur = Polyline{};
        cur.points.push_back(p);
    };

    for (const auto& cmd : abs_cmds) {
        const auto& p = cmd.params;
        bool cubic_like = false, quad_like = false;
        switch (cmd.op) {
        case 'M':
            pos = start = {p[0], p[1]};
            begin_subpath(pos);
            break;
        case 'L':
            pos = {p[0], p[1]};
            cur.points.push_back(pos);
            break;
        case 'H':
            pos[0] = p[0];
            cur.points.push_back(pos);
            break;
        case 'V':
            pos[1] = p[0];
            cur.points.push_back(pos);
            break;
        case 'C': {
            Pt c1{p[0], p[1]}, c2{p[2], p[3]}, e{p[4], p[5]};
            flatten_cubic(pos, c1, c2, e, tolerance, 0, cur.points);
            prev_cubic_ctrl = c2;
            pos = e;
            cubic_like = true;
            break;
        }
        case 'S': {
            Pt c1 = had_cubic ? Pt{2 * pos[0] - prev_cubic_ctrl[0], 2 * pos[1] - prev_cubic_ctrl[1]}
                              : pos;
            Pt c2{p[0], p[1]}, e{p[2], p[3]};
            flatten_cubic(pos, c1, c2, e, tolerance, 0, cur.points);
            prev_cubic_ctrl = c2;
            pos = e;
            cubic_like = true;
            break;
        }
        case 'Q': {
            Pt c{p[0], p[1]}, e{p[2], p[3]};
            flatten_quad(pos, c, e, tolerance, cur.points);
            prev_quad_ctrl = c;
            pos = e;
            quad_like = true;
            break;
        }
        case 'T': {
            Pt c = had_quad ? Pt{2 * pos[0] - prev_quad_ctrl[0], 2 * pos[1] - prev_quad_ctrl[1]}
                            : pos;
            Pt e{p[0], p[1]};
            flatten_quad(pos, c, e, tolerance, cur.points);
            prev_quad_ctrl = c;
            pos = e;
            quad_like = true;
            break;
        }
        case 'A': {
            Pt e{p[5], p[6]};
            flatten_arc(pos, p[0], p[1], p[2], p[3] != 0, p[4] != 0, e, tolerance, cur.points);
            pos = e;
            break;
        }
        case 'Z':
            cur.closed = true;
            if (cur.points.size() > 1) out.push_back(std::move(cur));
            cur = Polyline{};
            pos = start;
            cur.points.push_back(pos);
            break;
        }
        had_cubic = cubic_like;
        had_quad = quad_like;
    }
    if (cur.points.size() > 1) out.push_back(std::move(cur));
    return out;
}

std::optional<double> fill_luminance(const std::string& color) {
    if (color == "none") return std::nullopt;
    if (color == "black") return 0.0;
    if (color == "white") return 1.0;
    if (!color.empty() && color[0] == '#' && (color.size() == 4 || color.size() == 7)) {
        auto hex = [&](std::size_t i, std::size_t n) -> int {
            int v = 0;
            for (std::size_t j = 0; j < n; ++j) {
                char c = color[i + j];
                int d = (c >= '0' && c <= '9')   ? c - '0'
                        : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                        : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                                 : -1;
                if (d < 0) return -1;
                v = v * 16 + d;
            }
            return v;
        };
        int r, g, b;
        if (color.size() == 4) {
            r = hex(1, 1); g = hex(2, 1); b = hex(3, 1);
            if (r >= 0) { r *= 17; g *= 17; b *= 17; }
        } else {
            r = hex(1, 2); g = hex(3, 2); b = hex(5, 2);
        }
        if (r >= 0 && g >= 0 && b >= 0)
            return (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
    }
    return 0.0; // unrecognized colors ink as black
}

namespace {

struct Edge {
    double x0, y0, x1, y1; // pixel space, y0 < y1
    int dir;               // +1 when the original edge points down
};

struct PreparedPath {
    std::vector<Edge> edges;
    double ink = 0.0;
    bool even_odd = false;
    bool skip = false;
};

std::vector<PreparedPath> prepare(const SvgDocument& doc, int width, int height) {
    const double vbw = doc.view_box[2], vbh = doc.view_box[3];
    const double sx = width / vbw, sy = height / vbh;
    const double tol_user = 0.25 / std::max(sx, sy);

    std::vector<PreparedPath> prepared;
    for (const auto& el : doc.paths) {
        PreparedPath pp;
        auto ink = fill_luminance(el.fill ? *el.fill : doc.default_fill);
        if (!ink) {
            pp.skip = true;
            prepared.push_back(std::move(pp));
            continue;
        }
        pp.ink = *ink;
        pp.even_odd = el.fill_rule && *el.fill_rule == "evenodd";
        for (const auto& poly : flatten_path(el.commands, tol_user)) {
            auto pts = poly.points;
            if (pts.size() < 2) continue;
            if (pts.front() != pts.back()) pts.push_back(pts.front()); // fill closes
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                double x0 = (pts[i][0] - doc.view_box[0]) * sx;
                double y0 = (pts[i][1] - doc.view_box[1]) * sy;
                double x1 = (pts[i + 1][0] - doc.view_box[0]) * sx;
                double y1 = (pts[i + 1][1] - doc.view_box[1]) * sy;
                if (y0 == y1) continue;
                Edge e{x0, y0, x1, y1, +1};
                if (y0 > y1) {
                    std::swap(e.x0, e.x1);
                    std::swap(e.y0, e.y1);
                    e.dir = -1;
                }
                pp.edges.push_back(e);
            }
        }
        prepared.push_back(std::move(pp));
    }
    return prepared;
}

void render_row(const std::vector<PreparedPath>& paths, int width, int y,
                double* row, std::vector<double>& coverage,
                std::vector<std::pair<double, int>>& crossings) {
    for (int x = 0; x < width; ++x) row[x] = 1.0; // white background
    for (const auto& pp : paths) {
        if (pp.skip) continue;
        std::fill(coverage.begin(), coverage.end(), 0.0);
        for (int s = 0; s < 4; ++s) {
            const double sy = y + (s + 0.5) / 4.0;
            crossings.clear();
            for (const auto& e : pp.edges) {
                if (sy < e.y0 || sy >= e.y1) continue;
                double x = e.x0 + (sy - e.y0) * (e.x1 - e.x0) / (e.y1 - e.y0);
                crossings.emplace_back(x, e.dir);
            }
            std::sort(crossings.begin(), crossings.end());
            int winding = 0;
            double span_start = 0;
            bool inside = false;
            for (const auto& [x, dir] : crossings) {
                bool was_inside = inside;
                winding += dir;
                inside = pp.even_odd ? (winding & 1) : (winding != 0);
                if (!was_inside && inside) {
                    span_start = x;
                } else if (was_inside && !inside) {
                    // accumulate [span_start, x) with 1/4 subsample weight
                    double a = std::clamp(span_start, 0.0, static_cast<double>(width));
                    double b = std::clamp(x, 0.0, static_cast<double>(width));
                    if (b <= a) continue;
                    int xa = static_cast<int>(a), xb = static_cast<int>(b);
                    if (xa == xb) {
                        coverage[xa] += 0.25 * (b - a);
                    } else {
                        coverage[xa] += 0.25 * (xa + 1 - a);
                        for (int px = xa + 1; px < xb; ++px) coverage[px] += 0.25;
                        if (xb < width) coverage[xb] += 0.25 * (b - xb);
                    }
                }
            }
        }
        for (int x = 0; x < width; ++x) {
            double c = std::min(coverage[x], 1.0);
            if (c > 0) row[x] = row[x] * (1.0 - c) + pp.ink * c;
        }
    }
}

RasterImage rasterize_impl(const SvgDocument& doc, int width, int height, bool parallel) {
    validate(doc);
    if (width <= 0 || height <= 0)
        fail(Errc::RenderFailure, "raster size must be positive");
    if (!(doc.view_box[2] > 0) || !(doc.view_box[3] > 0))
        fail(Errc::RenderFailure, "degenerate viewBox");

    const auto paths = prepare(doc, width, height);
    RasterImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, 1.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int y = 0; y < height; ++y) {
        std::vector<double> coverage(width, 0.0);
        std::vector<std::pair<double, int>> crossings;
        render_row(paths, width, y, img.pixels.data() + static_cast<std::size_t>(y) * width,
                   coverage, crossings);
    }
    (void)parallel;
    return img;
}

} // namespace

RasterImage rasterize(const SvgDocument& doc, int width, int height) {
    return rasterize_impl(doc, width, height, true);
}

RasterImage rasterize_serial(const SvgDocument& doc, int width, int height) {
    return rasterize_impl(doc, width, height, false);
}

void write_pgm(const RasterImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot write " + path);
    f << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (double v : img.pixels) {
        int g = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
        f.put(static_cast<char>(g));
    }
}

RasterImage read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Errc::IoError, "cannot read " + path);
    std::string magic;
    f >> magic;
    if (magic != "P5") fail(Errc::IoError, path + " is not binary PGM");
    auto next_int = [&]() {
        int v;
        f >> std::ws;
        while (f.peek() == '#') {
            std::string line;
            std::getline(f, line);
            f >> std::ws;
        }
        if (!(f >> v)) fail(Errc::IoError, "bad PGM header in " + path);
        return v;
    };
    int w = next_int(), h = next_int(), maxval = next_int();
    if (w <= 0 || h <= 0 || maxval != 255)
        fail(Errc::IoError, "unsupported PGM in " + path);
    f.get(); // single whitespace after maxval
    RasterImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (double& v : img.pixels) {
        int c = f.get();
        if (c == EOF) fail(Errc::IoError, "truncated PGM " + path);
        v = c / 255.0;
    }
    return img;
}

} // namespace svgnum
