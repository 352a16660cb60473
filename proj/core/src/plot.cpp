#include "tccross/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "tccross/errors.hpp"

namespace tc {

namespace {

constexpr double kPanelW = 640.0, kPanelH = 300.0;
constexpr double kMarginL = 70.0, kMarginR = 24.0, kMarginT = 30.0, kMarginB = 46.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

struct Pt {
    double x, y;
};

struct Series {
    std::string label;
    std::string color;
    std::vector<std::vector<Pt>> segments;  // split at missing values
};

struct Panel {
    std::string xlabel, ylabel;
    std::vector<Series> series;
};

// Two decimal places is below SVG pixel resolution and keeps files stable.
std::string px(double v) {
    return format_double(std::round(v * 100.0) / 100.0);
}

struct Ticks {
    double lo, hi, step;
};

Ticks nice_ticks(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.5;
        lo -= pad;
        hi += pad;
    }
    const double raw = (hi - lo) / 4.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0 * mag;
    if (norm < 1.5)
        step = mag;
    else if (norm < 3.5)
        step = 2.0 * mag;
    else if (norm < 7.5)
        step = 5.0 * mag;
    return {lo, hi, step};
}

void panel_range(const Panel& panel, double& xlo, double& xhi, double& ylo,
                 double& yhi) {
    xlo = ylo = std::numeric_limits<double>::infinity();
    xhi = yhi = -xlo;
    for (const Series& s : panel.series)
        for (const auto& seg : s.segments)
            for (const Pt& p : seg) {
                xlo = std::min(xlo, p.x);
                xhi = std::max(xhi, p.x);
                ylo = std::min(ylo, p.y);
                yhi = std::max(yhi, p.y);
            }
    if (!std::isfinite(xlo)) {  // empty panel
        xlo = 0.0; xhi = 1.0; ylo = 0.0; yhi = 1.0;
    }
    auto pad = [](double& lo, double& hi) {
        if (hi > lo) {
            const double p = 0.05 * (hi - lo);
            lo -= p;
            hi += p;
        } else {
            const double p = std::max(1.0, std::abs(lo)) * 0.1;
            lo -= p;
            hi += p;
        }
    };
    pad(xlo, xhi);
    pad(ylo, yhi);
}

void render_panel(std::ostringstream& svg, const Panel& panel, double y0) {
    double xlo, xhi, ylo, yhi;
    panel_range(panel, xlo, xhi, ylo, yhi);

    const double plot_x = kMarginL, plot_y = y0 + kMarginT;
    const double plot_w = kPanelW - kMarginL - kMarginR;
    const double plot_h = kPanelH - kMarginT - kMarginB;
    auto sx = [&](double x) { return plot_x + (x - xlo) / (xhi - xlo) * plot_w; };
    auto sy = [&](double y) { return plot_y + plot_h - (y - ylo) / (yhi - ylo) * plot_h; };

    svg << "<rect x=\"" << px(plot_x) << "\" y=\"" << px(plot_y) << "\" width=\""
        << px(plot_w) << "\" height=\"" << px(plot_h)
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    const Ticks xt = nice_ticks(xlo, xhi);
    for (double t = std::ceil(xt.lo / xt.step) * xt.step; t <= xt.hi + 1e-12 * xt.step;
         t += xt.step) {
        const double X = sx(t);
        svg << "<line x1=\"" << px(X) << "\" y1=\"" << px(plot_y + plot_h)
            << "\" x2=\"" << px(X) << "\" y2=\"" << px(plot_y + plot_h + 5)
            << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << px(X) << "\" y=\"" << px(plot_y + plot_h + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">"
            << format_double(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    const Ticks yt = nice_ticks(ylo, yhi);
    for (double t = std::ceil(yt.lo / yt.step) * yt.step; t <= yt.hi + 1e-12 * yt.step;
         t += yt.step) {
        const double Y = sy(t);
        svg << "<line x1=\"" << px(plot_x - 5) << "\" y1=\"" << px(Y) << "\" x2=\""
            << px(plot_x) << "\" y2=\"" << px(Y) << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << px(plot_x - 8) << "\" y=\"" << px(Y + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">"
            << format_double(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }

    svg << "<text x=\"" << px(plot_x + plot_w / 2) << "\" y=\""
        << px(y0 + kPanelH - 10) << "\" font-size=\"13\" text-anchor=\"middle\">"
        << panel.xlabel << "</text>\n";
    svg << "<text x=\"" << px(16.0) << "\" y=\"" << px(plot_y + plot_h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
        << px(16.0) << ' ' << px(plot_y + plot_h / 2) << ")\">" << panel.ylabel
        << "</text>\n";

    for (const Series& s : panel.series) {
        for (const auto& seg : s.segments) {
            if (seg.empty())
                continue;
            if (seg.size() == 1) {
                svg << "<circle cx=\"" << px(sx(seg[0].x)) << "\" cy=\""
                    << px(sy(seg[0].y)) << "\" r=\"2.5\" fill=\"" << s.color
                    << "\"/>\n";
                continue;
            }
            svg << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const Pt& p : seg)
                svg << px(sx(p.x)) << ',' << px(sy(p.y)) << ' ';
            svg << "\"/>\n";
        }
    }

    double ly = plot_y + 14;
    for (const Series& s : panel.series) {
        if (s.label.empty())
            continue;
        const double lx = plot_x + plot_w - 150;
        svg << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
            << px(lx + 24) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << px(lx + 30) << "\" y=\"" << px(ly)
            << "\" font-size=\"11\">" << s.label << "</text>\n";
        ly += 16;
    }
}

std::string render_svg(const std::vector<Panel>& panels) {
    std::ostringstream svg;
    const double height = kPanelH * panels.size();
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kPanelW)
        << "\" height=\"" << px(height) << "\" viewBox=\"0 0 " << px(kPanelW) << ' '
        << px(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
        render_panel(svg, panels[i], kPanelH * i);
    svg << "</svg>\n";
    return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file '" + path + "'");
    out << content;
}

// Column of optional doubles; validates presence and parses every row.
std::vector<std::optional<double>> column_values(const CsvTable& table,
                                                 const std::string& name) {
    const std::size_t col = table.column(name);
    std::vector<std::optional<double>> out(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        out[r] = table.value(r, col);
    return out;
}

// Builds a gap-splitting series from parallel x/y columns.
Series make_series(const std::vector<std::optional<double>>& x,
                   const std::vector<std::optional<double>>& y,
                   const std::string& label, int color_idx) {
    Series s;
    s.label = label;
    s.color = kPalette[color_idx % kPaletteSize];
    s.segments.emplace_back();
    for (std::size_t r = 0; r < x.size(); ++r) {
        if (x[r] && y[r]) {
            s.segments.back().push_back({*x[r], *y[r]});
        } else if (!s.segments.back().empty()) {
            s.segments.emplace_back();
        }
    }
    return s;
}

using OptCol = std::vector<std::optional<double>>;

OptCol transform(const OptCol& in, double (*fn)(double)) {
    OptCol out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        if (in[i])
            out[i] = fn(*in[i]);
    return out;
}

std::vector<Panel> build_variational(const CsvTable& t) {
    const OptCol x = column_values(t, "rho_target");
    Panel a{"rho_ex", "alpha", {make_series(x, column_values(t, "alpha"), "", 0)}};
    Panel b{"rho_ex", "theta", {make_series(x, column_values(t, "theta"), "", 1)}};
    Panel c{"rho_ex", "(mu - omega_c)/g",
            {make_series(x, column_values(t, "mu_scaled"), "", 2)}};
    return {a, b, c};
}

std::vector<Panel> build_observables(const CsvTable& t) {
    const OptCol x = column_values(t, "rho_ex");
    Panel a{"rho_ex", "mean photons",
            {make_series(x, column_values(t, "light_mean"), "", 0)}};
    Panel b{"rho_ex", "<Jz>",
            {make_series(x, column_values(t, "jz"), "<Jz>", 0),
             make_series(x, column_values(t, "jz_abs"), "|<Jz>|", 1)}};
    Panel c{"rho_ex", "(mu - omega_c)/g",
            {make_series(x, column_values(t, "mu_scaled"), "", 2)}};
    Panel d{"rho_ex", "linear entropy",
            {make_series(x, column_values(t, "lin_entropy"), "", 3)}};
    return {a, b, c, d};
}

std::vector<Panel> build_correlations(const CsvTable& t) {
    const OptCol x = column_values(t, "rho_ex");
    Panel a{"rho_ex", "g2(0)", {make_series(x, column_values(t, "g2"), "", 0)}};
    Panel b{"rho_ex", "linear entropy",
            {make_series(x, column_values(t, "lin_entropy"), "", 1)}};
    return {a, b};
}

std::vector<Panel> build_moments_light(const CsvTable& t) {
    const OptCol x = column_values(t, "rho_ex");
    Panel a{"rho_ex", "photon moments",
            {make_series(x, column_values(t, "light_mean"), "mean", 0),
             make_series(x, column_values(t, "light_var"), "variance", 1)}};
    Panel b{"rho_ex", "skewness",
            {make_series(x, column_values(t, "light_skew"), "skewness", 0),
             make_series(x, column_values(t, "poisson_skew"), "poissonian", 1)}};
    Panel c{"rho_ex", "kurtosis",
            {make_series(x, column_values(t, "light_kurt"), "kurtosis", 0),
             make_series(x, column_values(t, "poisson_kurt"), "poissonian", 1)}};
    return {a, b, c};
}

std::vector<Panel> build_moments_matter(const CsvTable& t) {
    const OptCol x = column_values(t, "rho_ex");
    const OptCol mean = column_values(t, "matter_mean");
    // Poissonian references derived from the matter mean.
    OptCol ref_skew(mean.size()), ref_kurt(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i)
        if (mean[i] && *mean[i] > 0.0) {
            ref_skew[i] = 1.0 / std::sqrt(*mean[i]);
            ref_kurt[i] = 3.0 + 1.0 / *mean[i];
        }
    Panel a{"rho_ex", "matter moments",
            {make_series(x, mean, "mean", 0),
             make_series(x, column_values(t, "matter_var"), "variance", 1)}};
    Panel b{"rho_ex", "skewness",
            {make_series(x, column_values(t, "matter_skew"), "skewness", 0),
             make_series(x, ref_skew, "poissonian", 1)}};
    Panel c{"rho_ex", "kurtosis",
            {make_series(x, column_values(t, "matter_kurt"), "kurtosis", 0),
             make_series(x, ref_kurt, "poissonian", 1)}};
    return {a, b, c};
}

std::vector<Panel> build_scaling(const CsvTable& t) {
    const std::size_t rho_col = t.column("rho_ex");
    const OptCol x = column_values(t, "omega_a");
    const OptCol y = column_values(t, "jz_scaled");
    // Group rows into one curve per distinct density, keyed by the exact
    // cell text so no epsilon comparisons are needed.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& key = t.rows[r][rho_col];
        if (!groups.count(key))
            order.push_back(key);
        groups[key].push_back(r);
    }
    Panel panel{"omega_a", "scaled inversion", {}};
    int color = 0;
    for (const std::string& key : order) {
        // compact the group's rows so interleaved densities stay connected
        OptCol gx, gy;
        for (std::size_t r : groups[key]) {
            gx.push_back(x[r]);
            gy.push_back(y[r]);
        }
        panel.series.push_back(make_series(gx, gy, "rho_ex=" + key, color++));
    }
    return {panel};
}

std::string heatmap_svg(int dim, const std::vector<double>& values) {
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) vmax = 1.0;

    const double cell = std::max(2.0, std::min(12.0, 560.0 / dim));
    const double w = 80.0 + dim * cell, h = 50.0 + dim * cell;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(w)
        << "\" height=\"" << px(h) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const double v = values[static_cast<std::size_t>(r) * dim + c] / vmax;
            // diverging blue-white-red
            int red, green, blue;
            if (v >= 0.0) {
                red = 255;
                green = blue = static_cast<int>(std::lround(255.0 * (1.0 - v)));
            } else {
                blue = 255;
                red = green = static_cast<int>(std::lround(255.0 * (1.0 + v)));
            }
            svg << "<rect x=\"" << px(60.0 + c * cell) << "\" y=\""
                << px(30.0 + r * cell) << "\" width=\"" << px(cell) << "\" height=\""
                << px(cell) << "\" fill=\"rgb(" << red << ',' << green << ',' << blue
                << ")\"/>\n";
        }
    }
    svg << "<text x=\"" << px(60.0 + dim * cell / 2) << "\" y=\""
        << px(42.0 + dim * cell)
        << "\" font-size=\"12\" text-anchor=\"middle\">basis index (photons "
           "decrease)</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::string> render_tomography(const CsvTable& t,
                                           const std::string& out_path) {
    const std::size_t nu_col = t.column("nu");
    t.column("row_two_m");
    t.column("row_n");
    t.column("col_two_m");
    t.column("col_n");
    const std::size_t val_col = t.column("value");

    std::vector<int> order;
    std::map<int, std::vector<double>> values;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto nu_v = t.value(r, nu_col);
        const auto v = t.value(r, val_col);
        if (!nu_v || !v)
            throw ConfigError("tomography csv has empty nu/value cells");
        const int nu = static_cast<int>(*nu_v);
        if (!values.count(nu))
            order.push_back(nu);
        values[nu].push_back(*v);
    }

    std::string stem = out_path;
    if (stem.size() >= 4 && stem.substr(stem.size() - 4) == ".svg")
        stem.resize(stem.size() - 4);

    std::vector<std::string> written;
    for (int nu : order) {
        const auto& vals = values[nu];
        const int dim = static_cast<int>(std::lround(std::sqrt(double(vals.size()))));
        if (static_cast<std::size_t>(dim) * dim != vals.size())
            throw ConfigError("tomography section for nu = " + std::to_string(nu) +
                              " is not a square matrix");
        const std::string path = stem + "_nu" + std::to_string(nu) + ".svg";
        write_file(path, heatmap_svg(dim, vals));
        written.push_back(path);
    }
    return written;
}

} // namespace

std::vector<std::string> known_figures() {
    return {"variational", "observables", "correlations", "moments-light",
            "moments-matter", "scaling", "tomography"};
}

std::vector<std::string> render_figure(const CsvTable& table,
                                       const std::string& figure,
                                       const std::string& out_path) {
    std::vector<Panel> panels;
    if (figure == "variational")
        panels = build_variational(table);
    else if (figure == "observables")
        panels = build_observables(table);
    else if (figure == "correlations")
        panels = build_correlations(table);
    else if (figure == "moments-light")
        panels = build_moments_light(table);
    else if (figure == "moments-matter")
        panels = build_moments_matter(table);
    else if (figure == "scaling")
        panels = build_scaling(table);
    else if (figure == "tomography")
        return render_tomography(table, out_path);
    else
        throw ConfigError("unknown figure '" + figure + "'");

    write_file(out_path, render_svg(panels));
    return {out_path};
}

} // namespace tc
