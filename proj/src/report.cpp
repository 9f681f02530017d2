#include "corrfilt/report.hpp"

#include "corrfilt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#ifndef CORRFILT_VERSION
#define CORRFILT_VERSION "0.0.0"
#endif

namespace corrfilt {

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string sig6(double v) { return fmt("%.6g", v); }

void require_results(const ScenarioResult& result) {
    if (result.curves.empty()) {
        throw run_error("no results to write");
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw run_error("cannot write '" + path.string() + "'");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw run_error("failed writing '" + path.string() + "'");
    }
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// 1-2-5 tick spacing giving roughly `target` intervals over [lo, hi].
double tick_step(double lo, double hi, int target) {
    const double raw = (hi - lo) / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * magnitude) {
            return m * magnitude;
        }
    }
    return 10.0 * magnitude;
}

std::string step_text(const MsdCurve& curve) {
    if (curve.step_sizes.empty()) {
        return {};
    }
    std::string text = " (\xCE\xBC=";
    for (std::size_t s = 0; s < curve.step_sizes.size(); ++s) {
        text += (s > 0 ? "/" : "") + fmt("%.4g", curve.step_sizes[s]);
    }
    return text + ")";
}

std::string legend_text(const MsdCurve& curve) {
    std::string text = std::string(display_name(curve.algorithm));
    if (const auto bracket = curve.label.find('['); bracket != std::string::npos) {
        text += " " + curve.label.substr(bracket);
    }
    return text + step_text(curve);
}

constexpr std::array<const char*, 10> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                              "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

struct Series {
    std::string legend;
    std::vector<std::pair<double, double>> points;
};

struct Frame {
    double width = 900.0;
    double height = 540.0;
    double left = 80.0;
    double right = 250.0;
    double top = 40.0;
    double bottom = 60.0;
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

    double px(double x) const { return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right); }
    double py(double y) const { return top + (y_hi - y) / (y_hi - y_lo) * (height - top - bottom); }
};

void write_svg(std::ostream& out, const ScenarioResult& result, const std::vector<Series>& series,
               const std::string& x_label, bool markers) {
    Frame f;
    f.x_lo = std::numeric_limits<double>::infinity();
    f.x_hi = -f.x_lo;
    f.y_lo = f.x_lo;
    f.y_hi = -f.x_lo;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            f.x_lo = std::min(f.x_lo, x);
            f.x_hi = std::max(f.x_hi, x);
            f.y_lo = std::min(f.y_lo, y);
            f.y_hi = std::max(f.y_hi, y);
        }
    }
    if (f.x_hi <= f.x_lo) {
        f.x_hi = f.x_lo + 1.0;
    }
    if (f.y_hi - f.y_lo < 1.0) {
        f.y_lo -= 0.5;
        f.y_hi += 0.5;
    }
    const double y_step = tick_step(f.y_lo, f.y_hi, 8);
    f.y_lo = std::floor(f.y_lo / y_step) * y_step;
    f.y_hi = std::ceil(f.y_hi / y_step) * y_step;
    const double x_step = tick_step(f.x_lo, f.x_hi, 8);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << f.width << "\" height=\""
        << f.height << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\">\n";
    out << "<!-- " << xml_escape(header_line(result).substr(2)) << " -->\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << f.width / 2 - f.right / 2 + f.left / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(result.scenario) << "</text>\n";

    // axes and grid
    out << "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double y = f.y_lo; y <= f.y_hi + 1e-9 * y_step; y += y_step) {
        out << "<line x1=\"" << fmt("%.2f", f.px(f.x_lo)) << "\" y1=\"" << fmt("%.2f", f.py(y)) << "\" x2=\""
            << fmt("%.2f", f.px(f.x_hi)) << "\" y2=\"" << fmt("%.2f", f.py(y))
            << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << fmt("%.2f", f.left - 6) << "\" y=\"" << fmt("%.2f", f.py(y) + 4)
            << "\" text-anchor=\"end\">" << fmt("%g", std::abs(y) < 1e-12 ? 0.0 : y) << "</text>\n";
    }
    for (double x = std::ceil(f.x_lo / x_step) * x_step; x <= f.x_hi + 1e-9 * x_step; x += x_step) {
        out << "<text x=\"" << fmt("%.2f", f.px(x)) << "\" y=\"" << fmt("%.2f", f.height - f.bottom + 16)
            << "\" text-anchor=\"middle\">" << fmt("%g", x) << "</text>\n";
    }
    out << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\"" << f.width - f.left - f.right
        << "\" height=\"" << f.height - f.top - f.bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt("%.2f", (f.left + f.width - f.right) / 2) << "\" y=\"" << f.height - 18
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n";
    out << "<text transform=\"translate(20," << fmt("%.2f", (f.top + f.height - f.bottom) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">MSD (dB)</text>\n";
    out << "</g>\n";

    for (const auto boundary : result.stage_boundaries) {
        const double x = static_cast<double>(boundary);
        out << "<line class=\"stage-boundary\" x1=\"" << fmt("%.2f", f.px(x)) << "\" y1=\"" << f.top
            << "\" x2=\"" << fmt("%.2f", f.px(x)) << "\" y2=\"" << f.height - f.bottom
            << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = palette[i % palette.size()];
        out << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t k = 0; k < series[i].points.size(); ++k) {
            const auto& [x, y] = series[i].points[k];
            out << (k ? " " : "") << fmt("%.2f", f.px(x)) << "," << fmt("%.2f", f.py(y));
        }
        out << "\"/>\n";
        if (markers) {
            for (const auto& [x, y] : series[i].points) {
                out << "<circle class=\"point\" cx=\"" << fmt("%.2f", f.px(x)) << "\" cy=\"" << fmt("%.2f", f.py(y))
                    << "\" r=\"3.5\" fill=\"" << colour << "\"/>\n";
            }
        }
    }

    out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = f.top + 10 + 20.0 * static_cast<double>(i);
        const double x = f.width - f.right + 15;
        out << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 22 << "\" y2=\"" << y << "\" stroke=\""
            << palette[i % palette.size()] << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << x + 28 << "\" y=\"" << y + 4 << "\">" << xml_escape(series[i].legend) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

} // namespace

std::string_view tool_version() noexcept { return CORRFILT_VERSION; }

std::string header_line(const ScenarioResult& result) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.metadata.config_hash));
    return "# corrfilt " + std::string(tool_version()) + "; generator=" + std::string(generator_name) +
           "; seed=" + std::to_string(result.metadata.master_seed) + "; config_hash=" + hash +
           "; scenario=" + result.scenario;
}

std::vector<std::filesystem::path> emit_csv(const ScenarioResult& result, const std::filesystem::path& directory) {
    require_results(result);
    const std::size_t length = result.curves.front().values_db.size();
    for (const auto& curve : result.curves) {
        if (curve.values_db.size() != length) {
            throw run_error("curves have different lengths");
        }
    }
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw run_error("cannot create output directory '" + directory.string() + "': " + ec.message());
    }

    const auto curve_path = directory / (result.scenario + ".csv");
    {
        auto out = open_output(curve_path);
        out << header_line(result) << "\n";
        out << "iteration";
        for (const auto& curve : result.curves) {
            out << "," << curve.label;
        }
        out << "\n";
        for (std::size_t i = 0; i < length; ++i) {
            out << i;
            for (const auto& curve : result.curves) {
                out << "," << sig6(curve.values_db[i]);
            }
            out << "\n";
        }
        finish(out, curve_path);
    }

    const auto summary_path = directory / "summary.csv";
    {
        auto out = open_output(summary_path);
        out << header_line(result) << "\n";
        out << result.summary.key_name;
        for (const auto& column : result.summary.columns) {
            out << "," << column;
        }
        out << "\n";
        for (const auto& row : result.summary.rows) {
            out << row.key;
            for (const double v : row.values) {
                out << "," << sig6(v);
            }
            out << "\n";
        }
        finish(out, summary_path);
    }
    return {curve_path, summary_path};
}

void emit_plot(const ScenarioResult& result, const std::filesystem::path& path) {
    require_results(result);
    std::vector<Series> series;
    std::string x_label;
    bool markers = false;
    if (result.sweep) {
        const auto& sweep = *result.sweep;
        x_label = sweep.axis == "sigma" ? "kernel bandwidth \xCF\x83" : "input noise variance";
        markers = true;
        for (const auto& [algorithm, values] : sweep.steady_state) {
            Series s;
            s.legend = std::string(display_name(algorithm));
            const auto it = std::find_if(result.curves.begin(), result.curves.end(),
                                         [&](const MsdCurve& c) { return c.algorithm == algorithm; });
            if (it != result.curves.end()) {
                s.legend += step_text(*it);
            }
            for (std::size_t k = 0; k < sweep.points.size(); ++k) {
                s.points.emplace_back(sweep.points[k], values[k]);
            }
            series.push_back(std::move(s));
        }
    } else {
        x_label = "iteration";
        for (const auto& curve : result.curves) {
            Series s;
            s.legend = legend_text(curve);
            const std::size_t n = curve.values_db.size();
            const std::size_t stride = std::max<std::size_t>(1, (n + 1999) / 2000);
            for (std::size_t i = 0; i < n; i += stride) {
                s.points.emplace_back(static_cast<double>(i), curve.values_db[i]);
            }
            if (n > 0 && (n - 1) % stride != 0) {
                s.points.emplace_back(static_cast<double>(n - 1), curve.values_db[n - 1]);
            }
            series.push_back(std::move(s));
        }
    }

    std::ostringstream svg;
    write_svg(svg, result, series, x_label, markers);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    auto out = open_output(path);
    out << svg.str();
    finish(out, path);
}

void print_summary(const ScenarioResult& result, std::ostream& out) {
    const auto& table = result.summary;
    out << "steady-state MSD (dB), " << result.scenario << ", " << (result.curves.empty() ? 0 : result.curves[0].trials)
        << " trials\n";
    std::size_t width = 10;
    for (const auto& c : table.columns) {
        width = std::max(width, c.size() + 2);
    }
    out << std::left << std::setw(22) << table.key_name;
    for (const auto& c : table.columns) {
        out << std::right << std::setw(static_cast<int>(width)) << c;
    }
    out << "\n";
    for (const auto& row : table.rows) {
        out << std::left << std::setw(22) << row.key;
        for (const double v : row.values) {
            out << std::right << std::setw(static_cast<int>(width)) << fmt("%.2f", v);
        }
        out << "\n";
    }
}

} // namespace corrfilt
