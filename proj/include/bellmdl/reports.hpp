#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellmdl/config.hpp"
#include "bellmdl/csv.hpp"
#include "bellmdl/distance.hpp"
#include "bellmdl/model.hpp"
#include "bellmdl/svg.hpp"

// Artifact emission for the CLI: coefficient-curve data (one CSV plus c1/c2
// charts) and the d_max(gamma) scan (CSV plus chart). Shared with the tests
// so file outputs can be exercised without spawning the binary.

namespace bellmdl {

struct Figure1Row {
    double gamma;
    double phi;
    double c1;
    double c2;
};

/// Coefficient curves c1(phi), c2(phi) for each gamma, row-major in
/// (gamma, phi) order.
inline std::vector<Figure1Row> compute_figure1(std::span<const double> gammas,
                                               std::span<const double> phis,
                                               const QuadratureSpec& spec = {}) {
    std::vector<Figure1Row> rows;
    rows.reserve(gammas.size() * phis.size());
    for (double g : gammas) {
        const GammaParam gamma{g};
        for (double p : phis) {
            const Coefficients c = solve_coefficients(SettingAngle{p}, gamma, spec);
            rows.push_back(Figure1Row{g, p, c.c1, c.c2});
        }
    }
    return rows;
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::string gamma_label(double g) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "gamma = %g", g);
    return buf;
}

}  // namespace detail

/// Writes figure1.csv (columns gamma, phi, c1, c2) and the two charts
/// figure1_c1.svg / figure1_c2.svg into out_dir. With format = json, also
/// writes figure1.json mirroring the CSV rows. Returns the paths written.
inline std::vector<std::string> write_figure1(const std::vector<Figure1Row>& rows,
                                              std::span<const double> gammas,
                                              const std::string& out_dir,
                                              OutputFormat format) {
    namespace fs = std::filesystem;
    const fs::path dir{out_dir};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

    std::vector<std::string> written;

    std::ostringstream csv;
    CsvWriter writer(csv);
    writer.row({"gamma", "phi", "c1", "c2"});
    for (const Figure1Row& r : rows) writer.numeric_row({r.gamma, r.phi, r.c1, r.c2});
    detail::write_text_file(dir / "figure1.csv", csv.str());
    written.push_back((dir / "figure1.csv").string());

    for (const bool second : {false, true}) {
        std::vector<FigureSeries> series;
        int color = 0;
        for (double g : gammas) {
            FigureSeries s;
            s.label = detail::gamma_label(g);
            s.color_index = color++;
            for (const Figure1Row& r : rows) {
                if (r.gamma == g) {
                    s.x.push_back(r.phi);
                    s.y.push_back(second ? r.c2 : r.c1);
                }
            }
            series.push_back(std::move(s));
        }
        ChartOptions opt;
        opt.title = second ? "coefficient c2 vs phi" : "coefficient c1 vs phi";
        opt.x_label = "phi (rad)";
        opt.y_label = second ? "c2" : "c1";
        const fs::path path = dir / (second ? "figure1_c2.svg" : "figure1_c1.svg");
        detail::write_text_file(path, render_line_chart(series, opt));
        written.push_back(path.string());
    }

    if (format == OutputFormat::json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const Figure1Row& r : rows)
            doc.push_back({{"gamma", r.gamma}, {"phi", r.phi}, {"c1", r.c1}, {"c2", r.c2}});
        detail::write_text_file(dir / "figure1.json", doc.dump(2) + "\n");
        written.push_back((dir / "figure1.json").string());
    }
    return written;
}

/// Writes dmax_scan.csv (columns gamma, phi_a, phi_b, d_max) and the
/// figure2.svg chart of d_max vs gamma. With format = json, also writes
/// dmax_scan.json. Returns the paths written.
inline std::vector<std::string> write_dmax_scan(const std::vector<DmaxResult>& results,
                                                const std::string& out_dir,
                                                OutputFormat format) {
    namespace fs = std::filesystem;
    const fs::path dir{out_dir};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

    std::vector<std::string> written;

    std::ostringstream csv;
    CsvWriter writer(csv);
    writer.row({"gamma", "phi_a", "phi_b", "d_max"});
    for (const DmaxResult& r : results) {
        writer.numeric_row({r.gamma.value(), r.argmax.phi_a.radians(),
                            r.argmax.phi_b.radians(), r.d_max});
    }
    detail::write_text_file(dir / "dmax_scan.csv", csv.str());
    written.push_back((dir / "dmax_scan.csv").string());

    FigureSeries s;
    s.label = "d_max";
    s.color_index = 0;
    for (const DmaxResult& r : results) {
        s.x.push_back(r.gamma.value());
        s.y.push_back(r.d_max);
    }
    ChartOptions opt;
    opt.title = "maximum measurement-dependence distance vs gamma";
    opt.x_label = "gamma";
    opt.y_label = "d_max";
    detail::write_text_file(dir / "figure2.svg",
                            render_line_chart(std::span(&s, 1), opt));
    written.push_back((dir / "figure2.svg").string());

    if (format == OutputFormat::json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const DmaxResult& r : results) {
            doc.push_back({{"gamma", r.gamma.value()},
                           {"phi_a", r.argmax.phi_a.radians()},
                           {"phi_b", r.argmax.phi_b.radians()},
                           {"d_max", r.d_max}});
        }
        detail::write_text_file(dir / "dmax_scan.json", doc.dump(2) + "\n");
        written.push_back((dir / "dmax_scan.json").string());
    }
    return written;
}

}  // namespace bellmdl
