// Command-line harness: runs verification scenarios and prints coefficient
// tables. Exit codes: 0 all checks pass, 1 some check failed, 2 usage or
// configuration error.

#include "qtheta/kaehler.hpp"
#include "qtheta/lattice.hpp"
#include "qtheta/scenario.hpp"
#include "qtheta/theta.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return j;
}

nlohmann::json parse_inline_or_file(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return nlohmann::json::parse(arg);
    return load_json(arg);
}

int run_verify(const std::string& path, const std::string& out_path,
               std::optional<std::uint64_t> seed_override, bool timings) {
    nlohmann::json scenario = load_json(path);
    if (seed_override) scenario["seed"] = *seed_override;
    qtheta::Report report = qtheta::run_scenario(scenario);
    nlohmann::json out = qtheta::report_to_json(report, timings);
    if (out_path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot write '" + out_path + "'");
        f << out.dump(2) << "\n";
    }
    return report.all_pass ? 0 : 1;
}

struct TableRow {
    std::vector<double> cells;
};

void emit_table(const std::vector<std::string>& header, const std::vector<TableRow>& rows,
                bool as_json) {
    if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json o;
            for (size_t i = 0; i < header.size(); ++i) o[header[i]] = r.cells[i];
            j.push_back(o);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < header.size(); ++i)
            std::cout << header[i] << (i + 1 < header.size() ? "," : "\n");
        std::ostringstream os;
        os.precision(17);
        for (const auto& r : rows) {
            os.str("");
            for (size_t i = 0; i < r.cells.size(); ++i)
                os << r.cells[i] << (i + 1 < r.cells.size() ? "," : "");
            std::cout << os.str() << "\n";
        }
    }
}

int run_table_theta_coeffs(const std::string& lattice_arg, const std::string& siegel_arg,
                           double radius, bool as_json) {
    qtheta::LatticeEmbedding D = qtheta::lattice_from_json(parse_inline_or_file(lattice_arg));
    qtheta::KaehlerStructure k(qtheta::siegel_from_json(parse_inline_or_file(siegel_arg)));
    qtheta::QuantumTheta qt = qtheta::quantum_theta(k, D, radius);
    std::vector<std::string> header;
    for (int i = 0; i < D.rank(); ++i) header.push_back("h" + std::to_string(i + 1));
    header.push_back("coeff_re");
    header.push_back("coeff_im");
    std::vector<TableRow> rows;
    for (const auto& [h, c] : qt.element.terms()) {
        TableRow r;
        for (int i = 0; i < h.size(); ++i) r.cells.push_back(static_cast<double>(h[i]));
        r.cells.push_back(c.real());
        r.cells.push_back(c.imag());
        rows.push_back(std::move(r));
    }
    emit_table(header, rows, as_json);
    return 0;
}

int run_table_classical(const std::string& siegel_arg, double z_start_re, double z_start_im,
                        double z_step_re, double z_step_im, int z_count, double radius,
                        bool as_json) {
    qtheta::SiegelPoint omega = qtheta::siegel_from_json(parse_inline_or_file(siegel_arg));
    if (omega.dim() != 1) throw std::invalid_argument("table classical_theta: N = 1 grids only");
    std::vector<std::string> header = {"z_re", "z_im", "value_re", "value_im", "tail_bound"};
    std::vector<TableRow> rows;
    for (int i = 0; i < z_count; ++i) {
        qtheta::Complex z(z_start_re + i * z_step_re, z_start_im + i * z_step_im);
        Eigen::VectorXcd zv(1);
        zv[0] = z;
        auto v = qtheta::classical_theta({omega, zv}, radius, 1e-9);
        rows.push_back({{z.real(), z.imag(), v.value.real(), v.value.imag(), v.tail_bound}});
    }
    emit_table(header, rows, as_json);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum torus theta-function verification harness"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run a scenario file and emit a JSON report");
    std::string scenario_path, out_path;
    std::uint64_t seed = 0;
    bool seed_set = false, timings = false;
    verify->add_option("scenario", scenario_path, "scenario JSON path")->required();
    verify->add_option("--out", out_path, "write the report here instead of stdout");
    verify->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });
    verify->add_flag("--timings", timings, "include wall times (breaks byte-identical output)");

    auto* table = app.add_subcommand("table", "print coefficient/value tables");
    std::string what, lattice_arg = "{\"N\":1,\"generators\":[[1,0],[0,1]]}";
    std::string siegel_arg = "{\"T_re\":[[0]],\"T_im\":[[1]]}";
    double radius = 3.0;
    bool as_json = false, as_csv = false;
    double z_start_re = 0, z_start_im = 0, z_step_re = 0.1, z_step_im = 0;
    int z_count = 0;
    table->add_option("what", what, "one of: theta_coeffs, classical_theta")->required();
    table->add_option("--lattice", lattice_arg, "lattice JSON (inline or path)");
    table->add_option("--siegel", siegel_arg, "Siegel point JSON (inline or path)");
    table->add_option("--radius", radius, "truncation radius");
    table->add_flag("--json", as_json, "JSON output");
    table->add_flag("--csv", as_csv, "CSV output (default)");
    table->add_option("--z-start-re", z_start_re);
    table->add_option("--z-start-im", z_start_im);
    table->add_option("--z-step-re", z_step_re);
    table->add_option("--z-step-im", z_step_im);
    table->add_option("--z-count", z_count, "number of grid points (classical_theta)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (as_csv) as_json = false;
    try {
        if (verify->parsed())
            return run_verify(scenario_path, out_path,
                              seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt, timings);
        if (what == "theta_coeffs") return run_table_theta_coeffs(lattice_arg, siegel_arg, radius, as_json);
        if (what == "classical_theta")
            return run_table_classical(siegel_arg, z_start_re, z_start_im, z_step_re, z_step_im,
                                       z_count, radius, as_json);
        std::cerr << "unknown table kind '" << what << "'\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
