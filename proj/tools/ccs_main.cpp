// ccs: command-line front end for the combinatorial coherent state toolkit.
//
// Exit codes: 0 success / verified, 2 domain or usage error, 3 numerical
// failure (including moments that miss the requested tolerance).

#include <ccs/ccs.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr const char* kVersion = "ccs 0.1.0";

enum class OutputFormat { Table, Csv, Json };

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;

OutputFormat parse_format(const std::string& s) {
    if (s == "table" || s == "text") return OutputFormat::Table;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ccs::DomainError("unknown format '" + s + "' (table, csv, json)");
}

std::string fmt(double v) { return ccs::detail::fmt_double(v); }

ccs::Complex parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {re, 0.0};
        }
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        std::size_t ua = 0, ub = 0;
        const double re = std::stod(a, &ua);
        const double im = std::stod(b, &ub);
        if (ua != a.size() || ub != b.size()) throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::logic_error&) {
        throw ccs::DomainError("malformed complex number '" + s + "' (use re,im)");
    }
}

void print_header(OutputFormat f) {
    if (f == OutputFormat::Table)
        std::cout << "# " << kVersion << '\n';
}

// ---- seq -----------------------------------------------------------------

int cmd_seq(const std::string& id_text, unsigned n_max, OutputFormat f) {
    if (n_max > 100)
        throw ccs::DomainError("seq: n_max must be <= 100");
    const auto id = ccs::parse_sequence_id(id_text);
    const auto values = ccs::seq_prefix(id, n_max);
    const auto eps = ccs::spectrum(id, n_max).epsilon;
    if (f == OutputFormat::Json) {
        nlohmann::json rows = nlohmann::json::array();
        for (unsigned n = 0; n <= n_max; ++n)
            rows.push_back({{"n", n}, {"c", values[n].str()}, {"epsilon", eps[n].str()}});
        std::cout << nlohmann::json{{"id", ccs::to_string(id)}, {"rows", rows}}.dump(2) << '\n';
        return kExitOk;
    }
    print_header(f);
    const char sep = f == OutputFormat::Csv ? ',' : ' ';
    std::cout << "n" << sep << "c" << sep << "epsilon\n";
    for (unsigned n = 0; n <= n_max; ++n)
        std::cout << n << sep << values[n].str() << sep << eps[n].str() << '\n';
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::string& id_text, unsigned n_max, double rel_tol, double quad_tol,
               const std::string& scheme, OutputFormat f) {
    const auto spec = ccs::make_weight(ccs::parse_sequence_id(id_text));
    ccs::QuadratureConfig cfg;
    cfg.rel_tol = quad_tol > 0 ? quad_tol : std::clamp(rel_tol / 100.0, 1e-13, 1e-10);
    if (scheme == "sqrt") cfg.scheme = ccs::Scheme::substitution_sqrt();
    else if (scheme == "de") cfg.scheme = ccs::Scheme::double_exponential();
    else if (scheme == "truncated") cfg.scheme = ccs::Scheme::truncated_de();
    else if (scheme == "jacobi")
        cfg.scheme = ccs::Scheme::jacobi(spec.endpoint_exponent_zero, spec.endpoint_R.exponent);
    else if (scheme != "auto")
        throw ccs::DomainError("unknown scheme '" + scheme + "' (auto, sqrt, de, truncated, jacobi)");

    const auto report = ccs::verify_moments(spec, n_max, cfg);
    switch (f) {
    case OutputFormat::Table: std::cout << ccs::render_text(report); break;
    case OutputFormat::Csv: std::cout << ccs::render_csv(report); break;
    case OutputFormat::Json: std::cout << ccs::to_json(report).dump(2) << '\n'; break;
    }
    if (report.max_relative_error <= rel_tol)
        return kExitOk;
    std::cerr << "verification failed: max_relative_error " << fmt(report.max_relative_error)
              << " exceeds " << fmt(rel_tol) << '\n';
    return kExitNumerical;
}

// ---- weight ----------------------------------------------------------------

int cmd_weight_atoms(const std::string& id_text, double tail_tol, OutputFormat f) {
    const auto id = ccs::parse_sequence_id(id_text);
    if (id.family() != ccs::Family::Bell)
        throw ccs::DomainError("--atoms applies to bell only");
    const auto list = ccs::bell_atoms(tail_tol);
    if (f == OutputFormat::Json) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : list.atoms)
            atoms.push_back({{"k", a.location}, {"mass", a.mass}});
        std::cout << nlohmann::json{{"id", "bell"}, {"origin_mass", list.origin_mass},
                                    {"atoms", atoms}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    print_header(f);
    if (f == OutputFormat::Table)
        std::cout << "# origin atom (0^0 = 1 convention) mass " << fmt(list.origin_mass) << '\n';
    const char sep = f == OutputFormat::Csv ? ',' : ' ';
    std::cout << "k" << sep << "mass\n";
    for (const auto& a : list.atoms)
        std::cout << a.location << sep << fmt(a.mass) << '\n';
    return kExitOk;
}

int cmd_weight(const std::string& id_text, double x_min, double x_max, int points, bool log_spaced,
               double tail_tol, OutputFormat f) {
    const auto id = ccs::parse_sequence_id(id_text);
    if (points < 1)
        throw ccs::DomainError("weight: points must be >= 1");
    if (!(x_min <= x_max))
        throw ccs::DomainError("weight: x_min must not exceed x_max");
    if (log_spaced && !(x_min > 0))
        throw ccs::DomainError("weight: log spacing needs x_min > 0");
    const auto spec = ccs::make_weight(id);
    std::function<double(double)> eval;
    if (spec.kind == ccs::WeightKind::Continuous)
        eval = [&](double x) { return ccs::weight_eval(spec, x); };
    else if (spec.kind == ccs::WeightKind::MixedSum)
        eval = [&](double x) { return ccs::cb_weight_eval(x, tail_tol); };
    else
        throw ccs::DomainError("bell is a purely atomic measure; use 'weight bell --atoms'");

    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        double x = log_spaced ? x_min * std::pow(x_max / x_min, t) : x_min + (x_max - x_min) * t;
        if (i == points - 1 && points > 1) x = x_max;
        rows.emplace_back(x, eval(x));
    }
    if (f == OutputFormat::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [x, w] : rows)
            arr.push_back({{"x", x}, {"w", w}});
        std::cout << nlohmann::json{{"id", ccs::to_string(id)}, {"label", spec.label},
                                    {"samples", arr}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    print_header(f);
    const char sep = f == OutputFormat::Csv ? ',' : ' ';
    std::cout << "x" << sep << "w\n";
    for (const auto& [x, w] : rows)
        std::cout << fmt(x) << sep << fmt(w) << '\n';
    return kExitOk;
}

// ---- norm / overlap / state ------------------------------------------------------

int cmd_norm(const std::string& id_text, double x, double tol, OutputFormat f) {
    const auto id = ccs::parse_sequence_id(id_text);
    const double value = ccs::normalization(id, x, tol);
    if (f == OutputFormat::Json) {
        std::cout << nlohmann::json{{"id", ccs::to_string(id)}, {"x", x}, {"normalization", value}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    print_header(f);
    const char sep = f == OutputFormat::Csv ? ',' : ' ';
    std::cout << "x" << sep << "normalization\n" << fmt(x) << sep << fmt(value) << '\n';
    return kExitOk;
}

int cmd_overlap(const std::string& id_text, const std::string& z_text, const std::string& w_text,
                double tol, OutputFormat f) {
    const auto id = ccs::parse_sequence_id(id_text);
    const auto z = parse_complex(z_text);
    const auto w = parse_complex(w_text);
    const auto ov = ccs::overlap(id, z, w, tol);
    if (f == OutputFormat::Json) {
        std::cout << nlohmann::json{{"id", ccs::to_string(id)},
                                    {"z", {z.real(), z.imag()}},
                                    {"w", {w.real(), w.imag()}},
                                    {"overlap", {ov.real(), ov.imag()}},
                                    {"abs", std::abs(ov)}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    print_header(f);
    const char sep = f == OutputFormat::Csv ? ',' : ' ';
    std::cout << "re" << sep << "im" << sep << "abs\n"
              << fmt(ov.real()) << sep << fmt(ov.imag()) << sep << fmt(std::abs(ov)) << '\n';
    return kExitOk;
}

int cmd_state(const std::string& id_text, const std::string& z_text, unsigned n_max, double tol,
              OutputFormat f) {
    ccs::StateParams p;
    p.id = ccs::parse_sequence_id(id_text);
    p.z = parse_complex(z_text);
    p.n_max = n_max;
    p.series_tol = tol;
    const auto v = ccs::state_coefficients(p);
    if (f == OutputFormat::Json) {
        nlohmann::json amps = nlohmann::json::array();
        for (const auto& a : v.amplitudes)
            amps.push_back({a.real(), a.imag()});
        std::cout << nlohmann::json{{"id", ccs::to_string(p.id)},
                                    {"z", {p.z.real(), p.z.imag()}},
                                    {"amplitudes", amps},
                                    {"truncation_mass", v.truncation_mass}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    }
    print_header(f);
    if (f == OutputFormat::Table)
        std::cout << "# truncation_mass " << fmt(v.truncation_mass) << '\n';
    const char sep = f == OutputFormat::Csv ? ',' : ' ';
    std::cout << "n" << sep << "re" << sep << "im" << sep << "prob\n";
    for (std::size_t n = 0; n < v.amplitudes.size(); ++n) {
        const auto a = v.amplitudes[n];
        std::cout << n << sep << fmt(a.real()) << sep << fmt(a.imag()) << sep << fmt(std::norm(a))
                  << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorial coherent states: sequences, weights, moment verification.\n"
                 "Sequence ids: " +
                 ccs::valid_id_help()};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string format_text = "table";
    if (const char* env = std::getenv("CCS_FORMAT"))
        format_text = env;
    app.add_option("--format", format_text, "Output format: table, csv, json (env CCS_FORMAT)")
        ->capture_default_str();

    std::function<int()> run;
    std::string id, z_text, w_text, scheme = "auto";
    unsigned n_max = 10;
    double rel_tol = 1e-10, quad_tol = 0, tol = 1e-15, tail_tol = 1e-14;
    double x = 0, x_min = 0, x_max = 0;
    int points = 1;
    bool atoms = false, log_spaced = false;
    OutputFormat f = OutputFormat::Table;

    auto* seq = app.add_subcommand("seq", "Exact c(n) and spectrum epsilon_n for n = 0..n_max");
    seq->add_option("id", id, "Sequence id")->required();
    seq->add_option("n_max", n_max, "Largest n (<= 100)")->required();
    seq->callback([&] { run = [&] { return cmd_seq(id, n_max, f); }; });

    auto* verify = app.add_subcommand("verify", "Compare weight moments with c(n)");
    verify->add_option("id", id, "Sequence id with an implemented weight")->required();
    verify->add_option("n_max", n_max, "Largest moment order")->capture_default_str();
    verify->add_option("rel_tol", rel_tol, "Acceptance threshold on max relative error")
        ->capture_default_str();
    verify->add_option("--quad-tol", quad_tol,
                       "Quadrature tolerance (default rel_tol/100 clamped to [1e-13, 1e-10])");
    verify->add_option("--scheme", scheme, "auto, sqrt, de, truncated, jacobi")
        ->capture_default_str();
    verify->callback(
        [&] { run = [&] { return cmd_verify(id, n_max, rel_tol, quad_tol, scheme, f); }; });

    auto* weight = app.add_subcommand("weight", "Sample a weight function on a grid");
    weight->add_option("id", id, "Sequence id")->required();
    weight->add_option("x_min", x_min, "Lower sample point");
    weight->add_option("x_max", x_max, "Upper sample point");
    weight->add_option("points", points, "Number of samples")->capture_default_str();
    weight->add_flag("--log", log_spaced, "Log-spaced samples");
    weight->add_flag("--atoms", atoms, "List the atoms of the Bell measure");
    weight->add_option("--tail-tol", tail_tol, "Series/atom tail tolerance")->capture_default_str();
    weight->callback([&] {
        run = [&] {
            if (atoms)
                return cmd_weight_atoms(id, tail_tol, f);
            if (weight->count("x_min") == 0 || weight->count("x_max") == 0)
                throw ccs::DomainError("weight: x_min and x_max are required");
            return cmd_weight(id, x_min, x_max, points, log_spaced, tail_tol, f);
        };
    });

    auto* norm = app.add_subcommand("norm", "Normalization N_c(x) = sum x^n / c(n)");
    norm->add_option("id", id, "Sequence id")->required();
    norm->add_option("x", x, "Argument x = |z|^2")->required();
    norm->add_option("tol", tol, "Relative series tolerance")->capture_default_str();
    norm->callback([&] { run = [&] { return cmd_norm(id, x, tol, f); }; });

    auto* ov = app.add_subcommand("overlap", "Overlap <z|w> of two normalized states");
    ov->add_option("id", id, "Sequence id")->required();
    ov->add_option("z", z_text, "Complex label re,im")->required();
    ov->add_option("w", w_text, "Complex label re,im")->required();
    ov->add_option("tol", tol, "Relative series tolerance")->capture_default_str();
    ov->callback([&] { run = [&] { return cmd_overlap(id, z_text, w_text, tol, f); }; });

    auto* state = app.add_subcommand("state", "Amplitudes a_n of |z>");
    state->add_option("id", id, "Sequence id")->required();
    state->add_option("z", z_text, "Complex label re,im")->required();
    state->add_option("n_max", n_max, "Truncation order (extended as needed)")
        ->capture_default_str();
    double series_tol = 1e-12;
    state->add_option("--tol", series_tol, "Maximum discarded probability")->capture_default_str();
    state->callback([&] { run = [&] { return cmd_state(id, z_text, n_max, series_tol, f); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    try {
        f = parse_format(format_text);
        return run();
    } catch (const ccs::DomainFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ccs::NumericalError& e) {
        std::cerr << "numerical failure";
        if (e.failing_n())
            std::cerr << " at n = " << *e.failing_n();
        std::cerr << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
