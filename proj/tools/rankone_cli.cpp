// rankone: spectra, sampling and reconstruction for rank-one perturbation
// models from the command line.
//
// Exit status: 0 success, 1 failed check, 2 malformed or invalid input,
// 3 numerical failure, 4 infinite coupling where a finite one is needed.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rankone/errors.hpp"
#include "rankone/io.hpp"
#include "rankone/jacobi.hpp"
#include "rankone/oscillator.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/sampling.hpp"
#include "rankone/verify.hpp"

namespace {

using rankone::Complex;
using rankone::Coupling;
using rankone::io::format_real;

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfiniteCoupling = 4;

// Decimal literal or the token "inf"; anything else is malformed.
Coupling parse_coupling(const std::string& text) {
    if (text == "inf") return Coupling::infinite();
    double h = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, h);
    if (res.ec != std::errc{} || res.ptr != last || text.empty() || !std::isfinite(h)) {
        throw rankone::io::FormatError("coupling must be a decimal number or \"inf\", got \"" + text + "\"");
    }
    return Coupling::finite(h);
}

rankone::io::ModelFile load_model(const std::string& path) {
    return rankone::io::parse_model(rankone::io::read_json_file(path));
}

int cmd_spectrum(const std::string& model_path, const std::string& coupling_text) {
    const Coupling coupling = parse_coupling(coupling_text);
    const auto file = load_model(model_path);
    const auto nodes = rankone::perturbed_spectrum(file.model, coupling);
    if (coupling.is_infinite()) {
        std::cout << rankone::io::spectrum_to_json(nodes, nullptr) << '\n';
        return 0;
    }
    const auto weights = rankone::node_weights(file.model, coupling.value(), nodes);
    std::cout << rankone::io::spectrum_to_json(nodes, &weights) << '\n';
    return 0;
}

int cmd_sample(const std::string& model_path, const std::string& state_path, const std::string& coupling_text) {
    const Coupling coupling = parse_coupling(coupling_text);
    const auto file = load_model(model_path);
    const auto phi = rankone::io::parse_state(rankone::io::read_json_file(state_path));
    if (coupling.is_infinite()) {
        std::cerr << "error: sampling needs a finite coupling\n";
        return kExitInfiniteCoupling;
    }
    const auto samples = rankone::sample(file.model, phi, coupling.value());
    std::cout << rankone::io::sample_set_to_json(samples) << '\n';
    return 0;
}

int cmd_reconstruct(const std::string& samples_path, const std::string& grid_path, const std::string& model_path) {
    const auto samples = rankone::io::parse_sample_set(rankone::io::read_json_file(samples_path));
    const auto grid = rankone::io::parse_grid(rankone::io::read_json_file(grid_path));
    std::optional<rankone::io::ModelFile> file;
    if (!model_path.empty()) file = load_model(model_path);

    std::vector<Complex> values(grid.size());
    std::vector<Complex> kramer(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            values[i] = rankone::reconstruct(samples, grid[i]);
            if (file) kramer[i] = rankone::kramer_reconstruct(file->model, samples, grid[i]);
        } catch (const rankone::Error& e) {
            if (e.code() != rankone::ErrorCode::PoleProximity) throw;
            std::cerr << "error: grid point " << i << ": " << e.what() << '\n';
            return kExitNumerical;
        }
    }

    bool agree = true;
    std::cout << (file ? "z_re,z_im,f_re,f_im,kramer_re,kramer_im\n" : "z_re,z_im,f_re,f_im\n");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::cout << format_real(grid[i].real()) << ',' << format_real(grid[i].imag()) << ','
                  << format_real(values[i].real()) << ',' << format_real(values[i].imag());
        if (file) {
            std::cout << ',' << format_real(kramer[i].real()) << ',' << format_real(kramer[i].imag());
            if (!(std::abs(kramer[i] - values[i]) <= 1e-8 * std::max(1.0, std::abs(values[i])))) {
                std::cerr << "error: grid point " << i << ": Kramer and Lagrange forms disagree\n";
                agree = false;
            }
        }
        std::cout << '\n';
    }
    return agree ? 0 : kExitCheckFailed;
}

int cmd_verify(const std::string& model_path, std::uint64_t seed) {
    const auto file = load_model(model_path);
    const auto report = rankone::verify_model(file.model, seed, file.jacobi, file.truncation);
    for (const auto& check : report.checks) {
        std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << " worst=" << format_real(check.worst)
                  << " tol=" << format_real(check.tolerance);
        if (!check.detail.empty()) std::cout << " (" << check.detail << ')';
        std::cout << '\n';
    }
    return report.all_passed() ? 0 : kExitCheckFailed;
}

// Jacobi convergence: q_k = 0, b_k = 2^-k, truncation 10, h = 1, and a state
// supported on delta_1..delta_3. The samples are exact for the size-10
// truncation; jm_reconstruct at lower degree approximates its Weyl function.
void demo_jacobi() {
    constexpr std::size_t size = 10;
    std::vector<double> q(size + 2, 0.0);
    std::vector<double> b(size + 2);
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = std::ldexp(1.0, -static_cast<int>(k + 1));
    const rankone::JacobiParams params(q, b);
    const auto model = rankone::truncate(params, size);
    const std::vector<Complex> c{{1.0, 0.5}, {-0.3, 0.2}, {0.7, 0.0}};
    const auto phi = rankone::state_from_jacobi_basis(params, model, c);
    const auto samples = rankone::sample(model, phi, 1.0);

    std::cout << "n,max_rel_discrepancy\n";
    for (std::size_t n : {4, 6, 8, 10}) {
        double worst = 0.0;
        for (double re : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
            for (double im : {1.0, 2.0}) {
                const Complex z{re, im};
                const Complex exact = rankone::reconstruct(samples, z);
                worst = std::max(worst, rankone::relative_error(rankone::jm_reconstruct(params, n, samples, z), exact));
            }
        }
        std::cout << n << ',' << format_real(worst) << '\n';
    }
}

void demo_oscillator() {
    std::cout << "z_re,z_im,series_re,series_im,integral_re,integral_im,abs_diff\n";
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const Complex z{2.0 * i, 0.5 + 0.375 * j};
            const Complex s = rankone::osc_F_series(z, 40).value;
            const Complex g = rankone::osc_F_integral(z, 1024);
            std::cout << format_real(z.real()) << ',' << format_real(z.imag()) << ',' << format_real(s.real()) << ','
                      << format_real(s.imag()) << ',' << format_real(g.real()) << ',' << format_real(g.imag()) << ','
                      << format_real(std::abs(s - g)) << '\n';
        }
    }
}

int cmd_demo(const std::string& study) {
    if (study == "jacobi" || study == "all") demo_jacobi();
    if (study == "all") std::cout << '\n';
    if (study == "oscillator" || study == "all") demo_oscillator();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rank-one perturbations of finite spectral models"};
    app.require_subcommand(1);

    std::string model_path;
    std::string state_path;
    std::string samples_path;
    std::string grid_path;
    std::string coupling_text;
    std::uint64_t seed = 0;
    std::string study = "all";

    auto* spectrum = app.add_subcommand("spectrum", "Sp(A_h) and its spectral weights as JSON");
    spectrum->add_option("--model", model_path, "model file")->required();
    spectrum->add_option("--coupling", coupling_text, "h, or inf")->required();

    auto* sample = app.add_subcommand("sample", "sample a state's transform on Sp(A_h)");
    sample->add_option("--model", model_path, "model file")->required();
    sample->add_option("--state", state_path, "state file")->required();
    sample->add_option("--coupling", coupling_text, "h")->required();

    auto* reconstruct = app.add_subcommand("reconstruct", "evaluate the sampling series on a grid as CSV");
    reconstruct->add_option("--samples", samples_path, "sample set file")->required();
    reconstruct->add_option("--grid", grid_path, "grid file")->required();
    reconstruct->add_option("--cross-check,--model", model_path, "model file; adds the Kramer columns");

    auto* verify = app.add_subcommand("verify", "run the invariant checks against a model");
    verify->add_option("--model", model_path, "model file")->required();
    verify->add_option("--seed", seed, "random seed")->required();

    auto* demo = app.add_subcommand("demo", "Jacobi convergence and oscillator comparison as CSV");
    demo->add_option("--study", study, "jacobi, oscillator or all")
        ->check(CLI::IsMember({"jacobi", "oscillator", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    }

    try {
        if (*spectrum) return cmd_spectrum(model_path, coupling_text);
        if (*sample) return cmd_sample(model_path, state_path, coupling_text);
        if (*reconstruct) return cmd_reconstruct(samples_path, grid_path, model_path);
        if (*verify) return cmd_verify(model_path, seed);
        if (*demo) return cmd_demo(study);
    } catch (const rankone::io::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const rankone::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (e.code() == rankone::ErrorCode::InfiniteCoupling) return kExitInfiniteCoupling;
        return rankone::is_validation_error(e.code()) ? kExitBadInput : kExitNumerical;
    }
    return 0;
}
