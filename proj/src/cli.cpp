#include "ctd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ctd/imageio.hpp"
#include "ctd/metrics.hpp"
#include "ctd/phantom.hpp"

namespace ctd::cli {

namespace {

bool is_wavelet_method(const std::string& method) {
    return method == "hard" || method == "soft" || method == "wiener";
}

void check_method(const std::string& method) {
    if (!is_wavelet_method(method) && method != "contourlet") {
        throw std::invalid_argument("unknown method '" + method + "' (expected hard, soft, wiener or contourlet)");
    }
}

void score(DenoiseReport& report, const ImageGrid& clean, const ImageGrid& noisy, const ImageGrid& denoised) {
    report.psnr_noisy = psnr(clean, noisy).psnr_db;
    report.psnr_denoised = psnr(clean, denoised).psnr_db;
    report.psnr_denoised_quantized = psnr_quantized(clean, denoised).psnr_db;
}

std::string csv_row(const std::string& image, const std::string& variance, const std::string& seed,
                    const std::string& method, const std::string& psnr_db, double runtime_ms,
                    const std::string& config) {
    std::ostringstream row;
    row << csv_escape(image) << ',' << variance << ',' << seed << ',' << method << ',' << psnr_db << ','
        << format_double(std::round(runtime_ms * 1000.0) / 1000.0) << ',' << config_digest(config);
    return row.str();
}

// Writes the header when the file is new or empty.
std::ofstream open_csv(const std::filesystem::path& path, bool append) {
    const bool has_content =
        append && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    if (!has_content) {
        out << kSweepHeader << '\n';
    }
    return out;
}

std::vector<unsigned> parse_orders(const std::string& text) {
    std::vector<unsigned> orders;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("bad DFB order '" + item + "'");
        }
        orders.push_back(static_cast<unsigned>(v));
    }
    return orders;
}

unsigned default_threads() {
    if (const char* env = std::getenv(kThreadsEnv)) {
        try {
            const unsigned long v = std::stoul(env);
            if (v >= 1 && v <= 256) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    return 1;
}

// Raw option values collected by CLI11 and turned into MethodSettings once
// parsing succeeds.
struct MethodFlags {
    unsigned levels = 3;
    std::string orders = "3,2,2";
    std::string lp_filter = "burt";
    std::string fan_filter = "pkva12";
    std::string extension = "symmetric";
    std::string mode = "per_subband";
    double scale = 1.0;
    std::string noise_source = "global_finest";
    std::string wavelet = "db4";
    unsigned wavelet_levels = 3;
    unsigned window = 5;
    std::optional<double> sigma_hint;

    void attach(CLI::App& app) {
        app.add_option("--levels", levels, "Pyramid levels of the contourlet transform")->capture_default_str();
        app.add_option("--orders", orders, "DFB order per pyramid level, finest first")->capture_default_str();
        app.add_option("--lp-filter", lp_filter, "Pyramid filter: burt or 9-7")->capture_default_str();
        app.add_option("--fan-filter", fan_filter, "Fan filter: pkva12, pkva8, pkva6 or haar")
            ->capture_default_str();
        app.add_option("--extension", extension, "Border extension: symmetric or periodic")->capture_default_str();
        app.add_option("--mode", mode, "Threshold mode: paper_literal, per_subband or bayes")
            ->capture_default_str();
        app.add_option("--scale", scale, "Threshold multiplier")->capture_default_str();
        app.add_option("--noise-source", noise_source, "Noise estimate: global_finest or per_subband")
            ->capture_default_str();
        app.add_option("--wavelet", wavelet, "Baseline wavelet: haar, db2 or db4")->capture_default_str();
        app.add_option("--wavelet-levels", wavelet_levels, "Baseline decomposition depth")->capture_default_str();
        app.add_option("--window", window, "Wiener window side (odd)")->capture_default_str();
        app.add_option("--sigma-hint", sigma_hint, "Noise standard deviation for the baselines (skips estimation)");
    }

    MethodSettings build() const {
        MethodSettings s;
        s.contourlet.levels = levels;
        s.contourlet.orders = parse_orders(orders);
        s.contourlet.lp_filter = LpFilter::by_name(lp_filter);
        s.contourlet.fan_filters = FanFilterPair::by_name(fan_filter);
        s.contourlet.extension = extension_mode_from_string(extension);
        s.contourlet.validate();
        s.contourlet_options.mode = threshold_mode_from_string(mode);
        if (!(scale > 0.0)) {
            throw std::invalid_argument("--scale must be positive");
        }
        s.contourlet_options.scale = scale;
        s.contourlet_options.noise_source = noise_source_from_string(noise_source);
        s.wavelet.filters = WaveletFilterPair::by_name(wavelet);
        s.wavelet.levels = wavelet_levels;
        s.wavelet.mode = extension_mode_from_string(extension);
        s.wavelet.window = window;
        s.wavelet.sigma_hint = sigma_hint;
        return s;
    }
};

}  // namespace

std::pair<ImageGrid, DenoiseReport> run_method(const std::string& method, const ImageGrid& noisy,
                                               const MethodSettings& settings) {
    check_method(method);
    if (method == "hard") {
        return denoise_hard(noisy, settings.wavelet);
    }
    if (method == "soft") {
        return denoise_soft(noisy, settings.wavelet);
    }
    if (method == "wiener") {
        return denoise_wiener(noisy, settings.wavelet);
    }
    return denoise_contourlet(noisy, settings.contourlet, settings.contourlet_options);
}

std::string method_config(const std::string& method, const MethodSettings& settings) {
    check_method(method);
    if (method == "contourlet") {
        return describe(settings.contourlet, settings.contourlet_options);
    }
    return describe(method, settings.wavelet);
}

int cmd_add_noise(const AddNoiseArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const ImageGrid clean = load_image(args.input);
        const ImageGrid noisy = add_awgn(clean, args.sigma, args.seed);
        save_image(noisy, args.output);
        const QualityScore saved = psnr_quantized(clean, noisy);
        out << "psnr_db=" << format_double(saved.psnr_db) << '\n';
        out << "mse=" << format_double(saved.mse) << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "add-noise: " << e.what() << '\n';
        return 1;
    }
}

int cmd_denoise(const DenoiseArgs& args, std::ostream& out, std::ostream& err) {
    try {
        check_method(args.method);
        const ImageGrid noisy = load_image(args.input);
        std::optional<ImageGrid> clean;
        if (args.reference) {
            clean = load_image(*args.reference);
            if (!clean->same_shape(noisy)) {
                throw DimensionError("reference and input differ in size");
            }
        }
        auto [denoised, report] = run_method(args.method, noisy, args.settings);
        if (clean) {
            score(report, *clean, noisy, denoised);
        }
        save_image(denoised, args.output);
        out << report.to_key_value();
        if (args.csv) {
            std::ofstream csv = open_csv(*args.csv, true);
            csv << csv_row(args.input.stem().string(), "", "", args.method,
                           report.psnr_denoised ? format_double(*report.psnr_denoised) : "", report.runtime_ms,
                           report.config)
                << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        err << "denoise: " << e.what() << '\n';
        return 1;
    }
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    struct Cell {
        std::size_t image;
        double variance;
        std::uint64_t seed;
        std::string method;
        std::string row;
        std::string error;
    };
    try {
        if (args.images.empty() || args.variances.empty() || args.seeds.empty() || args.methods.empty()) {
            throw std::invalid_argument("sweep needs at least one image, variance, seed and method");
        }
        for (const auto& m : args.methods) {
            check_method(m);
        }
        for (const double v : args.variances) {
            if (!(v >= 0.0)) {
                throw std::invalid_argument("noise variance must be nonnegative");
            }
        }
        std::vector<ImageGrid> images;
        for (const auto& path : args.images) {
            images.push_back(load_image(path));
        }
        std::vector<Cell> cells;
        for (std::size_t i = 0; i < images.size(); ++i) {
            for (const double v : args.variances) {
                for (const auto seed : args.seeds) {
                    for (const auto& m : args.methods) {
                        cells.push_back({i, v, seed, m, {}, {}});
                    }
                }
            }
        }

        std::atomic<std::size_t> next{0};
        const auto worker = [&]() {
            for (std::size_t k = next++; k < cells.size(); k = next++) {
                Cell& cell = cells[k];
                try {
                    const ImageGrid& clean = images[cell.image];
                    const ImageGrid noisy = add_awgn(clean, std::sqrt(cell.variance), cell.seed);
                    const auto [denoised, report] = run_method(cell.method, noisy, args.settings);
                    cell.row = csv_row(args.images[cell.image].stem().string(), format_double(cell.variance),
                                       std::to_string(cell.seed), cell.method,
                                       format_double(psnr(clean, denoised).psnr_db), report.runtime_ms,
                                       report.config);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            }
        };
        const unsigned threads = std::max(1U, std::min<unsigned>(args.threads, static_cast<unsigned>(cells.size())));
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 1; t < threads; ++t) {
                pool.emplace_back(worker);
            }
            worker();
        }
        for (const auto& cell : cells) {
            if (!cell.error.empty()) {
                err << "sweep: cell image=" << args.images[cell.image].string()
                    << " variance=" << format_double(cell.variance) << " seed=" << cell.seed
                    << " method=" << cell.method << " failed: " << cell.error << '\n';
                return 1;
            }
        }
        std::ofstream csv = open_csv(args.output, args.append);
        for (const auto& cell : cells) {
            csv << cell.row << '\n';
        }
        if (!csv) {
            throw std::runtime_error("failed writing " + args.output.string());
        }
        out << "rows=" << cells.size() << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "sweep: " << e.what() << '\n';
        return 1;
    }
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.format != "pgm" && args.format != "png") {
            throw std::invalid_argument("--format must be pgm or png");
        }
        const ImageGrid clean = load_image(args.clean);
        const ImageGrid noisy = add_awgn(clean, args.sigma, args.seed);
        std::filesystem::create_directories(args.output_dir);

        struct Panel {
            std::string name;
            std::string method;
            ImageGrid image;
        };
        std::vector<Panel> panels;
        panels.push_back({"a_original", "original", clean});
        panels.push_back({"b_noisy", "noisy", noisy});
        const std::pair<const char*, const char*> methods[] = {
            {"c_hard", "hard"}, {"d_soft", "soft"}, {"e_wiener", "wiener"}, {"f_contourlet", "contourlet"}};
        for (const auto& [panel, method] : methods) {
            panels.push_back({panel, method, run_method(method, noisy, args.settings).first});
        }

        std::ostringstream summary;
        summary << kCompareHeader << '\n';
        for (const auto& p : panels) {
            save_image(p.image, args.output_dir / (p.name + "." + args.format));
            summary << p.name << ',' << p.method << ',' << format_double(psnr(clean, p.image).psnr_db) << ','
                    << format_double(psnr_quantized(clean, p.image).psnr_db) << '\n';
        }
        const auto csv_path = args.output_dir / "summary.csv";
        std::ofstream csv(csv_path, std::ios::trunc);
        csv << summary.str();
        if (!csv) {
            throw std::runtime_error("cannot write " + csv_path.string());
        }
        out << summary.str();
        return 0;
    } catch (const std::exception& e) {
        err << "compare: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Contourlet and wavelet image denoising"};
    app.require_subcommand(1);

    AddNoiseArgs noise_args;
    auto* add_noise = app.add_subcommand("add-noise", "Add white Gaussian noise to an image");
    add_noise->add_option("input", noise_args.input, "Clean image (PGM or PNG)")->required();
    add_noise->add_option("output", noise_args.output, "Noisy image to write")->required();
    add_noise->add_option("--sigma", noise_args.sigma, "Noise standard deviation")->required()->check(
        CLI::NonNegativeNumber);
    add_noise->add_option("--seed", noise_args.seed, "RNG seed")->capture_default_str();

    DenoiseArgs denoise_args;
    MethodFlags denoise_flags;
    std::string reference;
    std::string csv;
    auto* denoise = app.add_subcommand("denoise", "Denoise an image and print a report");
    denoise->add_option("input", denoise_args.input, "Noisy image")->required();
    denoise->add_option("output", denoise_args.output, "Denoised image to write")->required();
    denoise->add_option("--method", denoise_args.method, "hard, soft, wiener or contourlet")
        ->capture_default_str()
        ->check(CLI::IsMember({"hard", "soft", "wiener", "contourlet"}));
    denoise->add_option("--reference", reference, "Clean image for PSNR");
    denoise->add_option("--csv", csv, "Append a CSV row to this file");
    denoise_flags.attach(*denoise);

    SweepArgs sweep_args;
    MethodFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "PSNR against noise variance for every method");
    sweep->add_option("--image", sweep_args.images, "Clean image (repeatable)")->required();
    sweep->add_option("--variances", sweep_args.variances, "Noise variances")->delimiter(',')->capture_default_str();
    sweep->add_option("--seeds", sweep_args.seeds, "RNG seeds")->delimiter(',')->capture_default_str();
    sweep->add_option("--methods", sweep_args.methods, "Methods to run")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::IsMember({"hard", "soft", "wiener", "contourlet"}));
    sweep->add_option("--out", sweep_args.output, "CSV file")->required();
    sweep->add_flag("--append", sweep_args.append, "Append to an existing CSV");
    sweep_args.threads = default_threads();
    sweep->add_option("--threads", sweep_args.threads, std::string("Worker threads (default from ") + kThreadsEnv + ")")
        ->check(CLI::Range(1, 256));
    sweep_flags.attach(*sweep);

    CompareArgs compare_args;
    MethodFlags compare_flags;
    auto* compare = app.add_subcommand("compare", "Write the six-panel comparison and a PSNR summary");
    compare->add_option("clean", compare_args.clean, "Clean image")->required();
    compare->add_option("output_dir", compare_args.output_dir, "Directory to write")->required();
    compare->add_option("--sigma", compare_args.sigma, "Noise standard deviation")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    compare->add_option("--seed", compare_args.seed, "RNG seed")->capture_default_str();
    compare->add_option("--format", compare_args.format, "pgm or png")
        ->capture_default_str()
        ->check(CLI::IsMember({"pgm", "png"}));
    compare_flags.attach(*compare);

    std::filesystem::path phantom_out;
    std::size_t phantom_width = 256;
    std::size_t phantom_height = 256;
    auto* phantom = app.add_subcommand("phantom", "Write the synthetic test phantom");
    phantom->add_option("output", phantom_out, "Image to write")->required();
    phantom->add_option("--width", phantom_width)->capture_default_str()->check(CLI::PositiveNumber);
    phantom->add_option("--height", phantom_height)->capture_default_str()->check(CLI::PositiveNumber);

    std::filesystem::path dump_in;
    std::filesystem::path dump_out;
    MethodFlags dump_flags;
    auto* dump = app.add_subcommand("dump-coeffs", "Write contourlet coefficients as a flat binary file");
    dump->add_option("input", dump_in, "Image")->required();
    dump->add_option("output", dump_out, "Binary file to write")->required();
    dump_flags.attach(*dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*add_noise) {
            return cmd_add_noise(noise_args, std::cout, std::cerr);
        }
        if (*denoise) {
            denoise_args.settings = denoise_flags.build();
            if (!reference.empty()) {
                denoise_args.reference = reference;
            }
            if (!csv.empty()) {
                denoise_args.csv = csv;
            }
            return cmd_denoise(denoise_args, std::cout, std::cerr);
        }
        if (*sweep) {
            sweep_args.settings = sweep_flags.build();
            return cmd_sweep(sweep_args, std::cout, std::cerr);
        }
        if (*compare) {
            compare_args.settings = compare_flags.build();
            return cmd_compare(compare_args, std::cout, std::cerr);
        }
        if (*phantom) {
            save_image(make_phantom(phantom_width, phantom_height), phantom_out);
            return 0;
        }
        if (*dump) {
            const ContourletCoeffs coeffs = contourlet_forward(load_image(dump_in), dump_flags.build().contourlet);
            std::ofstream out(dump_out, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot write " + dump_out.string());
            }
            write_coefficients(out, coeffs);
            std::cout << "coefficients=" << coeffs.total_count() << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace ctd::cli
