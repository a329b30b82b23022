#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctd/contourlet.hpp"
#include "ctd/denoise.hpp"
#include "ctd/wavelet.hpp"

namespace ctd::cli {

inline constexpr const char* kSweepHeader = "image,variance,seed,method,psnr_db,runtime_ms,config";
inline constexpr const char* kCompareHeader = "panel,method,psnr_db,psnr_quantized_db";
inline constexpr const char* kThreadsEnv = "CTD_THREADS";

/// Parameters shared by every command that runs a denoiser.
struct MethodSettings {
    ContourletConfig contourlet;
    ContourletDenoiseOptions contourlet_options;
    WaveletDenoiseOptions wavelet;
};

/// "hard", "soft", "wiener" or "contourlet"; anything else throws.
std::pair<ImageGrid, DenoiseReport> run_method(const std::string& method, const ImageGrid& noisy,
                                               const MethodSettings& settings);

/// Config text of `method` under `settings`, as reported and digested.
std::string method_config(const std::string& method, const MethodSettings& settings);

struct AddNoiseArgs {
    std::filesystem::path input;
    std::filesystem::path output;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct DenoiseArgs {
    std::filesystem::path input;
    std::filesystem::path output;
    std::string method = "contourlet";
    MethodSettings settings;
    std::optional<std::filesystem::path> reference;
    std::optional<std::filesystem::path> csv;
};

struct SweepArgs {
    std::vector<std::filesystem::path> images;
    std::vector<double> variances{25, 30, 100, 225, 400, 625, 900};
    std::vector<std::uint64_t> seeds{1};
    std::vector<std::string> methods{"hard", "soft", "wiener", "contourlet"};
    std::filesystem::path output;
    bool append = false;
    unsigned threads = 1;
    MethodSettings settings;
};

struct CompareArgs {
    std::filesystem::path clean;
    double sigma = 25.0;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir;
    std::string format = "pgm";
    MethodSettings settings;
};

int cmd_add_noise(const AddNoiseArgs& args, std::ostream& out, std::ostream& err);
int cmd_denoise(const DenoiseArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches; returns the process exit status.
int run(int argc, char** argv);

}  // namespace ctd::cli
