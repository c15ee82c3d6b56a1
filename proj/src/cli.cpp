#include "cfstereo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfstereo/config.hpp"
#include "cfstereo/evaluation.hpp"
#include "cfstereo/io.hpp"
#include "cfstereo/pipeline.hpp"
#include "cfstereo/synth.hpp"

namespace cfstereo {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Replicates the last row/column until both dimensions are multiples of `m`.
Grid2D pad_to_multiple(const Grid2D& img, std::size_t m) {
    const std::size_t h = img.dim(0), w = img.dim(1);
    const std::size_t ph = (h + m - 1) / m * m, pw = (w + m - 1) / m * m;
    if (ph == h && pw == w) return img;
    Grid2D out({ph, pw});
    for (std::size_t y = 0; y < ph; ++y)
        for (std::size_t x = 0; x < pw; ++x) out(y, x) = img(std::min(y, h - 1), std::min(x, w - 1));
    return out;
}

Grid2D crop(const Grid2D& g, std::size_t h, std::size_t w) {
    if (g.dim(0) == h && g.dim(1) == w) return g;
    Grid2D out({h, w});
    for (std::size_t y = 0; y < h; ++y) std::copy_n(g.row(y), w, out.row(y));
    return out;
}

struct MatchArgs {
    std::string left, right, config, out_disp, out_unc, dump_dir;
};

int run_match(const MatchArgs& a, std::ostream& out) {
    const PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_config(a.config);
    cfg.validate();
    const Grid2D left = read_pnm(a.left);
    const Grid2D right = read_pnm(a.right);
    if (left.shape() != right.shape()) throw ShapeError("left and right images differ in size");
    const std::size_t h = left.dim(0), w = left.dim(1);

    const PipelineOutput result =
        run_pipeline(pad_to_multiple(left, kPipelineAlignment), pad_to_multiple(right, kPipelineAlignment), cfg);
    for (const fs::path& p : {fs::path(a.out_disp), fs::path(a.out_unc)}) {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
    }
    write_pfm(a.out_disp, crop(result.disparity, h, w));
    write_pfm(a.out_unc, crop(result.uncertainty, h, w));

    fs::path config_echo = fs::path(a.out_disp);
    config_echo.replace_extension(".config.txt");
    {
        std::ofstream echo(config_echo);
        if (!echo) throw FormatError("cannot write '" + config_echo.string() + "'");
        echo << to_text(cfg);
    }

    if (!a.dump_dir.empty()) {
        fs::create_directories(a.dump_dir);
        for (const auto& st : result.stages) {
            const std::size_t f = std::size_t{1} << st.scale;
            const std::size_t sh = (h + f - 1) / f, sw = (w + f - 1) / f;
            const std::string s = std::to_string(st.scale);
            write_pfm(fs::path(a.dump_dir) / ("D" + s + ".pfm"), crop(st.disparity.values, sh, sw));
            write_pfm(fs::path(a.dump_dir) / ("U" + s + ".pfm"), crop(st.uncertainty.values, sh, sw));
        }
    }
    out << "width=" << w << "\nheight=" << h << "\ndisparity=" << a.out_disp << "\nuncertainty=" << a.out_unc
        << "\nconfig=" << config_echo.string() << '\n';
    return kExitOk;
}

struct EvalArgs {
    std::string pred, gt, mask, unc;
    std::optional<double> filter_sqrtu;
};

int run_eval(const EvalArgs& a, std::ostream& out) {
    const Grid2D pred = read_pfm(a.pred);
    const Grid2D gt = read_pfm(a.gt);
    std::optional<Grid2D> mask;
    if (!a.mask.empty()) mask = read_pnm(a.mask);
    const Grid2D* m = mask ? &*mask : nullptr;

    out << "gt_nonfinite=" << count_nonfinite(gt) << '\n'
        << "bad1.0=" << fmt(bad_tau(pred, gt, 1.0, m)) << '\n'
        << "bad2.0=" << fmt(bad_tau(pred, gt, 2.0, m)) << '\n'
        << "d1_all=" << fmt(d1_all(pred, gt, m)) << '\n'
        << "avg_error=" << fmt(avg_error(pred, gt, m)) << '\n';
    if (!a.unc.empty()) {
        const Grid2D unc = read_pfm(a.unc);
        const double t = a.filter_sqrtu.value_or(std::numeric_limits<double>::infinity());
        const FilteredMetrics fm = filtered_metrics(pred, gt, unc, t, m);
        out << "filter_sqrtu=" << fmt(t) << '\n'
            << "kept_fraction=" << fmt(fm.kept_fraction) << '\n'
            << "d1_kept=" << fmt(fm.d1_kept) << '\n';
    }
    return kExitOk;
}

struct SynthArgs {
    std::string spec, out_dir;
    std::uint64_t seed = 0;
    std::size_t height = 128, width = 256;
    double noise = 0;
};

int run_synth(const SynthArgs& a, std::ostream& out) {
    SyntheticScene scene = random_dot_stereogram(a.height, a.width, parse_disparity_spec(a.spec), a.seed);
    if (a.noise > 0) add_image_noise(scene, a.noise, a.seed);
    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    // 16-bit samples keep the sub-pixel warp intact on disk.
    write_pgm(dir / "left.pgm", scene.left, 65535);
    write_pgm(dir / "right.pgm", scene.right, 65535);
    Grid2D gt = scene.gt;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (scene.valid.data()[i] == 0) gt.data()[i] = std::numeric_limits<Real>::infinity();
    }
    write_pfm(dir / "gt.pfm", gt);
    write_pgm(dir / "mask.pgm", scene.valid, 255);

    std::size_t valid = 0;
    for (Real v : scene.valid.values()) valid += v != 0;
    out << "spec=" << to_string(scene.spec) << "\nseed=" << a.seed << "\nvalid_pixels=" << valid
        << "\nout=" << a.out_dir << '\n';
    return kExitOk;
}

int run_rank(const std::string& path, std::ostream& out) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open ballot file '" + path + "'");
    std::vector<RankBallot> ballots;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ballots.push_back(parse_ballot(line));
    }
    const Ranking ranking = schulze_rank(ballots);
    std::size_t position = 1;
    for (const auto& group : ranking) {
        for (const auto& name : group) out << "rank." << position << '=' << name << '\n';
        position += group.size();
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cascade-and-fused cost volume stereo matcher"};
    app.require_subcommand(1);

    MatchArgs match;
    auto* match_cmd = app.add_subcommand("match", "Estimate disparity for a rectified stereo pair");
    match_cmd->add_option("--left", match.left, "Left image (PGM/PPM)")->required();
    match_cmd->add_option("--right", match.right, "Right image (PGM/PPM)")->required();
    match_cmd->add_option("--config", match.config, "key = value configuration file");
    match_cmd->add_option("--out-disp", match.out_disp, "Output disparity (PFM)")->required();
    match_cmd->add_option("--out-unc", match.out_unc, "Output uncertainty (PFM)")->required();
    match_cmd->add_option("--dump-stages", match.dump_dir, "Directory for per-stage D/U maps");

    EvalArgs eval;
    double filter = 0;
    auto* eval_cmd = app.add_subcommand("eval", "Score a disparity map against ground truth");
    eval_cmd->add_option("--pred", eval.pred, "Predicted disparity (PFM)")->required();
    eval_cmd->add_option("--gt", eval.gt, "Ground-truth disparity (PFM)")->required();
    eval_cmd->add_option("--mask", eval.mask, "Validity mask (PGM, non-zero = valid)");
    eval_cmd->add_option("--unc", eval.unc, "Uncertainty map (PFM)");
    auto* filter_opt = eval_cmd->add_option("--filter-sqrtu", filter, "Drop pixels with sqrt(U) >= T");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a random-dot stereo pair with ground truth");
    synth_cmd->add_option("--spec", synth.spec, "constant:D | two-plane:A:B | slanted:B:GX:GY | piecewise:K")
        ->required();
    synth_cmd->add_option("--seed", synth.seed, "Random seed")->required();
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
    synth_cmd->add_option("--height", synth.height, "Image height")->capture_default_str();
    synth_cmd->add_option("--width", synth.width, "Image width")->capture_default_str();
    synth_cmd->add_option("--noise", synth.noise, "Gaussian image noise sigma")->capture_default_str();

    std::string ballots;
    auto* rank_cmd = app.add_subcommand("rank", "Fuse per-dataset rankings with the Schulze method");
    rank_cmd->add_option("--ballots", ballots, "One ballot per line, best first, comma separated")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*match_cmd) return run_match(match, out);
        if (*eval_cmd) {
            if (*filter_opt) eval.filter_sqrtu = filter;
            return run_eval(eval, out);
        }
        if (*synth_cmd) return run_synth(synth, out);
        if (*rank_cmd) return run_rank(ballots, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace cfstereo
