#include "cfstereo/pipeline.hpp"

#include <string>

#include "cfstereo/simd/kernels.hpp"
#include "cfstereo/tensor_ops.hpp"

namespace cfstereo {
namespace {

constexpr std::size_t kLevels = 5;

// Runs fn and prefixes any library error with the stage it came from.
template <typename Fn>
auto tagged(std::size_t scale, Fn&& fn) {
    const std::string tag = "stage " + std::to_string(scale) + ": ";
    try {
        return fn();
    } catch (const ShapeError& e) {
        throw ShapeError(tag + e.what());
    } catch (const DataError& e) {
        throw DataError(tag + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(tag + e.what());
    } catch (const Error& e) {
        throw Error(tag + e.what());
    }
}

Grid2D scaled(const Grid2D& g, Real factor) {
    Grid2D out(g.shape());
    simd::kernels().scale(g.data(), factor, out.data(), g.size());
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    features.validate();
    fusion.validate();
    cascade.validate();
    // Scale 3 needs >= 2 planes, and fusion pools planes twice more.
    const std::size_t quantum = fusion.enabled ? 32 : 8;
    if (dmax % quantum != 0 || dmax < (fusion.enabled ? 64u : 16u)) {
        throw ConfigError("pipeline.dmax (" + std::to_string(dmax) + ") must be a multiple of " +
                          std::to_string(quantum) + " and at least " + (fusion.enabled ? "64" : "16"));
    }
}

const StageResult& PipelineOutput::stage(std::size_t scale) const {
    for (const auto& s : stages) {
        if (s.scale == scale) return s;
    }
    throw Error("pipeline output has no stage " + std::to_string(scale));
}

StageResult refine_stage(const StageResult& coarser, const Grid3D& left, const Grid3D& right,
                         const PipelineConfig& cfg) {
    const std::size_t scale = coarser.scale - 1;
    const std::size_t planes = scale == 2 ? cfg.cascade.planes_stage2 : cfg.cascade.planes_stage1;
    const SearchRange range = next_range(coarser.disparity, coarser.uncertainty, cfg.cascade.params_from(coarser.scale),
                                         cfg.cascade.min_step, planes, cfg.dmax);
    PerPixelPlanes hyp = sample_planes(range, planes);
    CombinationVolume vol = build_sparse_volume(left, right, cfg.features.groups, scale, hyp);
    vol.data = aggregate(vol.data, cfg.fusion);
    const ScoreVolume sv = reduce_to_cost(vol, cfg.cost);
    const Grid3D prob = disparity_distribution(sv);
    DisparityMap d{expected_plane(sv.planes, prob), scale};
    UncertaintyMap u{plane_variance(sv.planes, prob, d.values), scale};
    return StageResult{std::move(d), std::move(u), sv.planes, scale};
}

PipelineOutput run_pipeline(const Grid2D& left, const Grid2D& right, const PipelineConfig& cfg) {
    cfg.validate();
    if (left.shape() != right.shape()) {
        throw ShapeError("left " + shape_string(left) + " and right " + shape_string(right) + " images differ");
    }
    if (left.dim(0) % kPipelineAlignment || left.dim(1) % kPipelineAlignment) {
        throw ShapeError("image " + shape_string(left) + " must have dimensions divisible by " +
                         std::to_string(kPipelineAlignment));
    }

    const FeaturePyramid fl = build_pyramid(left, kLevels, cfg.features);
    const FeaturePyramid fr = build_pyramid(right, kLevels, cfg.features);
    const std::size_t groups = cfg.features.groups;

    PipelineOutput out;
    out.stages.push_back(tagged(3, [&] {
        const CombinationVolume v3 = build_dense_volume(fl.level(3), fr.level(3), groups, 3, cfg.dmax);
        ScoreVolume sv;
        if (cfg.fusion.enabled) {
            const CombinationVolume v4 = build_dense_volume(fl.level(4), fr.level(4), groups, 4, cfg.dmax);
            const CombinationVolume v5 = build_dense_volume(fl.level(5), fr.level(5), groups, 5, cfg.dmax);
            sv = fuse_volumes(v3, v4, v5, cfg.fusion, cfg.cost);
        } else {
            sv = unfused_cost(v3, cfg.fusion, cfg.cost);
        }
        InitialEstimate init = initial_disparity(sv);
        return StageResult{std::move(init.disparity), std::move(init.uncertainty), sv.planes, 3};
    }));
    for (std::size_t scale = 2; scale >= 1; --scale) {
        out.stages.push_back(
            tagged(scale, [&] { return refine_stage(out.stages.back(), fl.level(scale), fr.level(scale), cfg); }));
    }

    const StageResult& last = out.stages.back();
    out.disparity = scaled(bilinear_upsample2x(last.disparity.values), Real(2));
    out.uncertainty = scaled(bilinear_upsample2x(last.uncertainty.values), Real(4));
    return out;
}

}  // namespace cfstereo
