#pragma once

#include <filesystem>
#include <string>

#include "cfstereo/pipeline.hpp"

namespace cfstereo {

/// Parses `key = value` lines ('#' starts a comment) on top of the defaults.
/// Unknown or repeated keys and unparsable values raise ConfigError.
///
/// Keys: features.{channels,groups,census_radius,stat_radius},
/// cost.{w_group,w_absdiff}, pipeline.dmax,
/// fusion.{enabled,smooth_radius,passes,hourglass_passes},
/// cascade.{alpha,beta,n1,n2,min_step}. smooth_radius takes one value or
/// "plane,column,row"; alpha and beta take one value or "stage3,stage2".
PipelineConfig parse_config(const std::string& text);

PipelineConfig load_config(const std::filesystem::path& path);

/// Every key with its value; parse_config(to_text(c)) reproduces c exactly.
std::string to_text(const PipelineConfig& cfg);

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

}  // namespace cfstereo
