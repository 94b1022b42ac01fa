#pragma once

#include "bstab/chern.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace bstab::cli {

enum class OutputFormat { Json, Csv, Svg };

struct Config {
    VarietyData variety = VarietyData::p3();
    std::string variety_name = "p3";
    double tolerance = kDefaultTolerance;
    long box_bound = 8;
    double nu_window = 1e-3;
    unsigned workers = 1;
    std::optional<std::string> cache_dir;
    OutputFormat output = OutputFormat::Json;
};

/// Environment variable naming the cache directory; overrides the config file.
inline constexpr const char* kCacheEnv = "BSTAB_CACHE_DIR";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

/// Hash over the config fields that can change command output.
std::string config_fingerprint(const Config& c);

/// Runs one subcommand. Exit codes: 0 ok, 1 malformed input, 2 numeric failure.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bstab::cli
