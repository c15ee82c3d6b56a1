#include "cfstereo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace cfstereo {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

Real to_real(const std::string& key, const std::string& text) {
    double v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': '" + text + "' is not a number");
    return static_cast<Real>(v);
}

std::size_t to_size(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("key '" + key + "': '" + text + "' is not a non-negative integer");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError("key '" + key + "': '" + text + "' is not a boolean");
}

std::string fmt(Real v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(v));
    return std::string(buf, ptr);
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"features.channels", [](auto& c, auto& k, auto& v) { c.features.channels = to_size(k, v); }},
        {"features.groups", [](auto& c, auto& k, auto& v) { c.features.groups = to_size(k, v); }},
        {"features.census_radius", [](auto& c, auto& k, auto& v) { c.features.census_radius = to_size(k, v); }},
        {"features.stat_radius", [](auto& c, auto& k, auto& v) { c.features.stat_radius = to_size(k, v); }},
        {"cost.w_group", [](auto& c, auto& k, auto& v) { c.cost.group = to_real(k, v); }},
        {"cost.w_absdiff", [](auto& c, auto& k, auto& v) { c.cost.absdiff = to_real(k, v); }},
        {"pipeline.dmax", [](auto& c, auto& k, auto& v) { c.dmax = to_size(k, v); }},
        {"fusion.enabled", [](auto& c, auto& k, auto& v) { c.fusion.enabled = to_bool(k, v); }},
        {"fusion.smooth_radius",
         [](auto& c, auto& k, auto& v) {
             const auto items = split_list(v);
             if (items.size() == 1) {
                 c.fusion.smooth_radius.fill(to_size(k, items[0]));
             } else if (items.size() == 3) {
                 for (std::size_t i = 0; i < 3; ++i) c.fusion.smooth_radius[i] = to_size(k, items[i]);
             } else {
                 throw ConfigError("key '" + k + "' takes one radius or three (plane,column,row)");
             }
         }},
        {"fusion.passes", [](auto& c, auto& k, auto& v) { c.fusion.passes = to_size(k, v); }},
        {"fusion.hourglass_passes", [](auto& c, auto& k, auto& v) { c.fusion.hourglass_passes = to_size(k, v); }},
        {"cascade.alpha",
         [](auto& c, auto& k, auto& v) {
             const auto items = split_list(v);
             if (items.size() != 1 && items.size() != 2) throw ConfigError("key '" + k + "' takes 1 or 2 values");
             c.cascade.range[0].alpha = to_real(k, items[0]);
             c.cascade.range[1].alpha = to_real(k, items.back());
         }},
        {"cascade.beta",
         [](auto& c, auto& k, auto& v) {
             const auto items = split_list(v);
             if (items.size() != 1 && items.size() != 2) throw ConfigError("key '" + k + "' takes 1 or 2 values");
             c.cascade.range[0].beta = to_real(k, items[0]);
             c.cascade.range[1].beta = to_real(k, items.back());
         }},
        {"cascade.n1", [](auto& c, auto& k, auto& v) { c.cascade.planes_stage1 = to_size(k, v); }},
        {"cascade.n2", [](auto& c, auto& k, auto& v) { c.cascade.planes_stage2 = to_size(k, v); }},
        {"cascade.min_step", [](auto& c, auto& k, auto& v) { c.cascade.min_step = to_real(k, v); }},
    };
    return table;
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::set<std::string> seen;
    std::stringstream lines(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ConfigError("config line " + std::to_string(number) + ": key '" + key + "' given twice");
        }
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const PipelineConfig& c) {
    std::ostringstream os;
    os << "features.channels = " << c.features.channels << '\n'
       << "features.groups = " << c.features.groups << '\n'
       << "features.census_radius = " << c.features.census_radius << '\n'
       << "features.stat_radius = " << c.features.stat_radius << '\n'
       << "cost.w_group = " << fmt(c.cost.group) << '\n'
       << "cost.w_absdiff = " << fmt(c.cost.absdiff) << '\n'
       << "pipeline.dmax = " << c.dmax << '\n'
       << "fusion.enabled = " << (c.fusion.enabled ? "true" : "false") << '\n'
       << "fusion.smooth_radius = " << c.fusion.smooth_radius[0] << ',' << c.fusion.smooth_radius[1] << ','
       << c.fusion.smooth_radius[2] << '\n'
       << "fusion.passes = " << c.fusion.passes << '\n'
       << "fusion.hourglass_passes = " << c.fusion.hourglass_passes << '\n'
       << "cascade.alpha = " << fmt(c.cascade.range[0].alpha) << ',' << fmt(c.cascade.range[1].alpha) << '\n'
       << "cascade.beta = " << fmt(c.cascade.range[0].beta) << ',' << fmt(c.cascade.range[1].beta) << '\n'
       << "cascade.n1 = " << c.cascade.planes_stage1 << '\n'
       << "cascade.n2 = " << c.cascade.planes_stage2 << '\n'
       << "cascade.min_step = " << fmt(c.cascade.min_step) << '\n';
    return os.str();
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) { return to_text(a) == to_text(b); }

}  // namespace cfstereo
