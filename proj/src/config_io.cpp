#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ira/harness.hpp"

namespace ira {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what)
{
    throw Error(ErrorCode::ConfigParse, fmt::format("line {}: {}", line, what));
}

template <class T>
T parse_number(const std::string& token, int line, const std::string& key)
{
    T value{};
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        parse_error(line, fmt::format("'{}' is not a valid value for {}", token, key));
    return value;
}

std::vector<std::string> split_words(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) {
        // allow "0.05, 0.1" as well as "0.05 0.1"
        std::string piece;
        std::istringstream parts(w);
        while (std::getline(parts, piece, ','))
            if (!piece.empty())
                out.push_back(piece);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        raw = trim(raw);
        if (raw.empty())
            continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos)
            parse_error(line, "expected 'key = value'");
        const std::string key = trim(raw.substr(0, eq));
        const std::string value = trim(raw.substr(eq + 1));
        const auto words = split_words(value);
        const auto single = [&]() -> const std::string& {
            if (words.size() != 1)
                parse_error(line, fmt::format("{} takes exactly one value", key));
            return words.front();
        };

        if (key == "snr_db")
            cfg.snr_db = parse_number<double>(single(), line, key);
        else if (key == "rate")
            cfg.rate = parse_number<double>(single(), line, key);
        else if (key == "vf_span")
            cfg.vf_span = parse_number<double>(single(), line, key);
        else if (key == "window_span")
            cfg.window_span = parse_number<double>(single(), line, key);
        else if (key == "window_step")
            cfg.window_step = parse_number<double>(single(), line, key);
        else if (key == "degree") {
            if (words.size() != 2)
                parse_error(line, "degree takes '<degree> <probability>'");
            cfg.distribution.push_back(
                {parse_number<int>(words[0], line, key), parse_number<double>(words[1], line, key)});
        } else if (key == "loads") {
            if (words.empty())
                parse_error(line, "loads needs at least one value");
            cfg.load_grid.clear();
            for (const auto& w : words)
                cfg.load_grid.push_back(parse_number<double>(w, line, key));
        } else if (key == "min_users_per_point")
            cfg.min_users_per_point = parse_number<std::uint64_t>(single(), line, key);
        else if (key == "max_lost_events")
            cfg.max_lost_events = parse_number<std::uint64_t>(single(), line, key);
        else if (key == "seed")
            cfg.seed = parse_number<std::uint64_t>(single(), line, key);
        else if (key == "output")
            cfg.output = single();
        else if (key == "catalog")
            cfg.catalog_file = single();
        else
            parse_error(line, fmt::format("unknown key '{}'", key));
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ConfigParse, fmt::format("cannot open config '{}'", path));
    return parse_experiment_config(in);
}

void write_experiment_config(std::ostream& out, const ExperimentConfig& cfg)
{
    fmt::print(out, "snr_db = {}\nrate = {}\nvf_span = {}\nwindow_span = {}\nwindow_step = {}\n", cfg.snr_db,
               cfg.rate, cfg.vf_span, cfg.window_span, cfg.window_step);
    for (const auto& e : cfg.distribution)
        fmt::print(out, "degree = {} {}\n", e.degree, e.probability);
    fmt::print(out, "loads = {}\n", fmt::join(cfg.load_grid, " "));
    fmt::print(out, "min_users_per_point = {}\nmax_lost_events = {}\nseed = {}\n", cfg.min_users_per_point,
               cfg.max_lost_events, cfg.seed);
    if (!cfg.output.empty())
        fmt::print(out, "output = {}\n", cfg.output);
    if (!cfg.catalog_file.empty())
        fmt::print(out, "catalog = {}\n", cfg.catalog_file);
}

}  // namespace ira
