#include "iscat/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "iscat/io.hpp"

namespace iscat {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config: expected a boolean, got '" + value + "'");
}

Eigen::VectorXd parse_vector(const std::string& value) {
    std::vector<double> entries;
    std::istringstream stream(value);
    std::string field;
    while (std::getline(stream, field, ',')) entries.push_back(std::stod(trim(field)));
    Eigen::VectorXd v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i];
    return v;
}

DofLayout parse_layout(const std::string& value) {
    if (value == "single") return DofLayout::Single;
    if (value == "doubly_connected" || value == "dc") return DofLayout::DoublyConnected;
    if (value == "multi_object" || value == "mo") return DofLayout::MultiObject;
    throw std::invalid_argument("config: unknown layout '" + value + "'");
}

std::string layout_name(DofLayout layout) {
    switch (layout) {
        case DofLayout::Single: return "single";
        case DofLayout::DoublyConnected: return "doubly_connected";
        case DofLayout::MultiObject: return "multi_object";
    }
    return "?";
}

std::string vector_text(const Eigen::VectorXd& v) {
    std::string text;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) text += ',';
        text += format_g17(v[i]);
    }
    return text;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "scenario") {
        scenario = value;
    } else if (key == "mode") {
        if (value == "sbd") {
            mode = SearchMode::Sbd;
        } else if (value == "go") {
            mode = SearchMode::Go;
        } else {
            throw std::invalid_argument("config: mode must be sbd or go");
        }
    } else if (key == "seed") {
        seed = std::stoull(value);
    } else if (key == "seeds") {
        seeds.clear();
        std::istringstream stream(value);
        std::string field;
        while (std::getline(stream, field, ',')) seeds.push_back(std::stoull(trim(field)));
    } else if (key == "snr_db") {
        if (value == "none") {
            snr_db.reset();
        } else {
            snr_db = std::stod(value);
        }
    } else if (key == "fine_n_side") {
        fine_n_side = std::stoi(value);
    } else if (key == "inversion_n_side") {
        inversion_n_side = std::stoi(value);
    } else if (key == "domain_side") {
        domain_side = std::stod(value);
    } else if (key == "views") {
        views = std::stoi(value);
    } else if (key == "probes") {
        probes = std::stoi(value);
    } else if (key == "observation_radius") {
        observation_radius = std::stod(value);
    } else if (key == "particles") {
        particles = std::stoi(value);
    } else if (key == "iterations") {
        iterations = std::stoi(value);
    } else if (key == "initial_samples") {
        initial_samples = std::stoi(value);
    } else if (key == "go_iterations") {
        go_iterations = std::stoi(value);
    } else if (key == "inertia") {
        inertia = std::stod(value);
    } else if (key == "cognitive") {
        cognitive = std::stod(value);
    } else if (key == "social") {
        social = std::stod(value);
    } else if (key == "velocity_clamp") {
        velocity_clamp = std::stod(value);
    } else if (key == "fit_beta") {
        fit_beta = parse_bool(value);
    } else if (key == "allow_inverse_crime") {
        allow_inverse_crime = parse_bool(value);
    } else if (key == "dump_model") {
        dump_model = parse_bool(value);
    } else if (key == "samples_per_segment") {
        samples_per_segment = std::stoi(value);
    } else if (key == "workers") {
        workers = std::stoi(value);
    } else if (key == "out") {
        out = value;
    } else if (key == "layout") {
        custom_layout = parse_layout(value);
    } else if (key == "spline_points") {
        custom_spline_points = std::stoi(value);
    } else if (key == "scene") {
        custom_scene = parse_vector(value);
    } else if (key == "bounds_lower") {
        custom_bounds_lower = parse_vector(value);
    } else if (key == "bounds_upper") {
        custom_bounds_upper = parse_vector(value);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_number) +
                                        " is not 'key = value'");
        }
        config.apply(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return config;
}

std::string RunConfig::canonical_text() const {
    std::ostringstream out_text;
    out_text << "scenario=" << scenario << ";mode=" << (mode == SearchMode::Sbd ? "sbd" : "go")
             << ";seed=" << seed << ";seeds=";
    for (std::size_t i = 0; i < seeds.size(); ++i) out_text << (i ? "," : "") << seeds[i];
    out_text << ";snr_db=" << (snr_db ? format_g17(*snr_db) : "none")
             << ";fine_n_side=" << fine_n_side << ";inversion_n_side=" << inversion_n_side
             << ";domain_side=" << (domain_side ? format_g17(*domain_side) : "scenario")
             << ";views=" << (views ? std::to_string(*views) : "scenario")
             << ";probes=" << (probes ? std::to_string(*probes) : "scenario")
             << ";observation_radius="
             << (observation_radius ? format_g17(*observation_radius) : "scenario")
             << ";particles=" << particles
             << ";iterations=" << (iterations ? std::to_string(*iterations) : "scenario")
             << ";initial_samples="
             << (initial_samples ? std::to_string(*initial_samples) : "scenario")
             << ";go_iterations=" << go_iterations << ";inertia=" << format_g17(inertia)
             << ";cognitive=" << format_g17(cognitive) << ";social=" << format_g17(social)
             << ";velocity_clamp=" << format_g17(velocity_clamp) << ";fit_beta=" << fit_beta
             << ";allow_inverse_crime=" << allow_inverse_crime
             << ";samples_per_segment=" << samples_per_segment;
    if (custom_layout) out_text << ";layout=" << layout_name(*custom_layout);
    if (custom_spline_points) out_text << ";spline_points=" << *custom_spline_points;
    if (custom_scene) out_text << ";scene=" << vector_text(*custom_scene);
    if (custom_bounds_lower) out_text << ";bounds_lower=" << vector_text(*custom_bounds_lower);
    if (custom_bounds_upper) out_text << ";bounds_upper=" << vector_text(*custom_bounds_upper);
    return out_text.str();
}

std::string RunConfig::hash_hex() const {
    const std::string text = canonical_text();
    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

Scenario RunConfig::resolve_scenario() const {
    Scenario s = scenario_by_name(scenario);
    const double side = domain_side.value_or(s.fine_grid.side);
    s.fine_grid = Grid(side, fine_n_side);
    s.inversion_grid = Grid(side, inversion_n_side);
    if (views) s.setup.views = *views;
    if (probes) s.setup.probes = *probes;
    if (observation_radius) s.setup.radius = *observation_radius;

    if (custom_layout) s.layout = *custom_layout;
    if (custom_spline_points) s.spline_points = *custom_spline_points;
    if (custom_bounds_lower && custom_bounds_upper) {
        s.bounds = Bounds{*custom_bounds_lower, *custom_bounds_upper};
    } else if (custom_bounds_lower || custom_bounds_upper) {
        throw std::invalid_argument("config: bounds_lower and bounds_upper come together");
    }
    if (custom_scene) {
        s.true_values = *custom_scene;
        s.has_truth = true;
        s.truth();  // validates layout/size/bounds consistency
    } else if (custom_layout || custom_spline_points) {
        throw std::invalid_argument("config: a custom layout needs an explicit scene");
    }
    return s;
}

InversionConfig RunConfig::inversion_config(const Scenario& s) const {
    InversionConfig inv;
    inv.mode = mode;
    inv.particles = particles;
    inv.iterations = iterations.value_or(s.default_iterations);
    inv.initial_samples = initial_samples.value_or(s.default_initial_samples);
    inv.inertia = inertia;
    inv.cognitive = cognitive;
    inv.social = social;
    inv.velocity_clamp = velocity_clamp;
    inv.fit_beta = fit_beta;
    inv.seed = seed;
    inv.allow_inverse_crime = allow_inverse_crime;
    inv.samples_per_segment = samples_per_segment;
    inv.layout = s.layout;
    inv.spline_points = s.spline_points;
    inv.bounds = s.bounds;
    inv.validate();
    return inv;
}

}  // namespace iscat
