#include "iscat/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iscat {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& text) {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == 0) throw std::runtime_error("bad numeric field: " + text);
    return value;
}

void write_comments(std::ofstream& out, const std::vector<std::string>& comments) {
    for (const auto& comment : comments) out << "# " << comment << "\n";
}

}  // namespace

std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_dataset_csv(const std::string& path, const ScatteringDataset& dataset,
                       const std::vector<std::string>& extra_comments) {
    auto out = open_out(path);
    out << "# L_D,n_side_fw,V,M,rho_O,snr_db,seed\n";
    out << "# " << format_g17(dataset.domain_side) << ',' << dataset.n_side_fw << ','
        << dataset.setup.views << ',' << dataset.setup.probes << ','
        << format_g17(dataset.setup.radius) << ','
        << (dataset.snr_db ? format_g17(*dataset.snr_db) : "none") << ',' << dataset.seed
        << "\n";
    write_comments(out, extra_comments);
    for (int v = 1; v <= dataset.setup.views; ++v) {
        for (int m = 1; m <= dataset.setup.probes; ++m) {
            const Eigen::Vector2d probe = dataset.setup.probe_position(m);
            const std::complex<double> s = dataset.scattered(m - 1, v - 1);
            out << v << ',' << m << ',' << format_g17(probe.x()) << ','
                << format_g17(probe.y()) << ',' << format_g17(s.real()) << ','
                << format_g17(s.imag()) << "\n";
        }
    }
}

ScatteringDataset read_dataset_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    ScatteringDataset dataset;
    bool header_parsed = false;
    std::vector<std::array<double, 4>> rows;  // v, m, re, im
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto fields = split(line.substr(1), ',');
            if (!header_parsed && fields.size() == 7) {
                try {
                    dataset.domain_side = parse_double(fields[0]);
                    dataset.n_side_fw = static_cast<int>(parse_double(fields[1]));
                    dataset.setup.views = static_cast<int>(parse_double(fields[2]));
                    dataset.setup.probes = static_cast<int>(parse_double(fields[3]));
                    dataset.setup.radius = parse_double(fields[4]);
                    std::string snr = fields[5];
                    if (snr.find("none") == std::string::npos) {
                        dataset.snr_db = parse_double(snr);
                    }
                    dataset.seed = static_cast<std::uint64_t>(parse_double(fields[6]));
                    header_parsed = true;
                } catch (const std::exception&) {
                    // a names-only or free-form comment line; keep scanning
                }
            }
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 6) throw std::runtime_error("dataset row needs 6 fields: " + line);
        rows.push_back({parse_double(fields[0]), parse_double(fields[1]),
                        parse_double(fields[4]), parse_double(fields[5])});
    }
    if (!header_parsed) throw std::runtime_error("dataset file has no metadata header: " + path);
    dataset.scattered.resize(dataset.setup.probes, dataset.setup.views);
    dataset.scattered.setZero();
    if (static_cast<int>(rows.size()) != dataset.setup.probes * dataset.setup.views) {
        throw std::runtime_error("dataset row count does not match V*M: " + path);
    }
    for (const auto& row : rows) {
        const int v = static_cast<int>(row[0]), m = static_cast<int>(row[1]);
        if (v < 1 || v > dataset.setup.views || m < 1 || m > dataset.setup.probes) {
            throw std::runtime_error("dataset row indices out of range: " + path);
        }
        dataset.scattered(m - 1, v - 1) = {row[2], row[3]};
    }
    return dataset;
}

void write_contrast_csv(const std::string& path, const ContrastMap& map,
                        const std::vector<std::string>& extra_comments) {
    auto out = open_out(path);
    out << "# L_D," << format_g17(map.grid.side) << ",n_side," << map.grid.n_side << "\n";
    write_comments(out, extra_comments);
    out << "x,y,re_tau,im_tau\n";
    for (int n = 0; n < map.grid.size(); ++n) {
        out << format_g17(map.grid.x(n)) << ',' << format_g17(map.grid.y(n)) << ','
            << format_g17(map.values[n].real()) << ',' << format_g17(map.values[n].imag())
            << "\n";
    }
}

ContrastMap read_contrast_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    double side = 0.0;
    int n_side = 0;
    std::vector<std::complex<double>> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto fields = split(line.substr(1), ',');
            if (fields.size() == 4 && fields[0].find("L_D") != std::string::npos) {
                side = parse_double(fields[1]);
                n_side = static_cast<int>(parse_double(fields[3]));
            }
            continue;
        }
        if (line.rfind("x,", 0) == 0) continue;  // column header
        const auto fields = split(line, ',');
        if (fields.size() != 4) throw std::runtime_error("contrast row needs 4 fields: " + line);
        values.emplace_back(parse_double(fields[2]), parse_double(fields[3]));
    }
    if (n_side == 0 || static_cast<int>(values.size()) != n_side * n_side) {
        throw std::runtime_error("contrast file is inconsistent: " + path);
    }
    ContrastMap map{Grid(side, n_side), Eigen::VectorXcd(values.size())};
    for (std::size_t n = 0; n < values.size(); ++n) map.values[n] = values[n];
    return map;
}

void write_contrast_pgm(const std::string& path, const ContrastMap& map) {
    auto out = open_out(path);
    const int n_side = map.grid.n_side;
    double max_abs = 0.0;
    for (int n = 0; n < map.grid.size(); ++n) max_abs = std::max(max_abs, std::abs(map.values[n]));
    out << "P5\n" << n_side << ' ' << n_side << "\n255\n";
    for (int iy = n_side - 1; iy >= 0; --iy) {  // top image row = largest y
        for (int ix = 0; ix < n_side; ++ix) {
            const double a = std::abs(map.values[iy * n_side + ix]);
            const int level = max_abs > 0.0 ? static_cast<int>(std::lround(255.0 * a / max_abs)) : 0;
            out.put(static_cast<char>(level));
        }
    }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::vector<std::string>& extra_comments) {
    auto out = open_out(path);
    write_comments(out, extra_comments);
    out << "i,best_true_phi,S_i,fw_calls,elapsed_s\n";
    for (const auto& row : trace) {
        out << row.iteration << ',' << format_g17(row.best_true_phi) << ',' << row.training_size
            << ',' << row.fw_calls << ',' << format_g17(row.elapsed_s) << "\n";
    }
}

void write_landscape_csv(const std::string& path, const LandscapeResult& result,
                         const std::vector<std::string>& extra_comments) {
    auto out = open_out(path);
    write_comments(out, extra_comments);
    out << "a,b,phi\n";
    for (Eigen::Index i = 0; i < result.a.size(); ++i) {
        for (Eigen::Index j = 0; j < result.b.size(); ++j) {
            out << format_g17(result.a[i]) << ',' << format_g17(result.b[j]) << ','
                << format_g17(result.phi(i, j)) << "\n";
        }
    }
}

void write_dof_values(const std::string& path, const Eigen::VectorXd& values,
                      const std::vector<std::string>& extra_comments) {
    auto out = open_out(path);
    write_comments(out, extra_comments);
    for (Eigen::Index k = 0; k < values.size(); ++k) out << format_g17(values[k]) << "\n";
}

Eigen::VectorXd read_dof_values(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        values.push_back(parse_double(line));
    }
    Eigen::VectorXd result(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) result[k] = values[k];
    return result;
}

void write_model_csv(const std::string& path, const GpModel& model,
                     const TrainingSet& training) {
    auto out = open_out(path);
    out << "# chi," << format_g17(model.trend()) << ",nu2,"
        << format_g17(model.process_variance()) << ",S," << model.training_size() << "\n";
    out << "k,gamma,beta\n";
    const auto& params = model.hyperparameters();
    for (Eigen::Index k = 0; k < params.gamma.size(); ++k) {
        out << k + 1 << ',' << format_g17(params.gamma[k]) << ',' << format_g17(params.beta[k])
            << "\n";
    }
    out << "s,phi,xi\n";
    for (int s = 0; s < training.size(); ++s) {
        out << s + 1 << ',' << format_g17(training.outputs[s]);
        for (Eigen::Index k = 0; k < training.inputs.cols(); ++k) {
            out << ',' << format_g17(training.inputs(s, k));
        }
        out << "\n";
    }
}

}  // namespace iscat
