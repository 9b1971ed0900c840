// Copyright 2026 The eprsynth Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eprsynth/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "eprsynth/error.hpp"

namespace eprsynth::io {

namespace {

constexpr std::string_view kDatasetHeader1 = "index,theta1,x1";
constexpr std::string_view kDatasetHeader2 = "index,theta1,x1,theta2,x2";
constexpr std::string_view kTraceHeader1 = "bin_center_index,theta1_center,variance,count";
constexpr std::string_view kTraceHeader2 =
    "bin_center_index,theta1_center,theta2_center,variance,count";

[[noreturn]] void format_error(std::size_t line, const std::string &what) {
    fail(ErrorKind::DataFormat, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(',', start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view field, std::size_t line) {
    const std::string text(field);
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        format_error(line, "cannot parse number '" + text + "'");
    }
    return v;
}

std::uint64_t parse_count(std::string_view field, std::size_t line) {
    const std::string text(field);
    errno = 0;
    char *end = nullptr;
    if (text.empty() || text.front() == '-') {
        format_error(line, "cannot parse count '" + text + "'");
    }
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        format_error(line, "cannot parse count '" + text + "'");
    }
    return v;
}

bool next_line(std::istream &in, std::string &line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

double get_number(const json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        fail(ErrorKind::DataFormat, std::string("missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

} // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

json to_json(const gaussian::GaussianState &state) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < state.cov().rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < state.cov().cols(); ++k) {
            row.push_back(state.cov()(i, k));
        }
        rows.push_back(std::move(row));
    }
    return {{"n_modes", state.n_modes()},
            {"convention", gaussian::kConventionTag},
            {"cov", std::move(rows)}};
}

gaussian::GaussianState gaussian_from_json(const json &j) {
    try {
        if (j.at("convention").get<std::string>() != gaussian::kConventionTag) {
            fail(ErrorKind::DataFormat, "unsupported quadrature convention");
        }
        const auto n = j.at("n_modes").get<std::size_t>();
        const auto &rows = j.at("cov");
        const auto dim = static_cast<Eigen::Index>(2 * n);
        if (!rows.is_array() || rows.size() != 2 * n) {
            fail(ErrorKind::DataFormat, "covariance has the wrong number of rows");
        }
        Eigen::MatrixXd cov(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto &row = rows.at(static_cast<std::size_t>(i));
            if (!row.is_array() || row.size() != 2 * n) {
                fail(ErrorKind::DataFormat, "covariance row has the wrong length");
            }
            for (Eigen::Index k = 0; k < dim; ++k) {
                cov(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
            }
        }
        return gaussian::GaussianState::from_covariance(std::move(cov));
    } catch (const Error &e) {
        fail(ErrorKind::DataFormat, std::string("invalid Gaussian state: ") + e.what());
    } catch (const json::exception &e) {
        fail(ErrorKind::DataFormat, std::string("malformed Gaussian state: ") + e.what());
    }
}

json to_json(const fock::FockDensityMatrix &rho) {
    json entries = json::array();
    const auto &m = rho.entries();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            entries.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
        }
    }
    return {{"n_modes", rho.n_modes()},
            {"cutoff", rho.cutoff()},
            {"basis", kFockBasisTag},
            {"entries", std::move(entries)}};
}

fock::FockDensityMatrix fock_from_json(const json &j) {
    try {
        const auto n_modes = j.at("n_modes").get<std::size_t>();
        const auto cutoff = j.at("cutoff").get<std::size_t>();
        if (n_modes != 1 && n_modes != 2) {
            fail(ErrorKind::DataFormat, "density matrices cover 1 or 2 modes");
        }
        const std::size_t dim = fock::basis_size(n_modes, cutoff);
        const auto &entries = j.at("entries");
        if (!entries.is_array() || entries.size() != dim * dim) {
            fail(ErrorKind::DataFormat, "density matrix has the wrong number of entries");
        }
        const auto d = static_cast<Eigen::Index>(dim);
        Eigen::MatrixXcd m(d, d);
        for (std::size_t k = 0; k < dim * dim; ++k) {
            const auto &e = entries.at(k);
            if (!e.is_array() || e.size() != 2) {
                fail(ErrorKind::DataFormat, "density matrix entry is not [re, im]");
            }
            m(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) =
                fock::cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
        return fock::FockDensityMatrix::from_matrix(n_modes, cutoff, std::move(m));
    } catch (const Error &e) {
        fail(ErrorKind::DataFormat, std::string("invalid density matrix: ") + e.what());
    } catch (const json::exception &e) {
        fail(ErrorKind::DataFormat, std::string("malformed density matrix: ") + e.what());
    }
}

json to_json(const fitting::FitResult &fit) {
    return {{"model", fitting::to_string(fit.model)},
            {"zeta", fit.zeta},
            {"eta", fit.eta},
            {"theta0", fit.theta0},
            {"rate", fit.rate},
            {"rss", fit.rss},
            {"converged", fit.converged},
            {"degenerate", fit.degenerate},
            {"iterations", fit.iterations}};
}

fitting::FitResult fit_from_json(const json &j) {
    fitting::FitResult fit;
    try {
        const auto model = j.at("model").get<std::string>();
        if (model != "single" && model != "epr") {
            fail(ErrorKind::DataFormat, "unknown fit model '" + model + "'");
        }
        fit.model = model == "single" ? fitting::Model::SingleMode : fitting::Model::Epr;
        fit.zeta = get_number(j, "zeta");
        fit.eta = get_number(j, "eta");
        fit.theta0 = get_number(j, "theta0");
        fit.rate = get_number(j, "rate");
        fit.rss = get_number(j, "rss");
        fit.converged = j.at("converged").get<bool>();
        fit.degenerate = j.at("degenerate").get<bool>();
        fit.iterations = j.at("iterations").get<std::size_t>();
    } catch (const json::exception &e) {
        fail(ErrorKind::DataFormat, std::string("malformed fit result: ") + e.what());
    }
    return fit;
}

json to_json(const tomography::Diagnostics &diag) {
    return {{"iterations", diag.iterations},
            {"loglik", diag.loglik},
            {"phase_deficient", diag.phase_deficient}};
}

void write_dataset_csv(std::ostream &out, const homodyne::QuadratureDataset &data) {
    const bool two = data.n_modes == 2;
    out << (two ? kDatasetHeader2 : kDatasetHeader1) << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.index[i] << ',' << format_double(data.theta[i][0]) << ','
            << format_double(data.x[i][0]);
        if (two) {
            out << ',' << format_double(data.theta[i][1]) << ','
                << format_double(data.x[i][1]);
        }
        out << '\n';
    }
    if (!out) {
        fail(ErrorKind::Io, "failed to write dataset");
    }
}

homodyne::QuadratureDataset read_dataset_csv(std::istream &in) {
    std::string line;
    std::size_t line_no = 1;
    if (!next_line(in, line)) {
        format_error(line_no, "missing header");
    }
    homodyne::QuadratureDataset data;
    if (line == kDatasetHeader1) {
        data.n_modes = 1;
    } else if (line == kDatasetHeader2) {
        data.n_modes = 2;
    } else {
        format_error(line_no, "unexpected header '" + line + "'");
    }
    const std::size_t n_fields = data.n_modes == 1 ? 3 : 5;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != n_fields) {
            format_error(line_no, "expected " + std::to_string(n_fields) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        data.index.push_back(parse_count(fields[0], line_no));
        std::array<double, 2> th{parse_double(fields[1], line_no), 0.0};
        std::array<double, 2> x{parse_double(fields[2], line_no), 0.0};
        if (data.n_modes == 2) {
            th[1] = parse_double(fields[3], line_no);
            x[1] = parse_double(fields[4], line_no);
        }
        data.theta.push_back(th);
        data.x.push_back(x);
    }
    return data;
}

void write_trace_csv(std::ostream &out, const homodyne::VarianceTrace &trace) {
    const bool two = trace.n_modes == 2;
    out << (two ? kTraceHeader2 : kTraceHeader1) << '\n';
    for (const auto &bin : trace.bins) {
        out << format_double(bin.center_index) << ','
            << format_double(bin.theta_center[0]) << ',';
        if (two) {
            out << format_double(bin.theta_center[1]) << ',';
        }
        out << format_double(bin.variance) << ',' << bin.count << '\n';
    }
    if (!out) {
        fail(ErrorKind::Io, "failed to write trace");
    }
}

homodyne::VarianceTrace read_trace_csv(std::istream &in) {
    std::string line;
    std::size_t line_no = 1;
    if (!next_line(in, line)) {
        format_error(line_no, "missing header");
    }
    homodyne::VarianceTrace trace;
    if (line == kTraceHeader1) {
        trace.n_modes = 1;
    } else if (line == kTraceHeader2) {
        trace.n_modes = 2;
    } else {
        format_error(line_no, "unexpected header '" + line + "'");
    }
    const std::size_t n_fields = trace.n_modes == 1 ? 4 : 5;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != n_fields) {
            format_error(line_no, "expected " + std::to_string(n_fields) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        homodyne::VarianceBin bin;
        std::size_t f = 0;
        bin.center_index = parse_double(fields[f++], line_no);
        bin.theta_center[0] = parse_double(fields[f++], line_no);
        if (trace.n_modes == 2) {
            bin.theta_center[1] = parse_double(fields[f++], line_no);
        }
        bin.variance = parse_double(fields[f++], line_no);
        if (bin.variance < 0.0) {
            format_error(line_no, "negative variance");
        }
        bin.count = parse_count(fields[f], line_no);
        trace.bins.push_back(bin);
    }
    return trace;
}

} // namespace eprsynth::io
