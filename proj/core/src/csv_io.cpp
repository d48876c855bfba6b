#include "xsc/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "xsc/errors.hpp"

namespace xsc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing", path);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("trailing characters in number '" + s + "'", line_no);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("cannot parse number '" + s + "'", line_no);
    }
}

} // namespace

void write_sample_csv(const std::string& path, const SampleMatrix& sample) {
    std::ofstream out = open_out(path);
    const Eigen::Index d = sample.X.cols();
    const Eigen::Index p = sample.Z ? sample.Z->cols() : 0;
    for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << "x" << (j + 1);
    for (Eigen::Index j = 0; j < p; ++j) out << ",z" << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < sample.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) out << (j ? "," : "") << fmt(sample.X(i, j));
        for (Eigen::Index j = 0; j < p; ++j) out << "," << fmt((*sample.Z)(i, j));
        out << "\n";
    }
    if (!out) throw IoError("write failed", path);
}

SampleMatrix read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading", path);

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("missing header", line_no);
    const std::vector<std::string> header = split(line);

    Eigen::Index d = 0;
    Eigen::Index p = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string expect_x = "x" + std::to_string(j + 1);
        const std::string expect_z = "z" + std::to_string(j + 1 - static_cast<std::size_t>(d));
        if (p == 0 && header[j] == expect_x) {
            ++d;
        } else if (header[j] == expect_z) {
            ++p;
        } else {
            throw ParseError("unexpected column '" + header[j] + "'", line_no);
        }
    }
    if (d == 0) throw ParseError("no observation columns found", line_no);

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line);
        if (fields.size() != static_cast<std::size_t>(d + p))
            throw ParseError("expected " + std::to_string(d + p) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        for (const auto& f : fields) values.push_back(parse_double(f, line_no));
        ++rows;
    }

    SampleMatrix out;
    out.X.resize(static_cast<Eigen::Index>(rows), d);
    if (p > 0) out.Z = Eigen::MatrixXd(static_cast<Eigen::Index>(rows), p);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < out.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) out.X(i, j) = values[at++];
        for (Eigen::Index j = 0; j < p; ++j) (*out.Z)(i, j) = values[at++];
    }
    return out;
}

void write_extremal_csv(const std::string& path, const ExtremalSample& extremes) {
    std::ofstream out = open_out(path);
    out << "index,radius";
    for (Eigen::Index j = 0; j < extremes.angles.cols(); ++j) out << ",a" << (j + 1);
    out << "\n";
    for (std::size_t r = 0; r < extremes.count(); ++r) {
        out << extremes.indices[r] << "," << fmt(extremes.radii[static_cast<Eigen::Index>(r)]);
        for (Eigen::Index j = 0; j < extremes.angles.cols(); ++j)
            out << "," << fmt(extremes.angles(static_cast<Eigen::Index>(r), j));
        out << "\n";
    }
    if (!out) throw IoError("write failed", path);
}

void write_edges_csv(const std::string& path, const WeightedGraph& g) {
    std::ofstream out = open_out(path);
    out << "i,j,weight\n";
    for (Eigen::Index i = 0; i < g.n_nodes(); ++i)
        for (Eigen::Index j = i + 1; j < g.n_nodes(); ++j)
            if (g.weights(i, j) > 0.0)
                out << i << "," << j << "," << fmt(g.weights(i, j)) << "\n";
    if (!out) throw IoError("write failed", path);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << fmt(m(i, j));
        out << "\n";
    }
    if (!out) throw IoError("write failed", path);
}

void write_labels_csv(const std::string& path, const ExtremalSample& extremes,
                      const ClusteringResult& result) {
    std::ofstream out = open_out(path);
    out << "index,label\n";
    for (std::size_t r = 0; r < extremes.count(); ++r)
        out << extremes.indices[r] << "," << result.labels[r] << "\n";
    if (!out) throw IoError("write failed", path);
}

void write_atoms_csv(const std::string& path, const ClusteringResult& result) {
    std::ofstream out = open_out(path);
    out << "label";
    for (Eigen::Index j = 0; j < result.atoms_hat.cols(); ++j) out << ",c" << (j + 1);
    out << ",mass\n";
    for (Eigen::Index k = 0; k < result.atoms_hat.rows(); ++k) {
        out << k;
        for (Eigen::Index j = 0; j < result.atoms_hat.cols(); ++j)
            out << "," << fmt(result.atoms_hat(k, j));
        out << "," << fmt(result.masses_hat[k]) << "\n";
    }
    if (!result.singletons.empty()) {
        out << "singleton";
        for (Eigen::Index j = 0; j < result.atoms_hat.cols(); ++j) out << ",";
        out << fmt(result.singleton_mass) << "\n";
    }
    if (!out) throw IoError("write failed", path);
}

void write_scree_csv(const std::string& path, const Eigen::VectorXd& eigenvalues) {
    std::ofstream out = open_out(path);
    out << "rank,eigenvalue\n";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        out << (i + 1) << "," << fmt(eigenvalues[i]) << "\n";
    if (!out) throw IoError("write failed", path);
}

void write_measure_csv(const std::string& path, const AngularMeasure& measure) {
    std::ofstream out = open_out(path);
    out << "atom_index";
    for (Eigen::Index j = 0; j < measure.atoms.cols(); ++j) out << ",c" << (j + 1);
    out << ",mass\n";
    for (Eigen::Index k = 0; k < measure.atoms.rows(); ++k) {
        out << k;
        for (Eigen::Index j = 0; j < measure.atoms.cols(); ++j)
            out << "," << fmt(measure.atoms(k, j));
        out << "," << fmt(measure.masses[k]) << "\n";
    }
    out << "continuous";
    for (Eigen::Index j = 0; j < measure.atoms.cols(); ++j) out << ",";
    out << fmt(measure.continuous_mass) << "\n";
    if (!out) throw IoError("write failed", path);
}

} // namespace xsc
