#pragma once

#include <Eigen/Dense>
#include <string>

#include "xsc/cluster.hpp"
#include "xsc/extremal.hpp"
#include "xsc/graph.hpp"
#include "xsc/measure.hpp"
#include "xsc/variates.hpp"

namespace xsc {

/// Observations as `x1,...,xd[,z1,...,zp]`, one row per line, full double
/// precision (round-trip exact).
void write_sample_csv(const std::string& path, const SampleMatrix& sample);

/// Reads the format written by write_sample_csv; latent columns are optional.
/// Throws ParseError with the offending 1-based line number.
SampleMatrix read_sample_csv(const std::string& path);

/// `index,radius,a1,...,ad` per retained extreme.
void write_extremal_csv(const std::string& path, const ExtremalSample& extremes);

/// `i,j,weight` per positive-weight pair (i < j).
void write_edges_csv(const std::string& path, const WeightedGraph& g);

/// Dense numeric grid, one matrix row per line.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

/// `index,label` per extreme (original row index; -1 marks singletons).
void write_labels_csv(const std::string& path, const ExtremalSample& extremes,
                      const ClusteringResult& result);

/// `label,c1,...,cd,mass` per cluster, plus one `singleton` row when any
/// isolated nodes were stripped.
void write_atoms_csv(const std::string& path, const ClusteringResult& result);

/// `rank,eigenvalue`, descending.
void write_scree_csv(const std::string& path, const Eigen::VectorXd& eigenvalues);

/// `atom_index,c1,...,cd,mass` plus a final `continuous,,...,mass` row.
void write_measure_csv(const std::string& path, const AngularMeasure& measure);

} // namespace xsc
