#pragma once

#include "bifuse/types.hpp"

namespace bifuse {

/// Weighted sum of Euclidean norms of pairwise column (or row) differences,
/// sum_{(i,j)} w_ij * || M_i - c_ij * M_j ||_2 along the given axis.
double fusion_penalty(const Matrix& M, const std::vector<WeightedEdge>& edges,
                      Axis axis);

/// sum_s || y_s - X_s theta_s ||^2 (squared Frobenius loss, no 1/2 factor).
double squared_loss(const TaskDataset& data, const CoefficientMatrix& theta);

/// || y - X beta ||^2 + lambda1 * || beta ||_1, the pilot problem.
double lasso_objective(const Matrix& X, const Vector& y, const Vector& beta,
                       double lambda1);

/// Formulation 1 objective:
/// || Y - X Theta ||_F^2 + lambda1 ||Theta||_1
///   + lambda2 [ Omega_W(Theta) + Omega_Wtilde(Theta^T) ].
double objective_f1(const TaskDataset& data, const CoefficientMatrix& theta,
                    const EdgeWeights& edges, const Hyperparameters& hp);

/// Formulation 2 objective:
/// || Y - X Theta ||_F^2 + lambda1 ||Theta||_1 + lambda2 ||Theta - Gamma||_F^2
///   + lambda3 [ Omega_W(Gamma) + Omega_Wtilde(Gamma^T) ].
double objective_f2(const TaskDataset& data, const CoefficientMatrix& theta,
                    const CoefficientMatrix& gamma, const EdgeWeights& edges,
                    const Hyperparameters& hp);

}  // namespace bifuse
