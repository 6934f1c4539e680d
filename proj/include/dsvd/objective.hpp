// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "dsvd/core.hpp"
#include "dsvd/governing.hpp"

namespace dsvd {

/// The four real derivative blocks of a complex scalar f = f_r + i f_i with
/// respect to A = A_r + i A_i.
struct GradientBundle {
  RealMatrix dfr_dAr;
  RealMatrix dfr_dAi;
  RealMatrix dfi_dAr;
  RealMatrix dfi_dAi;

  static GradientBundle zeros(Index rows, Index cols);

  Index rows() const { return dfr_dAr.rows(); }
  Index cols() const { return dfr_dAr.cols(); }
  double max_abs() const;
  bool all_finite() const;

  GradientBundle& operator+=(const GradientBundle& o);
  GradientBundle& operator-=(const GradientBundle& o);
  GradientBundle& operator*=(double s);
};

GradientBundle operator+(GradientBundle a, const GradientBundle& b);
GradientBundle operator-(GradientBundle a, const GradientBundle& b);
GradientBundle operator*(double s, GradientBundle a);

/// max |a - b| over all four blocks.
double max_abs_diff(const GradientBundle& a, const GradientBundle& b);

struct ObjectiveValue {
  double re = 0.0;
  double im = 0.0;
};

/// Gradients of f_r and f_i over the embedding-state layout
/// [u_r; u_i; v_r; v_i; sigma_r; sigma_i].
struct StateJacobian {
  RealVector fr;
  RealVector fi;
};

struct ObjectiveSpec {
  using Eval = std::function<ObjectiveValue(const SplitVector& u, const SplitVector& v, double sigma,
                                            const SplitMatrix& a)>;
  using StateGrad = std::function<StateJacobian(const SplitVector& u, const SplitVector& v, double sigma,
                                                const SplitMatrix& a)>;
  using MatrixGrad = std::function<GradientBundle(const SplitVector& u, const SplitVector& v, double sigma,
                                                  const SplitMatrix& a)>;

  Eval eval;
  StateGrad state_jacobian;  // optional
  MatrixGrad matrix_partial;  // optional; holds (u, v, sigma) fixed
  double fd_step = 1e-7;

  ObjectiveValue operator()(const SplitVector& u, const SplitVector& v, double sigma, const SplitMatrix& a) const {
    return eval(u, v, sigma, a);
  }
};

/// f = c_u^T u + c_v^T v + c_sigma sigma + c_A tr(A) (no conjugation).
struct LinearObjectiveParams {
  SplitVector c_u;
  SplitVector c_v;
  double c_sigma = 0.0;
  double c_A = 0.0;
};

ObjectiveSpec linear_objective(const LinearObjectiveParams& p);

/// f = sigma.
ObjectiveSpec sigma_objective();

/// {"type": "linear", "c_u": {"re": [], "im": []}, "c_v": {...}, "c_sigma": x, "c_A": y}
LinearObjectiveParams linear_params_from_json(const nlohmann::json& doc);
LinearObjectiveParams load_linear_params(const std::string& path);
nlohmann::json linear_params_to_json(const LinearObjectiveParams& p);

/// Central differences over the embedding state, step fd_step * max(1, |w_j|).
StateJacobian fd_state_jacobian(const ObjectiveSpec& obj, const SplitMatrix& a, const SemmState& s);

/// Central differences over the eigen-form state [phi_r; phi_i; lambda_r; lambda_i];
/// the other singular vector and sigma are recovered from phi and lambda.
StateJacobian fd_state_jacobian(const ObjectiveSpec& obj, Method kind, const SplitMatrix& a, const GmmState& s);

/// Central differences over the entries of A with (u, v, sigma) held fixed.
GradientBundle fd_matrix_partial(const ObjectiveSpec& obj, const SplitVector& u, const SplitVector& v, double sigma,
                                 const SplitMatrix& a);

/// Analytic when the objective provides it, finite differences otherwise.
StateJacobian state_gradient(const ObjectiveSpec& obj, const SplitVector& u, const SplitVector& v, double sigma,
                             const SplitMatrix& a);
GradientBundle matrix_partial(const ObjectiveSpec& obj, const SplitVector& u, const SplitVector& v, double sigma,
                              const SplitMatrix& a);

/// Composes obj with the gauge map of `pc`, so the result depends on (u, v)
/// only through their phase-fixed representatives.
ObjectiveSpec gauge_lifted(const ObjectiveSpec& obj, const PhaseConvention& pc);

}  // namespace dsvd
