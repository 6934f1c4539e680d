// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/objective.hpp"

#include <cmath>
#include <fstream>

namespace dsvd {

GradientBundle GradientBundle::zeros(Index rows, Index cols) {
  const RealMatrix z = RealMatrix::Zero(rows, cols);
  return {z, z, z, z};
}

double GradientBundle::max_abs() const {
  return std::max({dfr_dAr.cwiseAbs().maxCoeff(), dfr_dAi.cwiseAbs().maxCoeff(), dfi_dAr.cwiseAbs().maxCoeff(),
                   dfi_dAi.cwiseAbs().maxCoeff()});
}

bool GradientBundle::all_finite() const {
  return dfr_dAr.allFinite() && dfr_dAi.allFinite() && dfi_dAr.allFinite() && dfi_dAi.allFinite();
}

GradientBundle& GradientBundle::operator+=(const GradientBundle& o) {
  dfr_dAr += o.dfr_dAr;
  dfr_dAi += o.dfr_dAi;
  dfi_dAr += o.dfi_dAr;
  dfi_dAi += o.dfi_dAi;
  return *this;
}

GradientBundle& GradientBundle::operator-=(const GradientBundle& o) {
  dfr_dAr -= o.dfr_dAr;
  dfr_dAi -= o.dfr_dAi;
  dfi_dAr -= o.dfi_dAr;
  dfi_dAi -= o.dfi_dAi;
  return *this;
}

GradientBundle& GradientBundle::operator*=(double s) {
  dfr_dAr *= s;
  dfr_dAi *= s;
  dfi_dAr *= s;
  dfi_dAi *= s;
  return *this;
}

GradientBundle operator+(GradientBundle a, const GradientBundle& b) { return a += b; }
GradientBundle operator-(GradientBundle a, const GradientBundle& b) { return a -= b; }
GradientBundle operator*(double s, GradientBundle a) { return a *= s; }

double max_abs_diff(const GradientBundle& a, const GradientBundle& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: bundle shapes differ");
  return (a - b).max_abs();
}

namespace {

RealMatrix trace_pattern(Index rows, Index cols, double scale) {
  RealMatrix p = RealMatrix::Zero(rows, cols);
  for (Index d = 0; d < std::min(rows, cols); ++d) p(d, d) = scale;
  return p;
}

void require_finite(const ObjectiveValue& f) {
  if (!std::isfinite(f.re) || !std::isfinite(f.im)) throw NonFiniteError("objective evaluated to a non-finite value");
}

SplitVector read_complex_vector(const nlohmann::json& doc, const char* key) {
  const auto& node = doc.at(key);
  const auto re = node.at("re").get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (node.contains("im")) im = node.at("im").get<std::vector<double>>();
  if (im.size() != re.size()) throw ParseError(std::string("objective json: \"") + key + "\" re/im lengths differ");
  SplitVector out(static_cast<Index>(re.size()));
  for (std::size_t j = 0; j < re.size(); ++j) {
    out.re[static_cast<Index>(j)] = re[j];
    out.im[static_cast<Index>(j)] = im[j];
  }
  return out;
}

}  // namespace

ObjectiveSpec linear_objective(const LinearObjectiveParams& p) {
  ObjectiveSpec obj;
  obj.eval = [p](const SplitVector& u, const SplitVector& v, double sigma, const SplitMatrix& a) {
    if (p.c_u.size() != u.size() || p.c_v.size() != v.size()) {
      throw DimensionError("linear objective: coefficient lengths do not match singular vectors");
    }
    ObjectiveValue f;
    f.re = p.c_u.re.dot(u.re) - p.c_u.im.dot(u.im) + p.c_v.re.dot(v.re) - p.c_v.im.dot(v.im) + p.c_sigma * sigma;
    f.im = p.c_u.re.dot(u.im) + p.c_u.im.dot(u.re) + p.c_v.re.dot(v.im) + p.c_v.im.dot(v.re);
    if (p.c_A != 0.0) {
      f.re += p.c_A * a.re.diagonal().sum();
      f.im += p.c_A * a.im.diagonal().sum();
    }
    return f;
  };
  obj.state_jacobian = [p](const SplitVector& u, const SplitVector& v, double, const SplitMatrix&) {
    if (p.c_u.size() != u.size() || p.c_v.size() != v.size()) {
      throw DimensionError("linear objective: coefficient lengths do not match singular vectors");
    }
    StateJacobian j;
    j.fr.resize(2 * u.size() + 2 * v.size() + 2);
    j.fi.resize(j.fr.size());
    j.fr << p.c_u.re, -p.c_u.im, p.c_v.re, -p.c_v.im, p.c_sigma, 0.0;
    j.fi << p.c_u.im, p.c_u.re, p.c_v.im, p.c_v.re, 0.0, 0.0;
    return j;
  };
  obj.matrix_partial = [p](const SplitVector&, const SplitVector&, double, const SplitMatrix& a) {
    GradientBundle g = GradientBundle::zeros(a.rows(), a.cols());
    g.dfr_dAr = trace_pattern(a.rows(), a.cols(), p.c_A);
    g.dfi_dAi = g.dfr_dAr;
    return g;
  };
  return obj;
}

ObjectiveSpec sigma_objective() {
  ObjectiveSpec obj;
  obj.eval = [](const SplitVector&, const SplitVector&, double sigma, const SplitMatrix&) {
    return ObjectiveValue{sigma, 0.0};
  };
  obj.state_jacobian = [](const SplitVector& u, const SplitVector& v, double, const SplitMatrix&) {
    StateJacobian j;
    const Index size = 2 * u.size() + 2 * v.size() + 2;
    j.fr = RealVector::Zero(size);
    j.fi = RealVector::Zero(size);
    j.fr[size - 2] = 1.0;
    return j;
  };
  obj.matrix_partial = [](const SplitVector&, const SplitVector&, double, const SplitMatrix& a) {
    return GradientBundle::zeros(a.rows(), a.cols());
  };
  return obj;
}

LinearObjectiveParams linear_params_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("type", std::string("linear")) != "linear") {
      throw ParseError("objective json: only \"linear\" objectives are supported");
    }
    LinearObjectiveParams p;
    p.c_u = read_complex_vector(doc, "c_u");
    p.c_v = read_complex_vector(doc, "c_v");
    p.c_sigma = doc.value("c_sigma", 0.0);
    p.c_A = doc.value("c_A", 0.0);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("objective json: ") + e.what());
  }
}

LinearObjectiveParams load_linear_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("objective json: ") + e.what(), e.byte);
  }
  return linear_params_from_json(doc);
}

nlohmann::json linear_params_to_json(const LinearObjectiveParams& p) {
  auto vec_json = [](const SplitVector& x) {
    return nlohmann::json{{"re", std::vector<double>(x.re.data(), x.re.data() + x.re.size())},
                          {"im", std::vector<double>(x.im.data(), x.im.data() + x.im.size())}};
  };
  return {{"type", "linear"}, {"c_u", vec_json(p.c_u)}, {"c_v", vec_json(p.c_v)}, {"c_sigma", p.c_sigma},
          {"c_A", p.c_A}};
}

StateJacobian fd_state_jacobian(const ObjectiveSpec& obj, const SplitMatrix& a, const SemmState& s) {
  const RealVector w0 = s.stacked();
  StateJacobian j{RealVector::Zero(w0.size()), RealVector::Zero(w0.size())};
  SemmState probe = s;
  auto eval_at = [&](const RealVector& w) {
    probe.set_stacked(w);
    const ObjectiveValue f = obj.eval(probe.u, probe.v, probe.sigma_re, a);
    require_finite(f);
    return f;
  };
  for (Index k = 0; k < w0.size(); ++k) {
    const double h = obj.fd_step * std::max(1.0, std::abs(w0[k]));
    RealVector wp = w0, wm = w0;
    wp[k] += h;
    wm[k] -= h;
    const ObjectiveValue fp = eval_at(wp);
    const ObjectiveValue fm = eval_at(wm);
    j.fr[k] = (fp.re - fm.re) / (2.0 * h);
    j.fi[k] = (fp.im - fm.im) / (2.0 * h);
  }
  return j;
}

StateJacobian fd_state_jacobian(const ObjectiveSpec& obj, Method kind, const SplitMatrix& a, const GmmState& s) {
  if (kind == Method::semm) throw DimensionError("fd_state_jacobian: semm requires a SemmState");
  const Index n = s.phi.size();
  RealVector w0(2 * n + 2);
  w0 << s.phi.re, s.phi.im, s.lambda_re, s.lambda_im;
  const SplitMatrix ah = a.adjoint();
  auto eval_at = [&](const RealVector& w) {
    const SplitVector phi(w.head(n), w.segment(n, n));
    const double sigma = std::sqrt(w[2 * n]);
    ObjectiveValue f;
    if (kind == Method::lgmm) {
      SplitVector v = ah * phi;
      v = SplitVector(v.re / sigma, v.im / sigma);
      f = obj.eval(phi, v, sigma, a);
    } else {
      SplitVector u = a * phi;
      u = SplitVector(u.re / sigma, u.im / sigma);
      f = obj.eval(u, phi, sigma, a);
    }
    require_finite(f);
    return f;
  };
  StateJacobian j{RealVector::Zero(w0.size()), RealVector::Zero(w0.size())};
  for (Index k = 0; k < w0.size(); ++k) {
    const double h = obj.fd_step * std::max(1.0, std::abs(w0[k]));
    RealVector wp = w0, wm = w0;
    wp[k] += h;
    wm[k] -= h;
    const ObjectiveValue fp = eval_at(wp);
    const ObjectiveValue fm = eval_at(wm);
    j.fr[k] = (fp.re - fm.re) / (2.0 * h);
    j.fi[k] = (fp.im - fm.im) / (2.0 * h);
  }
  return j;
}

GradientBundle fd_matrix_partial(const ObjectiveSpec& obj, const SplitVector& u, const SplitVector& v, double sigma,
                                 const SplitMatrix& a) {
  GradientBundle g = GradientBundle::zeros(a.rows(), a.cols());
  SplitMatrix probe = a;
  for (Index p = 0; p < a.rows(); ++p) {
    for (Index q = 0; q < a.cols(); ++q) {
      for (int part = 0; part < 2; ++part) {
        RealMatrix& block = part == 0 ? probe.re : probe.im;
        const double base = block(p, q);
        const double h = obj.fd_step * std::max(1.0, std::abs(base));
        block(p, q) = base + h;
        const ObjectiveValue fp = obj.eval(u, v, sigma, probe);
        block(p, q) = base - h;
        const ObjectiveValue fm = obj.eval(u, v, sigma, probe);
        block(p, q) = base;
        require_finite(fp);
        require_finite(fm);
        (part == 0 ? g.dfr_dAr : g.dfr_dAi)(p, q) = (fp.re - fm.re) / (2.0 * h);
        (part == 0 ? g.dfi_dAr : g.dfi_dAi)(p, q) = (fp.im - fm.im) / (2.0 * h);
      }
    }
  }
  return g;
}

StateJacobian state_gradient(const ObjectiveSpec& obj, const SplitVector& u, const SplitVector& v, double sigma,
                             const SplitMatrix& a) {
  if (obj.state_jacobian) return obj.state_jacobian(u, v, sigma, a);
  SemmState s;
  s.u = u;
  s.v = v;
  s.sigma_re = sigma;
  return fd_state_jacobian(obj, a, s);
}

GradientBundle matrix_partial(const ObjectiveSpec& obj, const SplitVector& u, const SplitVector& v, double sigma,
                              const SplitMatrix& a) {
  if (obj.matrix_partial) return obj.matrix_partial(u, v, sigma, a);
  return fd_matrix_partial(obj, u, v, sigma, a);
}

ObjectiveSpec gauge_lifted(const ObjectiveSpec& obj, const PhaseConvention& pc) {
  ObjectiveSpec lifted;
  lifted.fd_step = obj.fd_step;
  lifted.eval = [obj, pc](const SplitVector& u, const SplitVector& v, double sigma, const SplitMatrix& a) {
    const governing::GaugeView view = governing::gauge_view(u, v, pc);
    return obj.eval(view.u, view.v, sigma, a);
  };
  lifted.state_jacobian = [obj, pc](const SplitVector& u, const SplitVector& v, double sigma, const SplitMatrix& a) {
    const governing::GaugeView view = governing::gauge_view(u, v, pc);
    StateJacobian base = state_gradient(obj, view.u, view.v, sigma, a);
    const Index m = u.size();
    const Index n = v.size();
    for (RealVector* g : {&base.fr, &base.fi}) {
      const SplitVector gu(g->segment(0, m), g->segment(m, m));
      const SplitVector gv(g->segment(2 * m, n), g->segment(2 * m + n, n));
      const governing::GaugeView back = governing::gauge_pullback(u, v, pc, gu, gv);
      g->segment(0, m) = back.u.re;
      g->segment(m, m) = back.u.im;
      g->segment(2 * m, n) = back.v.re;
      g->segment(2 * m + n, n) = back.v.im;
    }
    return base;
  };
  lifted.matrix_partial = [obj, pc](const SplitVector& u, const SplitVector& v, double sigma, const SplitMatrix& a) {
    const governing::GaugeView view = governing::gauge_view(u, v, pc);
    return matrix_partial(obj, view.u, view.v, sigma, a);
  };
  return lifted;
}

}  // namespace dsvd
