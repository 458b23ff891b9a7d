#include "qorder/representation.hpp"

#include <algorithm>
#include <cmath>

#include "qorder/barrier.hpp"

namespace qorder {

namespace {

enum class Cone { Psd, Diagonal };
enum class Mode { Strict, Partial };

/// Frobenius-orthonormal coordinates of the variable space on a face of size k.
struct Space {
  Cone cone;
  Eigen::Index k;
  std::vector<Eigen::MatrixXd> basis;

  Space(Cone c, Eigen::Index size) : cone(c), k(size) {
    for (Eigen::Index i = 0; i < k; ++i) {
      basis.push_back(Eigen::MatrixXd::Zero(k, k));
      basis.back()(i, i) = 1.0;
      if (cone == Cone::Diagonal) continue;
      for (Eigen::Index j = i + 1; j < k; ++j) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
        b(i, j) = b(j, i) = std::sqrt(0.5);
        basis.push_back(std::move(b));
      }
    }
  }

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }

  Eigen::VectorXd vec(const Eigen::MatrixXd& x) const {
    Eigen::VectorXd v(dim());
    for (Eigen::Index a = 0; a < dim(); ++a) v(a) = x.cwiseProduct(basis[static_cast<std::size_t>(a)]).sum();
    return v;
  }

  Eigen::MatrixXd mat(const Eigen::VectorXd& w) const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < dim(); ++a) x += w(a) * basis[static_cast<std::size_t>(a)];
    return x;
  }
};

double lambda_max(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return -std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd s = (m + m.transpose()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double lambda_min(const Eigen::MatrixXd& m) { return -lambda_max(-m); }

struct FaceOutcome {
  enum Kind { Solved, NoInterior, EqualityInfeasible } kind = Solved;
  Eigen::MatrixXd T;  // in face coordinates
  double eps = 0;
  Eigen::VectorXd lambda, c;  // Solved: dual estimate
  Eigen::VectorXd c_dir;      // EqualityInfeasible: sum c_dir D <= -I on the face
  int newton = 0;
  double t = 0;
};

/// Least squares [vec(I), vec(D_j)] [g; c] ~ v. Returns c.
Eigen::VectorXd fit_equivalences(const Eigen::MatrixXd& aeq_t, const Eigen::VectorXd& v) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(aeq_t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd sol = svd.solve(v);
  return sol.tail(sol.size() - 1);
}

FaceOutcome solve_face(Cone cone, const std::vector<Eigen::MatrixXd>& stricts, const std::vector<Eigen::MatrixXd>& equivs) {
  FaceOutcome out;
  const Eigen::Index k = stricts.front().rows();
  const Space sp(cone, k);
  const Eigen::Index m = sp.dim();
  const Eigen::Index ne = static_cast<Eigen::Index>(equivs.size());
  const Eigen::Index ns = static_cast<Eigen::Index>(stricts.size());

  Eigen::MatrixXd aeq(1 + ne, m);
  aeq.row(0) = sp.vec(Eigen::MatrixXd::Identity(k, k)).transpose();
  for (Eigen::Index j = 0; j < ne; ++j) aeq.row(1 + j) = sp.vec(equivs[static_cast<std::size_t>(j)]).transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(1 + ne);
  b(0) = 1.0;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(aeq, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  const Eigen::Index rank = svd.rank();
  const Eigen::VectorXd w0 = svd.solve(b);
  if ((aeq * w0 - b).norm() > 1e-9) {
    // y^T A = 0 with y^T b != 0: sum y_j D_j = -y_0 I.
    const Eigen::MatrixXd un = svd.matrixU().rightCols(1 + ne - rank);
    const Eigen::VectorXd y = un * (un.transpose() * b);
    out.kind = FaceOutcome::EqualityInfeasible;
    out.c_dir = y.tail(ne) / y(0);
    return out;
  }
  const Eigen::MatrixXd null = svd.matrixV().rightCols(m - rank);
  const Eigen::Index nx = null.cols();
  const Eigen::MatrixXd t0 = sp.mat(w0);

  // The cone condition on T(x) = mat(w0 + N x), with an extra scalar column.
  const auto cone_part = [&](BarrierProblem& bp, bool shift) {
    if (cone == Cone::Psd) {
      std::vector<Eigen::MatrixXd> blk{t0};
      for (Eigen::Index a = 0; a < nx; ++a) blk.push_back(sp.mat(null.col(a)));
      blk.push_back(shift ? Eigen::MatrixXd(-Eigen::MatrixXd::Identity(k, k)) : Eigen::MatrixXd::Zero(k, k));
      bp.blocks.push_back(std::move(blk));
    } else {
      bp.h0 = w0;
      bp.H = Eigen::MatrixXd::Zero(k, nx + 1);
      bp.H.leftCols(nx) = null;
      if (shift) bp.H.col(nx).setConstant(-1.0);
    }
  };

  // Phase I: largest s with T(x) - s I in the cone.
  BarrierProblem p1;
  p1.c = Eigen::VectorXd::Unit(nx + 1, nx);
  cone_part(p1, true);
  if (cone == Cone::Diagonal) p1.h0 = w0;
  Eigen::VectorXd z1 = Eigen::VectorXd::Zero(nx + 1);
  z1(nx) = (cone == Cone::Psd ? lambda_min(t0) : w0.minCoeff()) - 1.0;
  BarrierOptions o1;
  o1.gap_tol = 1e-12;
  o1.stop_above = 0.25 / double(k);
  const BarrierResult r1 = barrier_maximize(p1, z1, o1);
  out.newton += r1.newton_steps;
  const double s_star = r1.objective;
  if (!r1.stopped_early && s_star <= 1e-10) {
    if (s_star >= -1e-10) {
      out.kind = FaceOutcome::NoInterior;
      return out;
    }
    Eigen::MatrixXd z = cone == Cone::Psd ? r1.block_duals.front() : Eigen::MatrixXd(r1.row_duals.asDiagonal());
    z /= z.trace();
    const Eigen::VectorXd sol = [&] {
      Eigen::JacobiSVD<Eigen::MatrixXd> s(aeq.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
      s.setThreshold(1e-10);
      return Eigen::VectorXd(s.solve(sp.vec(z)));
    }();
    out.kind = FaceOutcome::EqualityInfeasible;
    out.c_dir = -sol.tail(ne) / std::abs(sol(0));
    return out;
  }

  // Phase II: maximize eps with every strict margin >= eps.
  BarrierProblem p2;
  p2.c = Eigen::VectorXd::Unit(nx + 1, nx);
  cone_part(p2, false);
  const Eigen::Index cone_rows = p2.h0.size();
  Eigen::VectorXd h0(cone_rows + ns);
  Eigen::MatrixXd hm(cone_rows + ns, nx + 1);
  if (cone_rows) {
    h0.head(cone_rows) = p2.h0;
    hm.topRows(cone_rows) = p2.H;
  }
  for (Eigen::Index i = 0; i < ns; ++i) {
    const Eigen::VectorXd s = sp.vec(stricts[static_cast<std::size_t>(i)]);
    h0(cone_rows + i) = s.dot(w0);
    hm.row(cone_rows + i).head(nx) = (null.transpose() * s).transpose();
    hm(cone_rows + i, nx) = -1.0;
  }
  p2.h0 = h0;
  p2.H = hm;
  Eigen::VectorXd z2 = r1.z;
  z2(nx) = 0;
  z2(nx) = (h0 + hm * z2).tail(ns).minCoeff() - 1.0;
  BarrierOptions o2;
  o2.gap_tol = 1e-12;
  const BarrierResult r2 = barrier_maximize(p2, z2, o2);
  out.newton += r2.newton_steps;
  out.t = r2.t;

  out.T = sp.mat(w0 + null * r2.z.head(nx));
  out.eps = r2.objective;
  Eigen::VectorXd lam = r2.row_duals.tail(ns);
  const double scale = lam.sum();
  lam /= scale;
  Eigen::MatrixXd z = cone == Cone::Psd ? r2.block_duals.front()
                                        : Eigen::MatrixXd(r2.row_duals.head(cone_rows).asDiagonal());
  z /= scale;
  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < ns; ++i) m0 += lam(i) * stricts[static_cast<std::size_t>(i)];
  out.lambda = lam;
  out.c = -fit_equivalences(aeq.transpose(), sp.vec(m0 + z));
  return out;
}

/**
 * Minimizes lambda_max(sum lambda_i S_i + sum c_j D_j) over the simplex by the
 * barrier method on s I - M >= 0. Every iterate is dual feasible, so the value
 * returned is an upper bound on lambda_max(M) within nu / t of the optimum.
 */
void dual_certificate(const std::vector<Eigen::MatrixXd>& stricts, const std::vector<Eigen::MatrixXd>& equivs,
                      Eigen::VectorXd& lambda, Eigen::VectorXd& c, int& newton) {
  const Eigen::Index k = stricts.front().rows();
  const Eigen::Index ns = static_cast<Eigen::Index>(stricts.size());
  const Eigen::Index ne = static_cast<Eigen::Index>(equivs.size());

  // Independent directions of the equivalence span: c = V u.
  Eigen::MatrixXd vecs(k * k, std::max<Eigen::Index>(ne, 1));
  vecs.setZero();
  for (Eigen::Index j = 0; j < ne; ++j)
    vecs.col(j) = Eigen::Map<const Eigen::VectorXd>(equivs[static_cast<std::size_t>(j)].data(), k * k);
  Eigen::MatrixXd v(ne, 0);
  if (ne > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vecs, Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    v = svd.matrixV().leftCols(svd.rank());
  }
  const Eigen::Index r = v.cols();
  const Eigen::Index nl = ns - 1;
  const Eigen::Index n = nl + r + 1;  // [lambda_0..lambda_{ns-2}, u, s]

  // Block s I - M with lambda_last = 1 - sum of the others.
  BarrierProblem bp;
  std::vector<Eigen::MatrixXd> blk;
  const Eigen::MatrixXd& last = stricts.back();
  blk.push_back(-last);
  for (Eigen::Index i = 0; i < nl; ++i) blk.push_back(last - stricts[static_cast<std::size_t>(i)]);
  for (Eigen::Index a = 0; a < r; ++a) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < ne; ++j) d += v(j, a) * equivs[static_cast<std::size_t>(j)];
    blk.push_back(-d);
  }
  blk.push_back(Eigen::MatrixXd::Identity(k, k));
  bp.blocks.push_back(std::move(blk));
  bp.h0 = Eigen::VectorXd::Zero(ns);
  bp.H = Eigen::MatrixXd::Zero(ns, n);
  for (Eigen::Index i = 0; i < nl; ++i) bp.H(i, i) = 1.0;
  bp.h0(nl) = 1.0;
  bp.H.row(nl).head(nl).setConstant(-1.0);
  bp.c = -Eigen::VectorXd::Unit(n, n - 1);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  z.head(nl).setConstant(1.0 / double(ns));
  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(k, k);
  for (const auto& s : stricts) m0 += s / double(ns);
  z(n - 1) = lambda_max(m0) + 1.0;

  BarrierOptions opt;
  opt.gap_tol = 1e-13;
  const BarrierResult res = barrier_maximize(bp, z, opt);
  newton += res.newton_steps;
  lambda.resize(ns);
  lambda.head(nl) = res.z.head(nl);
  lambda(nl) = 1.0 - res.z.head(nl).sum();
  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();
  c = ne > 0 ? Eigen::VectorXd(v * res.z.segment(nl, r)) : Eigen::VectorXd::Zero(0);
}

/// Combination sum lambda_i S_i + sum c_j D_j.
Eigen::MatrixXd combine(const std::vector<Eigen::MatrixXd>& s, const Eigen::VectorXd& lambda,
                        const std::vector<Eigen::MatrixXd>& d, const Eigen::VectorXd& c) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.front().rows(), s.front().cols());
  for (std::size_t i = 0; i < s.size(); ++i) m += lambda(static_cast<Eigen::Index>(i)) * s[i];
  for (std::size_t j = 0; j < d.size(); ++j) m += c(static_cast<Eigen::Index>(j)) * d[j];
  return m;
}

struct Reduction {
  Eigen::MatrixXd outer;  // face basis before this step
  std::size_t equiv;      // index of the equivalence used
  double sign;            // sign * D_equiv is PSD on `outer`
};

struct CoreResult {
  bool feasible = false;
  Eigen::MatrixXd T;
  double margin = 0;
  Eigen::VectorXd lambda, c;
  Eigen::MatrixXd M;
  double lambda_max = 0;
  SolverDiagnostics diag;
};

/// Kernel of the diagonal or symmetric PSD matrix y, as orthonormal columns.
Eigen::MatrixXd kernel_of(Cone cone, const Eigen::MatrixXd& y, double tol) {
  const Eigen::Index k = y.rows();
  if (cone == Cone::Diagonal) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < k; ++i)
      if (std::abs(y(i, i)) <= tol) keep.push_back(i);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) w(keep[a], static_cast<Eigen::Index>(a)) = 1.0;
    return w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y);
  Eigen::Index n0 = 0;
  while (n0 < k && es.eigenvalues()(n0) <= tol) ++n0;
  return es.eigenvectors().leftCols(n0);
}

/**
 * Solves the deduplicated system on the full cone, shrinking to faces while
 * the equivalences leave no interior. Certificates are lifted back to the full
 * space and must reach `bound`.
 */
CoreResult solve_core(Cone cone, Eigen::Index d, const std::vector<Eigen::MatrixXd>& stricts,
                      const std::vector<Eigen::MatrixXd>& equivs, Mode mode, double tol) {
  CoreResult res;
  const double bound = mode == Mode::Strict ? tol : -tol;
  const auto certify = [&](Eigen::VectorXd lambda, Eigen::VectorXd c) {
    res.feasible = false;
    res.lambda = std::move(lambda);
    res.c = std::move(c);
    res.M = combine(stricts, res.lambda, equivs, res.c);
    res.lambda_max = lambda_max(res.M);
    if (!(res.lambda_max <= bound)) throw Indeterminate("certificate extraction failed: lambda_max(M) = " + std::to_string(res.lambda_max));
    return res;
  };

  for (std::size_t i = 0; i < stricts.size(); ++i)
    if (stricts[i].cwiseAbs().maxCoeff() <= 1e-12 && mode == Mode::Strict)
      return certify(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(stricts.size()), static_cast<Eigen::Index>(i)),
                     Eigen::VectorXd::Zero(static_cast<Eigen::Index>(equivs.size())));

  std::vector<Reduction> steps;
  Eigen::MatrixXd face = Eigen::MatrixXd::Identity(d, d);

  // Pushes c along the recorded reductions until M is below `bound` on each enclosing face.
  const auto lift = [&](Eigen::VectorXd c, const Eigen::VectorXd& lambda) {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      const Eigen::MatrixXd& v = it->outer;
      const Eigen::MatrixXd y = it->sign * equivs[it->equiv];
      const Eigen::MatrixXd m = combine(stricts, lambda, equivs, c);
      if (lambda_max(v.transpose() * m * v) <= bound) continue;
      double kappa = 1.0;
      for (int rep = 0; rep < 80; ++rep, kappa *= 2) {
        if (lambda_max(v.transpose() * (m - kappa * y) * v) <= bound) break;
      }
      c(static_cast<Eigen::Index>(it->equiv)) -= kappa * it->sign;
    }
    return c;
  };

  for (Eigen::Index round = 0; round <= d; ++round) {
    std::vector<Eigen::MatrixXd> rs, re;
    for (const auto& s : stricts) rs.push_back(face.transpose() * s * face);
    for (const auto& e : equivs) re.push_back(face.transpose() * e * face);
    const FaceOutcome fo = solve_face(cone, rs, re);
    res.diag.newton_steps += fo.newton;
    res.diag.barrier_t = fo.t;

    if (fo.kind == FaceOutcome::Solved) {
      res.diag.solver_margin = fo.eps;
      Eigen::MatrixXd t = face * fo.T * face.transpose();
      t = (t + t.transpose()) / 2.0;
      t /= t.trace();
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& s : stricts) margin = std::min(margin, (s * t).trace());
      double drift = 0;
      for (const auto& e : equivs) drift = std::max(drift, std::abs((e * t).trace()));
      const bool ok = mode == Mode::Strict ? margin >= tol : margin >= -tol;
      if (ok && drift <= tol) {
        res.feasible = true;
        res.T = t;
        res.margin = margin;
        return res;
      }
      Eigen::VectorXd lambda, c;
      dual_certificate(rs, re, lambda, c, res.diag.newton_steps);
      return certify(lambda, lift(c, lambda));
    }

    if (fo.kind == FaceOutcome::EqualityInfeasible) {
      const Eigen::VectorXd lambda =
          Eigen::VectorXd::Constant(static_cast<Eigen::Index>(stricts.size()), 1.0 / double(stricts.size()));
      const Eigen::MatrixXd m0 = combine(stricts, lambda, equivs, Eigen::VectorXd::Zero(fo.c_dir.size()));
      const Eigen::MatrixXd md = combine(stricts, Eigen::VectorXd::Zero(lambda.size()), equivs, fo.c_dir);
      double kappa = 1.0;
      for (int rep = 0; rep < 80; ++rep, kappa *= 2)
        if (lambda_max(face.transpose() * (m0 + kappa * md) * face) <= bound) break;
      return certify(lambda, lift(kappa * fo.c_dir, lambda));
    }

    // No interior: look for an equivalence that is semidefinite on the face.
    bool reduced = false;
    for (std::size_t j = 0; j < re.size() && !reduced; ++j) {
      const double scale = std::max(1.0, re[j].cwiseAbs().maxCoeff());
      for (double sign : {1.0, -1.0}) {
        const Eigen::MatrixXd y = sign * re[j];
        if (lambda_min(y) < -1e-12 * scale || lambda_max(y) <= 1e-9 * scale) continue;
        const Eigen::MatrixXd w = kernel_of(cone, y, 1e-9 * scale);
        if (w.cols() == 0) throw Indeterminate("equivalences force the zero operator");
        steps.push_back({face, j, sign});
        face = face * w;
        reduced = true;
        break;
      }
    }
    if (!reduced) throw Indeterminate("equivalence constraints leave no interior and no reducing face was found");
    ++res.diag.facial_reductions;
  }
  throw Indeterminate("facial reduction did not terminate");
}

/// Deduplicated operator lists with maps back to the original indices.
struct Dedup {
  std::vector<Eigen::MatrixXd> ops;
  std::vector<std::size_t> rep;  // original index -> unique index
  std::vector<double> sign;      // original = sign * unique (equivalences only)
};

Dedup dedup(const std::vector<Eigen::MatrixXd>& ops, bool allow_sign, bool drop_zero) {
  Dedup out;
  for (const auto& op : ops) {
    if (drop_zero && op.cwiseAbs().maxCoeff() <= 1e-12) {
      out.rep.push_back(static_cast<std::size_t>(-1));
      out.sign.push_back(0.0);
      continue;
    }
    std::size_t found = out.ops.size();
    double sg = 1.0;
    for (std::size_t u = 0; u < out.ops.size() && found == out.ops.size(); ++u) {
      if ((out.ops[u] - op).cwiseAbs().maxCoeff() <= 1e-9) found = u;
      else if (allow_sign && (out.ops[u] + op).cwiseAbs().maxCoeff() <= 1e-9) {
        found = u;
        sg = -1.0;
      }
    }
    if (found == out.ops.size()) out.ops.push_back(op);
    out.rep.push_back(found);
    out.sign.push_back(sg);
  }
  return out;
}

struct Mapped {
  bool feasible;
  Eigen::MatrixXd T;
  double margin;
  Eigen::VectorXd lambda, c;
  SolverDiagnostics diag;
};

Mapped run(Cone cone, Eigen::Index d, const std::vector<Eigen::MatrixXd>& stricts,
           const std::vector<Eigen::MatrixXd>& equivs, Mode mode, double tol) {
  if (!(tol > 0 && tol <= 1e-3)) throw PreconditionViolation("tol must lie in (0, 1e-3]");
  if (stricts.empty()) throw PreconditionViolation("representation problem needs at least one strict pair");
  const Dedup ds = dedup(stricts, false, false);
  const Dedup de = dedup(equivs, true, true);
  CoreResult core = solve_core(cone, d, ds.ops, de.ops, mode, tol);
  Mapped out{core.feasible, core.T, core.margin, {}, {}, core.diag};
  if (core.feasible) return out;
  out.lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(stricts.size()));
  std::vector<bool> used(ds.ops.size(), false);
  for (std::size_t i = 0; i < stricts.size(); ++i)
    if (!used[ds.rep[i]]) {
      used[ds.rep[i]] = true;
      out.lambda(static_cast<Eigen::Index>(i)) = core.lambda(static_cast<Eigen::Index>(ds.rep[i]));
    }
  out.c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(equivs.size()));
  std::vector<bool> used_e(de.ops.size(), false);
  for (std::size_t j = 0; j < equivs.size(); ++j) {
    const std::size_t u = de.rep[j];
    if (u == static_cast<std::size_t>(-1) || used_e[u]) continue;
    used_e[u] = true;
    out.c(static_cast<Eigen::Index>(j)) = de.sign[j] * core.c(static_cast<Eigen::Index>(u));
  }
  return out;
}

Eigen::MatrixXd difference(const SubspacePair& pr) { return pr.second.projection() - pr.first.projection(); }

RepresentationResult solve_quantum(const RepresentationProblem& prob, Mode mode, double tol) {
  validate(prob);
  const auto stricts = prob.effective_stricts();
  std::vector<Eigen::MatrixXd> s_ops, e_ops;
  for (const auto& pr : stricts) s_ops.push_back(difference(pr));
  for (const auto& pr : prob.equivalences) e_ops.push_back(difference(pr));
  const Mapped m = run(Cone::Psd, prob.dim, s_ops, e_ops, mode, tol);

  RepresentationResult res;
  res.diagnostics = m.diag;
  if (m.feasible) {
    // Re-check through the measures module, independently of the solver's arithmetic.
    DensityOperatord t = DensityOperatord::from_matrix(m.T);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : stricts) margin = std::min(margin, mu(t, b) - mu(t, a));
    double drift = 0;
    for (const auto& [a, b] : prob.equivalences) drift = std::max(drift, std::abs(mu(t, b) - mu(t, a)));
    const bool ok = mode == Mode::Strict ? margin >= tol : margin >= -tol;
    if (!ok || drift > tol) throw Indeterminate("solver output failed independent re-evaluation");
    res.feasible = true;
    res.T = std::move(t);
    res.margin = margin;
    return res;
  }
  InfeasibilityCertificate cert;
  cert.lambda = m.lambda;
  cert.c = m.c;
  cert.M = certificate_operator(cert, prob);
  cert.lambda_max = lambda_max(cert.M);
  const double bound = mode == Mode::Strict ? tol : -tol;
  if (!verify_certificate(cert, prob, tol) || cert.lambda_max > bound)
    throw Indeterminate("extracted certificate failed verification");
  res.certificate = std::move(cert);
  return res;
}

}  // namespace

std::vector<SubspacePair> RepresentationProblem::effective_stricts() const {
  std::vector<SubspacePair> out = stricts;
  if (include_normalization) out.emplace_back(Subspaced::zero(dim), Subspaced::full(dim));
  return out;
}

void validate(const RepresentationProblem& prob) {
  if (prob.dim < 1) throw PreconditionViolation("problem dimension must be positive");
  const auto check_dim = [&](const SubspacePair& pr) {
    if (pr.first.ambient_dim() != prob.dim || pr.second.ambient_dim() != prob.dim)
      throw DimensionMismatch("constraint subspace outside R^" + std::to_string(prob.dim));
  };
  for (const auto& pr : prob.equivalences) check_dim(pr);
  for (const auto& pr : prob.stricts) check_dim(pr);
  if (prob.effective_stricts().empty()) throw PreconditionViolation("representation problem needs at least one strict pair");
  for (const auto& [a, b] : prob.stricts)
    for (const auto& [x, y] : prob.equivalences)
      if ((approx_equal(a, x) && approx_equal(b, y)) || (approx_equal(a, y) && approx_equal(b, x)))
        throw PreconditionViolation("a pair is listed as both strict and equivalent");
}

Eigen::MatrixXd certificate_operator(const InfeasibilityCertificate& cert, const RepresentationProblem& prob) {
  const auto stricts = prob.effective_stricts();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(prob.dim, prob.dim);
  for (std::size_t i = 0; i < stricts.size(); ++i) m += cert.lambda(static_cast<Eigen::Index>(i)) * difference(stricts[i]);
  for (std::size_t j = 0; j < prob.equivalences.size(); ++j)
    m += cert.c(static_cast<Eigen::Index>(j)) * difference(prob.equivalences[j]);
  return m;
}

bool verify_certificate(const InfeasibilityCertificate& cert, const RepresentationProblem& prob, double tol) {
  const auto stricts = prob.effective_stricts();
  if (stricts.empty()) throw PreconditionViolation("certificates need at least one strict pair");
  if (cert.lambda.size() != static_cast<Eigen::Index>(stricts.size()) ||
      cert.c.size() != static_cast<Eigen::Index>(prob.equivalences.size()) || cert.M.rows() != prob.dim ||
      cert.M.cols() != prob.dim)
    return false;
  if (!cert.lambda.allFinite() || !cert.c.allFinite() || (cert.lambda.array() < 0).any()) return false;
  if (std::abs(cert.lambda.sum() - 1.0) > tol) return false;
  const Eigen::MatrixXd rebuilt = certificate_operator(cert, prob);
  if ((rebuilt - cert.M).cwiseAbs().maxCoeff() > tol) return false;
  return lambda_max(rebuilt) <= tol;
}

RepresentationResult synthesize(const RepresentationProblem& prob, double tol) {
  return solve_quantum(prob, Mode::Strict, tol);
}

RepresentationResult partial_representation(const RepresentationProblem& prob, double tol) {
  return solve_quantum(prob, Mode::Partial, tol);
}

RepresentationProblem problem_from_order(const LikelihoodOrder& order, const std::vector<Subspaced>& subspaces,
                                         ProblemMode mode) {
  RepresentationProblem prob;
  prob.dim = order.ambient_dim();
  std::vector<Subspaced> items;
  for (const auto& s : subspaces)
    if (std::none_of(items.begin(), items.end(), [&](const Subspaced& x) { return approx_equal(x, s); }))
      items.push_back(s);
  std::stable_sort(items.begin(), items.end(),
                   [&](const Subspaced& a, const Subspaced& b) { return order.compare(a, b) == Relation::Less; });
  if (mode == ProblemMode::AllPairs) {
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const Relation r = order.compare(items[i], items[j]);
        if (r == Relation::Equivalent) prob.equivalences.emplace_back(items[i], items[j]);
        else if (r == Relation::Less) prob.stricts.emplace_back(items[i], items[j]);
        else prob.stricts.emplace_back(items[j], items[i]);
      }
    return prob;
  }
  std::size_t rep = 0;
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (order.compare(items[rep], items[i]) == Relation::Equivalent) {
      prob.equivalences.emplace_back(items[rep], items[i]);
    } else {
      prob.stricts.emplace_back(items[rep], items[i]);
      rep = i;
    }
  }
  return prob;
}

Eigen::VectorXd indicator(const Event& e, std::size_t omega_size) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(omega_size));
  for (std::size_t w : e) {
    if (w >= omega_size) throw PreconditionViolation("event element " + std::to_string(w) + " outside the sample space");
    v(static_cast<Eigen::Index>(w)) = 1.0;
  }
  return v;
}

namespace {

Eigen::VectorXd event_difference(const EventPair& pr, std::size_t n) {
  return indicator(pr.second, n) - indicator(pr.first, n);
}

}  // namespace

bool verify_classical_certificate(const ClassicalCertificate& cert, const ClassicalProblem& prob, double tol) {
  if (prob.stricts.empty()) throw PreconditionViolation("certificates need at least one strict pair");
  const auto n = static_cast<Eigen::Index>(prob.omega_size);
  if (cert.lambda.size() != static_cast<Eigen::Index>(prob.stricts.size()) ||
      cert.c.size() != static_cast<Eigen::Index>(prob.equivalences.size()) || cert.m.size() != n)
    return false;
  if (!cert.lambda.allFinite() || !cert.c.allFinite() || (cert.lambda.array() < 0).any()) return false;
  if (std::abs(cert.lambda.sum() - 1.0) > tol) return false;
  Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < prob.stricts.size(); ++i)
    rebuilt += cert.lambda(static_cast<Eigen::Index>(i)) * event_difference(prob.stricts[i], prob.omega_size);
  for (std::size_t j = 0; j < prob.equivalences.size(); ++j)
    rebuilt += cert.c(static_cast<Eigen::Index>(j)) * event_difference(prob.equivalences[j], prob.omega_size);
  if ((rebuilt - cert.m).cwiseAbs().maxCoeff() > tol) return false;
  return rebuilt.maxCoeff() <= tol;
}

ClassicalResult classical_represent(const ClassicalProblem& prob, double tol) {
  if (prob.omega_size < 1) throw PreconditionViolation("sample space must be nonempty");
  std::vector<Eigen::MatrixXd> s_ops, e_ops;
  for (const auto& pr : prob.stricts) s_ops.push_back(event_difference(pr, prob.omega_size).asDiagonal());
  for (const auto& pr : prob.equivalences) e_ops.push_back(event_difference(pr, prob.omega_size).asDiagonal());
  const Mapped m = run(Cone::Diagonal, static_cast<Eigen::Index>(prob.omega_size), s_ops, e_ops, Mode::Strict, tol);

  ClassicalResult res;
  res.diagnostics = m.diag;
  if (m.feasible) {
    Eigen::VectorXd p = m.T.diagonal().cwiseMax(0.0);
    p /= p.sum();
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& pr : prob.stricts) margin = std::min(margin, event_difference(pr, prob.omega_size).dot(p));
    double drift = 0;
    for (const auto& pr : prob.equivalences) drift = std::max(drift, std::abs(event_difference(pr, prob.omega_size).dot(p)));
    if (margin < tol || drift > tol) throw Indeterminate("solver output failed independent re-evaluation");
    res.feasible = true;
    res.p = std::move(p);
    res.margin = margin;
    return res;
  }
  ClassicalCertificate cert;
  cert.lambda = m.lambda;
  cert.c = m.c;
  cert.m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prob.omega_size));
  for (std::size_t i = 0; i < prob.stricts.size(); ++i)
    cert.m += cert.lambda(static_cast<Eigen::Index>(i)) * event_difference(prob.stricts[i], prob.omega_size);
  for (std::size_t j = 0; j < prob.equivalences.size(); ++j)
    cert.m += cert.c(static_cast<Eigen::Index>(j)) * event_difference(prob.equivalences[j], prob.omega_size);
  cert.max_entry = cert.m.maxCoeff();
  if (!verify_classical_certificate(cert, prob, tol)) throw Indeterminate("extracted certificate failed verification");
  res.certificate = std::move(cert);
  return res;
}

}  // namespace qorder
