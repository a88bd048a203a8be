#include "confham/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "confham/error.hpp"
#include "confham/gls.hpp"
#include "confham/moser.hpp"
#include "confham/numerics.hpp"
#include "confham/reparam.hpp"
#include "confham/sampling.hpp"
#include "confham/symmetry.hpp"

namespace confham {

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return !c.gated || c.pass(); });
}

std::size_t SuiteReport::samples() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.samples;
  return n;
}

const Check* SuiteReport::worst() const {
  const Check* w = nullptr;
  double ratio = -1.0;
  for (const auto& c : checks) {
    if (!c.gated) continue;
    if (!c.pass()) return &c;
    const double q = c.tolerance > 0.0 ? c.max_residual / c.tolerance : c.max_residual;
    if (q > ratio) {
      ratio = q;
      w = &c;
    }
  }
  return w;
}

namespace {

constexpr Signature kBranches[] = {Signature::elliptic, Signature::hyperbolic};

const char* branch_name(Signature s) { return s == Signature::elliptic ? "E<0" : "E>0"; }

Sampler make_sampler(const VerifyConfig& cfg, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  std::uint64_t s[2];
  seq.generate(reinterpret_cast<std::uint32_t*>(s), reinterpret_cast<std::uint32_t*>(s) + 4);
  return Sampler(s[0] ^ (s[1] << 1));
}

template <class F>
void guarded(Check& c, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    if (c.error.empty()) c.error = e.what();
  }
}

Check make_check(std::string name, double tol, bool gated = true) {
  Check c;
  c.name = std::move(name);
  c.tolerance = tol;
  c.gated = gated;
  return c;
}

double max_abs(const Vec3& v) { return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)}); }
double max_abs(const Vec4& v) { return std::max(max_abs(v.v3), std::abs(v.h)); }
double dist(const PhasePointE& a, const PhasePointE& b) {
  return std::max(max_abs(a.r - b.r), max_abs(a.p - b.p));
}
double dist(const DelaunayPoint& a, const DelaunayPoint& b) {
  return std::max(max_abs(a.om - b.om), max_abs(a.w - b.w));
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

Vec8 gls_flat(const Vec6& v, const KeplerParams& P) {
  const DelaunayPoint q = gls_map(phase_point_from(v), P);
  return to_vector(q.om, q.w);
}

}  // namespace

SuiteReport check_conservation(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"conservation", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 1);
  const int n = cfg.count(50);
  constexpr int kSamplesPerOrbit = 20;
  for (Signature sig : kBranches) {
    const std::string b = branch_name(sig);
    Check cE = make_check("energy drift " + b, 1e-9);
    Check cL = make_check("angular momentum drift " + b, 1e-9);
    Check cEps = make_check("eccentricity drift " + b, 1e-9);
    Check cJ = make_check("momentum J drift " + b, 1e-9);
    for (int i = 0; i < n; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      guarded(cE, [&] {
        const double T = sig == Signature::elliptic ? kepler_period(x, P) : 10.0;
        std::vector<double> times;
        for (int j = 1; j <= kSamplesPerOrbit; ++j) times.push_back(T * j / kSamplesPerOrbit);
        const auto orbit = kepler_orbit(x, times, P, cfg.tol);
        const EnergyMomentum j0 = energy_momentum(x, P);
        const MomentumPair J0 = momentum_J(x, P);
        double dE = 0, dL = 0, dEps = 0, dJ = 0;
        for (const auto& y : orbit) {
          const EnergyMomentum j = energy_momentum(y, P);
          const MomentumPair J = momentum_J(y, P);
          dE = std::max(dE, std::abs(j.E - j0.E));
          dL = std::max(dL, norm(j.L - j0.L));
          dEps = std::max(dEps, norm(j.eps - j0.eps));
          dJ = std::max({dJ, norm(J.K1 - J0.K1), norm(J.K2 - J0.K2)});
        }
        cE.record(dE);
        cL.record(dL);
        cEps.record(dEps);
        cJ.record(dJ);
      });
    }
    for (auto* c : {&cE, &cL, &cEps, &cJ}) {
      if (!cE.error.empty() && c->error.empty()) c->error = cE.error;
      rep.checks.push_back(*c);
    }

    // K is a first integral of the closed-form flow.
    // K components are differences of products of size |OM| |W|, which grow
    // like cosh^2 along the hyperbolic flow; the relative drift is gated.
    Check cK = make_check("momentum K drift along delaunay_flow, relative " + b, 1e-10);
    Check cKa = make_check("momentum K drift along delaunay_flow, absolute " + b, 1e-9, false);
    for (int i = 0; i < n; ++i) {
      guarded(cK, [&] {
        const DelaunayPoint q = gls_map(smp.phase_point(sig, P), P);
        const MomentumPair K0 = momentum_K(q);
        const double span = 2.0 * std::numbers::pi / flow_rate(q, P);
        double d = 0.0, rel = 0.0;
        for (int j = 1; j <= kSamplesPerOrbit; ++j) {
          const DelaunayPoint qs = delaunay_flow(q, span * j / kSamplesPerOrbit, P);
          const MomentumPair K = momentum_K(qs);
          const double dj = std::max(norm(K.K1 - K0.K1), norm(K.K2 - K0.K2));
          d = std::max(d, dj);
          rel = std::max(rel, dj / std::max(1.0, euclidean_norm(qs.om) * euclidean_norm(qs.w)));
        }
        cK.record(rel);
        cKa.record(d);
      });
    }
    rep.checks.push_back(cK);
    rep.checks.push_back(cKa);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_roundtrip(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"roundtrip", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 2);
  const int n = cfg.count(1000);
  for (Signature sig : kBranches) {
    const std::string b = branch_name(sig);
    Check cM = make_check("moser_lift o moser_lift_inv " + b, 1e-12);
    Check cS = make_check("s_forward o s_inverse " + b, 1e-12);
    Check cG = make_check("gls_inverse o gls_map " + b, 1e-9);
    for (int i = 0; i < n; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      guarded(cM, [&] {
        const double rho = rho_for_energy(energy(x, P), P);
        cM.record(dist(moser_lift(moser_lift_inv(x, rho, sig)), x));
      });
      guarded(cS, [&] { cS.record(dist(s_forward(s_inverse(x, P, sig), P), x)); });
      guarded(cG, [&] { cG.record(dist(gls_inverse(gls_map(x, P), P), x)); });
    }
    rep.checks.push_back(cM);
    rep.checks.push_back(cS);
    rep.checks.push_back(cG);
  }
  Check cP = make_check("parabolic involution", 1e-12);
  for (int i = 0; i < n; ++i) {
    guarded(cP, [&] {
      const PhasePointE x{smp.uniform(0.5, 2.0) * smp.unit_vector(),
                          smp.uniform(0.3, 2.0) * smp.unit_vector()};
      cP.record(dist(parabolic_lift(parabolic_lift(x, P.l), P.l), x));
    });
  }
  rep.checks.push_back(cP);
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_energy(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"energy", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 3);
  const int n = cfg.count(1000);
  const double km2 = P.k * P.m * P.m;
  for (Signature sig : kBranches) {
    const std::string b = branch_name(sig);
    const double z = zeta(sig);
    Check cH = make_check("delaunay_hamiltonian o s_inverse - E " + b, 1e-12);
    Check cMh = make_check("moser_hamiltonian - E o moser_lift " + b, 1e-12);
    Check cFwd = make_check("E = -zeta rho^2/2m => |W| = km^2/rho^2 " + b, 1e-10);
    Check cBwd = make_check("|W| = km^2/rho^2 => E = -zeta rho^2/2m " + b, 1e-10);
    for (int i = 0; i < n; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      const double E = energy(x, P);
      guarded(cH, [&] { cH.record(std::abs(delaunay_hamiltonian(s_inverse(x, P, sig), P) - E)); });
      guarded(cFwd, [&] {
        const double rho = rho_for_energy(E, P);
        cFwd.record(std::abs(w_norm(moser_lift_inv(x, rho, sig).w, sig) - km2 / (rho * rho)));
      });
      guarded(cBwd, [&] {
        const double rho = smp.uniform(0.3, 1.5);
        CotangentQPoint q = smp.q_point(sig, rho);
        q.w = (km2 / (rho * rho) / w_norm(q.w, sig)) * q.w;
        cBwd.record(std::abs(energy(moser_lift(q), P) + z * rho * rho / (2.0 * P.m)));
      });
      guarded(cMh, [&] {
        const double rho = smp.uniform(0.3, 1.5);
        const CotangentQPoint q = smp.q_point(sig, rho, true);
        cMh.record(std::abs(moser_hamiltonian(q, P) - energy(moser_lift(q), P)));
      });
    }
    for (auto* c : {&cH, &cMh, &cFwd, &cBwd}) rep.checks.push_back(*c);
  }
  Check cZf = make_check("E = 0 => |W| = 2m^2k/l", 1e-10);
  Check cZb = make_check("|W| = 2m^2k/l => E = 0", 1e-10);
  Check cZh = make_check("parabolic_hamiltonian - E o parabolic_lift", 1e-12);
  for (int i = 0; i < n; ++i) {
    guarded(cZf, [&] {
      const PhasePointE x = smp.zero_energy_point(P);
      cZf.record(std::abs(norm(parabolic_lift(x, P.l).w) - 2.0 * P.mu2k() / P.l));
    });
    guarded(cZb, [&] {
      CotangentEPoint q{smp.uniform(0.3, 3.0) * smp.unit_vector(), smp.unit_vector()};
      q.w = (2.0 * P.mu2k() / P.l) * q.w;
      cZb.record(std::abs(energy(parabolic_lift(q, P.l), P)));
      q.w = smp.uniform(0.5, 2.0) * q.w;
      cZh.record(std::abs(parabolic_hamiltonian(q, P) - energy(parabolic_lift(q, P.l), P)));
    });
  }
  if (!cZb.error.empty() && cZh.error.empty()) cZh.error = cZb.error;
  for (auto* c : {&cZf, &cZb, &cZh}) rep.checks.push_back(*c);
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_symplectic(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"symplectic", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 4);
  const int n = cfg.count(200);
  constexpr int kPairs = 10;
  const auto flat = [&P](const Vec6& v) { return gls_flat(v, P); };
  const auto unit = [](const TangentE& d) {
    const Vec6 v = to_vector(d);
    return Vec6(v / v.norm());
  };
  // The FD pushforward picks up a small normal component; the exact one is tangent.
  const auto push = [](const DelaunayPoint& q, const Eigen::MatrixXd& J, const Vec6& u) {
    return project_tangent_q(q.om, q.w, q.sig, tangent_q_from(J * u));
  };

  // Serial calibration of the global sign at one point.
  double sign = 0.0;
  {
    const PhasePointE x = smp.phase_point(Signature::elliptic, P);
    const auto J = jacobian_fd(flat, to_vector(x));
    const DelaunayPoint q = gls_map(x, P);
    const Vec6 u = unit(smp.tangent_e()), v = unit(smp.tangent_e());
    const double wq = two_form_q(q.om, q.w, q.sig, push(q, J, u), push(q, J, v));
    sign = wq * two_form_e(tangent_e_from(u), tangent_e_from(v)) >= 0.0 ? 1.0 : -1.0;
  }
  rep.info.emplace_back("global_sign", sign);

  for (Signature sig : kBranches) {
    Check c = make_check(std::string("gls pullback of two_form_Q vs sign * two_form_E ") +
                             branch_name(sig),
                         1e-6);
    Check c4 = make_check(std::string("same, fourth-order FD Jacobian ") + branch_name(sig), 1e-6,
                          false);
    for (int i = 0; i < n; ++i) {
      guarded(c, [&] {
        const PhasePointE x = smp.phase_point(sig, P);
        const auto J = jacobian_fd(flat, to_vector(x));
        const auto J4 = jacobian_fd4(flat, to_vector(x));
        const DelaunayPoint q = gls_map(x, P);
        double worst = 0.0, worst4 = 0.0;
        for (int k = 0; k < kPairs; ++k) {
          const Vec6 u = unit(smp.tangent_e()), v = unit(smp.tangent_e());
          const double we = sign * two_form_e(tangent_e_from(u), tangent_e_from(v));
          worst = std::max(worst,
                           std::abs(two_form_q(q.om, q.w, q.sig, push(q, J, u), push(q, J, v)) - we));
          worst4 = std::max(
              worst4, std::abs(two_form_q(q.om, q.w, q.sig, push(q, J4, u), push(q, J4, v)) - we));
        }
        c.record(worst);
        c4.record(worst4);
      });
    }
    rep.checks.push_back(c);
    rep.checks.push_back(c4);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_anti_symplectic(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"anti-symplectic", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 5);
  const int n = cfg.count(200);
  constexpr int kPairs = 10;
  for (Signature sig : kBranches) {
    Check c = make_check(std::string("two_form_E(DS u, DS v) + two_form_Q(u, v) ") +
                             branch_name(sig),
                         1e-6);
    for (int i = 0; i < n; ++i) {
      guarded(c, [&] {
        const PhasePointE x = smp.phase_point(sig, P);
        const double rho = rho_for_energy(energy(x, P), P);
        const CotangentQPoint q = moser_lift_inv(x, rho, sig);
        const auto lift = [sig, rho](const Vec8& v) {
          return to_vector(moser_lift(CotangentQPoint{om_part(v), w_part(v), sig, rho}));
        };
        const Eigen::MatrixXd D = jacobian_fd(lift, to_vector(q.om, q.w));
        const auto basis = tangent_basis_q(q.om, q.w, sig);
        double worst = 0.0;
        for (int k = 0; k < kPairs; ++k) {
          Eigen::Matrix<double, 6, 1> a, b;
          for (int j = 0; j < 6; ++j) {
            a[j] = smp.uniform(-1.0, 1.0);
            b[j] = smp.uniform(-1.0, 1.0);
          }
          const Vec8 u = basis * a, v = basis * b;
          const double we = two_form_e(tangent_e_from(D * u), tangent_e_from(D * v));
          const double wq = two_form_q(q.om, q.w, sig, tangent_q_from(u), tangent_q_from(v));
          worst = std::max(worst, std::abs(we + wq));
        }
        c.record(worst);
      });
    }
    rep.checks.push_back(c);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_equivariance(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"equivariance", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 6);
  const int n = cfg.count(100);
  const std::vector<double> times{0.1, 0.5, 1.0};
  for (Signature sig : kBranches) {
    Check c = make_check(std::string("gls o Kepler_t - delaunay_flow_t o gls ") + branch_name(sig),
                         1e-7);
    Check cH = make_check(std::string("delaunay_hamiltonian o gls - E ") + branch_name(sig),
                          1e-10);
    Check cF = make_check(
        std::string("delaunay_flow constraint and |W| drift, relative ") + branch_name(sig), 1e-12);
    Check cFa = make_check(
        std::string("delaunay_flow constraint and |W| drift, absolute ") + branch_name(sig), 1e-12,
        false);
    for (int i = 0; i < n; ++i) {
      guarded(c, [&] {
        const PhasePointE x = smp.phase_point(sig, P);
        const DelaunayPoint g0 = gls_map(x, P);
        cH.record(std::abs(delaunay_hamiltonian(g0, P) - energy(x, P)));
        const auto orbit = kepler_orbit(x, times, P, cfg.tol);
        double worst = 0.0, rel = 0.0, abs_drift = 0.0;
        const double n0 = delaunay_w_norm(g0, P);
        for (std::size_t j = 0; j < times.size(); ++j) {
          const DelaunayPoint moved = delaunay_flow(g0, times[j], P);
          worst = std::max(worst, dist(gls_map(orbit[j], P), moved));
          const auto res = residuals(moved, P);
          const double dn = std::abs(delaunay_w_norm(moved, P) - n0);
          // Each residual is a cancellation among terms of these sizes.
          const double om = euclidean_norm(moved.om), w = euclidean_norm(moved.w);
          rel = std::max({rel, std::abs(res.quadric) / std::max(1.0, om * om),
                          std::abs(res.tangency) / std::max(1.0, om * w), dn / std::max(1.0, n0)});
          abs_drift = std::max({abs_drift, std::abs(res.quadric), std::abs(res.tangency), dn});
        }
        c.record(worst);
        cF.record(rel);
        cFa.record(abs_drift);
      });
    }
    rep.checks.push_back(c);
    rep.checks.push_back(cH);
    rep.checks.push_back(cF);
    rep.checks.push_back(cFa);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_conformal(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"conformal", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 7);
  const int n = cfg.count(50);
  for (Signature sig : kBranches) {
    Check c = make_check(std::string("(S^-1)_* X_E - g X_H ") + branch_name(sig), 1e-5);
    Check cg = make_check(std::string("conformal factor R/(h-R) - mk/(2rE) ") + branch_name(sig),
                          1e-12);
    for (int i = 0; i < n; ++i) {
      guarded(c, [&] {
        const PhasePointE x = smp.phase_point(sig, P);
        const DelaunayPoint q = s_inverse(x, P, sig);
        const auto sinv = [&P, sig](const Vec6& v) {
          const DelaunayPoint d = s_inverse(phase_point_from(v), P, sig);
          return to_vector(d.om, d.w);
        };
        const Vec8 push = directional_fd(sinv, to_vector(x), to_vector(kepler_vector_field(x, P)));
        const TangentQ XH = hamiltonian_field_q(
            [&P, sig](const Vec8& v) { return delaunay_hamiltonian(v, sig, P); }, q.om, q.w, sig);
        const double g = conformal_factor(q, P);
        c.record((push - g * to_vector(XH)).lpNorm<Eigen::Infinity>());
        const double rn = norm(x.r);
        cg.record(std::abs(g - P.m * P.k / (2.0 * rn * energy(x, P))));
      });
    }
    rep.checks.push_back(c);
    rep.checks.push_back(cg);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_intertwine(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"intertwine", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 8);
  const int n = cfg.count(500);
  for (Signature sig : kBranches) {
    Check c1 = make_check(std::string("K1 o gls - p x r ") + branch_name(sig), 1e-8);
    Check c2 = make_check(std::string("K2 o gls - (m^2k/rho) eps ") + branch_name(sig), 1e-8);
    for (int i = 0; i < n; ++i) {
      guarded(c1, [&] {
        const auto r = intertwine_check(smp.phase_point(sig, P), P);
        c1.record(r.K1);
        c2.record(r.K2);
      });
    }
    c2.error = c1.error;
    rep.checks.push_back(c1);
    rep.checks.push_back(c2);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_poisson(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"brackets", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 9);
  const int n = cfg.count(200);
  for (Signature sig : kBranches) {
    std::vector<Check> rows;
    for (int i = 0; i < n; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      try {
        const auto table = poisson_table_check(x, P);
        if (rows.empty())
          for (const auto& e : table)
            rows.push_back(make_check(e.name + " " + branch_name(sig), 1e-6));
        for (std::size_t k = 0; k < table.size(); ++k) rows[k].record(table[k].residual());
      } catch (const std::exception& e) {
        if (rows.empty()) rows.push_back(make_check(std::string("table ") + branch_name(sig), 1e-6));
        if (rows[0].error.empty()) rows[0].error = e.what();
      }
    }
    for (auto& r : rows) rep.checks.push_back(std::move(r));
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_algebroid(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"algebroid", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 10);
  const int n = cfg.count(1000);
  Check cA = make_check("antisymmetry", 1e-13);
  Check cJ = make_check("Jacobi identity", 1e-13);
  Check cD = make_check("se(3) degeneration at e = 0", 0.0);
  const double scale = P.m * P.m * P.m * P.k * P.k;
  auto elem = [&](double e) { return AlgebroidElement{e, smp.gaussian_vector(), smp.gaussian_vector()}; };
  auto diff = [](const AlgebroidElement& a, const AlgebroidElement& b) {
    return std::max(max_abs(a.u1 - b.u1), max_abs(a.u2 - b.u2));
  };
  auto add = [](AlgebroidElement a, const AlgebroidElement& b) {
    a.u1 += b.u1;
    a.u2 += b.u2;
    return a;
  };
  for (int i = 0; i < n; ++i) {
    guarded(cA, [&] {
      const double e = smp.uniform(-1.0, 1.0) * scale;
      const AlgebroidElement a = elem(e), b = elem(e), c = elem(e);
      AlgebroidElement ba = algebroid_bracket(b, a, P);
      ba.u1 *= -1.0;
      ba.u2 *= -1.0;
      cA.record(diff(algebroid_bracket(a, b, P), ba));
      const AlgebroidElement jac =
          add(add(algebroid_bracket(a, algebroid_bracket(b, c, P), P),
                  algebroid_bracket(b, algebroid_bracket(c, a, P), P)),
              algebroid_bracket(c, algebroid_bracket(a, b, P), P));
      cJ.record(std::max(max_abs(jac.u1), max_abs(jac.u2)));

      const AlgebroidElement a0 = elem(0.0), b0 = elem(0.0);
      const AlgebroidElement se3{0.0, -cross(a0.u1, b0.u1),
                                 -(cross(a0.u1, b0.u2) + cross(a0.u2, b0.u1))};
      cD.record(diff(algebroid_bracket(a0, b0, P), se3));
    });
  }
  cJ.error = cD.error = cA.error;
  rep.checks.push_back(cA);
  rep.checks.push_back(cJ);
  rep.checks.push_back(cD);
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_action(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"algebroid action", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 11);
  const int n = cfg.count(50);
  Check c = make_check("[X_a, X_b] - X_[a,b]", 1e-5);
  Check cf = make_check("[X_a, X_b] - X_[a,b] with e frozen (diagnostic)", 1e-5, false);
  Check cl = make_check("X_(f s) - f X_s for constant f", 1e-8);
  for (int i = 0; i < n; ++i) {
    guarded(c, [&] {
      const Signature sig = i % 2 == 0 ? Signature::elliptic : Signature::hyperbolic;
      const PhasePointE x = smp.phase_point(sig, P);
      const double E = energy(x, P);
      const AlgebroidElement a{E, smp.unit_vector(), smp.unit_vector()};
      const AlgebroidElement b{E, smp.unit_vector(), smp.unit_vector()};
      const auto r = action_bracket_check(a, b, x, P);
      c.record(r.residual);
      cf.record(r.frozen_residual);

      const double f = smp.uniform(-2.0, 2.0);
      const TangentE Xs = hamiltonian_field_e(
          [&](const PhasePointE& y) { return pairing(y, a.u1, a.u2, P); }, x);
      const TangentE Xfs = hamiltonian_field_e(
          [&](const PhasePointE& y) { return pairing(y, f * a.u1, f * a.u2, P); }, x);
      cl.record((to_vector(Xfs) - f * to_vector(Xs)).lpNorm<Eigen::Infinity>());
    });
  }
  rep.checks.push_back(c);
  rep.checks.push_back(cf);
  rep.checks.push_back(cl);
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_sigma(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"sigma", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 12);
  const int n = cfg.count(20);
  Check cD = make_check("d sigma/dt - 1/r along orbits", 1e-7);
  Check cN = make_check("sigma_numeric - sigma_kepler", 1e-7);
  Check cA = make_check("affinity defect of (1/r, p.r/mk)", 1e-8);
  Check cV = make_check("affinity value + 2E/mk", 1e-7);
  Check cLit = make_check("literal affinity defect (diagnostic)", 1e-8, false);

  const FieldHandle X = kepler_field_handle(P);
  const ScalarField g = inverse_radius();
  const ScalarField s0 = [P](const Point& y) {
    return sigma_kepler(0.0, phase_point_from(Vec6(y)), P);
  };
  const SigmaFunction numeric = sigma_numeric(s0, g, X, 0.0, cfg.tol);
  constexpr double kH = 1e-4;
  for (int i = 0; i < n; ++i) {
    const Signature sig = i % 2 == 0 ? Signature::elliptic : Signature::hyperbolic;
    const PhasePointE x = smp.phase_point(sig, P);
    const double E = energy(x, P);
    guarded(cD, [&] {
      const double t = smp.uniform(0.2, 2.0);
      const auto orbit = kepler_orbit(x, {t - kH, t, t + kH}, P, cfg.tol);
      const double ds = (sigma_kepler(t + kH, orbit[2], P) - sigma_kepler(t - kH, orbit[0], P)) /
                        (2.0 * kH);
      cD.record(std::abs(ds - 1.0 / norm(orbit[1].r)));
    });
    guarded(cN, [&] {
      const double t = smp.uniform(-2.0, 2.0);
      cN.record(std::abs(numeric(t, to_vector(x)) - sigma_kepler(t, x, P)));
    });
    guarded(cA, [&] {
      const double T = sig == Signature::elliptic ? kepler_period(x, P) : 5.0;
      const AffinityReport r = affinity_defect(g, s0, X, to_vector(x), T, 40, cfg.tol);
      cA.record(r.defect);
      cV.record(std::abs(r.value + 2.0 * E / (P.m * P.k)));
      cLit.record(r.literal_defect);
    });
  }
  cV.error = cA.error;
  for (auto* c : {&cD, &cN, &cA, &cV, &cLit}) rep.checks.push_back(*c);
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_hodograph(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"hodograph", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 13);
  const int n = cfg.count(50);
  for (Signature sig : kBranches) {
    const std::string b = branch_name(sig);
    Check cC = make_check("|p - c| - radius along orbits " + b, 1e-8);
    Check cK = make_check("center and radius drift " + b, 1e-8);
    Check cP = make_check("2mE - (|c|^2 - radius^2) " + b, 1e-12);
    Check cO = make_check("L . eps " + b, 1e-12);
    for (int i = 0; i < n; ++i) {
      guarded(cC, [&] {
        const PhasePointE x = smp.phase_point(sig, P);
        const HodographCircle h0 = hodograph(x, P);
        const double T = sig == Signature::elliptic ? kepler_period(x, P) : 10.0;
        std::vector<double> times;
        for (int j = 1; j <= 20; ++j) times.push_back(T * j / 20.0);
        double dc = 0.0, dk = 0.0, pw = 0.0, lo = 0.0;
        auto pointwise = [&](const PhasePointE& y) {
          const HodographCircle h = hodograph(y, P);
          const EnergyMomentum j = energy_momentum(y, P);
          pw = std::max(pw, std::abs(2.0 * P.m * j.E - (norm2(h.c) - h.radius * h.radius)));
          lo = std::max(lo, std::abs(dot(j.L, j.eps)));
          dk = std::max({dk, max_abs(h.c - h0.c), std::abs(h.radius - h0.radius)});
        };
        pointwise(x);
        for (const auto& y : kepler_orbit(x, times, P, cfg.tol)) {
          dc = std::max(dc, std::abs(norm(y.p - h0.c) - h0.radius));
          pointwise(y);
        }
        cC.record(dc);
        cK.record(dk);
        cP.record(pw);
        cO.record(lo);
      });
    }
    cK.error = cP.error = cO.error = cC.error;
    for (auto* c : {&cC, &cK, &cP, &cO}) rep.checks.push_back(*c);
  }
  rep.seconds = timer.seconds();
  return rep;
}

SuiteReport check_explicit(const VerifyConfig& cfg) {
  Timer timer;
  SuiteReport rep{"explicit", {}, {}, 0.0};
  const KeplerParams& P = cfg.params;
  Sampler smp = make_sampler(cfg, 14);
  const int n = cfg.count(500);
  Check cS = make_check("xi0^2 + |xi|^2 - 1", 1e-12);
  Check cO = make_check("xi0 eta0 + xi.eta", 1e-12);
  Check cX = make_check("explicit vs composed, xi block (report)", 1e-9, false);
  Check cE = make_check("explicit vs composed, eta block (report)", 1e-9, false);
  Check cPr = make_check("printed phase vs composed, xi block (report)", 1e-9, false);

  double scale = 0.0;
  guarded(cX, [&] {
    const PhasePointE circ{{1.0, 0.0, 0.0}, {0.0, P.m * std::sqrt(P.k), 0.0}};
    scale = calibrate_eta_scale(circ, P);
  });
  rep.info.emplace_back("eta_scale", scale);
  for (int i = 0; i < n; ++i) {
    guarded(cS, [&] {
      const PhasePointE x = smp.phase_point(Signature::elliptic, P);
      const ExplicitIdentities id = explicit_identities(gls_explicit_negative(x, P));
      cS.record(std::abs(id.sphere));
      cO.record(std::abs(id.orthogonality));
      const ExplicitComparison cmp = compare_explicit(x, P, scale);
      cX.record(cmp.xi_residual);
      cE.record(cmp.eta_residual);
      if (std::abs(dot(x.r, x.p)) > 1e-8)
        cPr.record(compare_explicit(x, P, scale, PhaseMode::printed).xi_residual);
    });
  }
  cO.error = cS.error;
  for (auto* c : {&cS, &cO, &cX, &cE, &cPr}) rep.checks.push_back(*c);
  rep.seconds = timer.seconds();
  return rep;
}

const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> reg{
      {"conservation", check_conservation}, {"hodograph", check_hodograph},
      {"roundtrip", check_roundtrip},       {"energy", check_energy},
      {"symplectic", check_symplectic},     {"anti-symplectic", check_anti_symplectic},
      {"equivariance", check_equivariance}, {"conformal", check_conformal},
      {"sigma", check_sigma},               {"intertwine", check_intertwine},
      {"explicit", check_explicit},         {"brackets", check_poisson},
      {"algebroid", check_algebroid},       {"algebroid action", check_action},
  };
  return reg;
}

}  // namespace confham
