#include "hms/assembly.hpp"

#include <cmath>

namespace hms {

namespace {

double edge_length(const Mesh& mesh, int n0, int n1) {
  double dx = mesh.nodes[n1].x - mesh.nodes[n0].x;
  double dy = mesh.nodes[n1].y - mesh.nodes[n0].y;
  return std::sqrt(dx * dx + dy * dy);
}

} // namespace

SparseSystem assemble_step_system(const Mesh& mesh, const LayeredDomain& domain,
                                  const std::vector<CoefficientSet>& tri_coeffs,
                                  const std::vector<double>& u_prev, double h_t,
                                  const BoundaryDriveSet& drives, double t_now) {
  if (static_cast<int>(tri_coeffs.size()) != mesh.num_tris())
    raise(ErrorKind::ValidationError, "coefficient count does not match triangle count");
  if (static_cast<int>(u_prev.size()) != mesh.num_dofs())
    raise(ErrorKind::ValidationError, "previous field size does not match mesh");
  if (!(h_t > 0)) raise(ErrorKind::ValidationError, "time step must be positive");

  TripletBuilder bld(mesh.num_dofs());

  for (int t = 0; t < mesh.num_tris(); ++t) {
    const auto& v = mesh.tris[t];
    const CoefficientSet& c = tri_coeffs[t];
    const double A = mesh.tri_area(t);
    const auto g = mesh.tri_grads(t);

    for (int p = 0; p < 3; ++p) {
      for (int j = 0; j < 2; ++j) {
        const int row = mesh.dof(v[p], j);
        for (int m = 0; m < 3; ++m) {
          const double mass = A / 12.0 * (p == m ? 2.0 : 1.0); // exact P1 mass
          const double stiff = A * (g[p].x * g[m].x + g[p].y * g[m].y);
          for (int i = 0; i < 2; ++i) {
            const double mcoef = c.b[i][j] / h_t * mass;
            bld.add(row, mesh.dof(v[m], i), mcoef + c.a[j][i] * stiff);
            bld.add_rhs(row, mcoef * u_prev[mesh.dof(v[m], i)]);
          }
        }
        bld.add_rhs(row, c.fsrc[j] * A / 3.0);
      }
    }
  }

  for (const auto& e : mesh.exterior_edges) {
    const ExteriorSegment& seg = domain.exteriors[e.segment];
    const double L = edge_length(mesh, e.n0, e.n1);
    const int nodes[2] = {e.n0, e.n1};

    Vec2 nu{0, 0};
    if (!drives.layer_nu.empty()) nu = drives.layer_nu[seg.layer];

    const BoundaryDrive* drive = nullptr;
    if (auto it = drives.by_side.find(seg.side); it != drives.by_side.end()) drive = &it->second;
    const Vec2 sigma = drive ? drive->sigma.value(t_now) : Vec2{0, 0};

    for (int j = 0; j < 2; ++j) {
      const double absorb = (drive ? drive->alpha[j] : 0.0) + nu[j];
      if (absorb != 0.0) {
        for (int p = 0; p < 2; ++p)
          for (int m = 0; m < 2; ++m)
            bld.add(mesh.dof(nodes[p], j), mesh.dof(nodes[m], j),
                    absorb * L * (p == m ? 1.0 / 3.0 : 1.0 / 6.0));
      }
      if (drive && drive->alpha[j] != 0.0) {
        for (int p = 0; p < 2; ++p)
          bld.add_rhs(mesh.dof(nodes[p], j), drive->alpha[j] * sigma[j] * L / 2.0);
      }
    }
  }

  return bld.finish();
}

std::vector<Vec2> interface_flux_jump(const Mesh& mesh, const LayeredDomain& domain,
                                      const std::vector<CoefficientSet>& tri_coeffs,
                                      const std::vector<double>& u) {
  std::vector<Vec2> acc(domain.interfaces.size(), Vec2{0, 0});

  auto tri_grad = [&](int t, int comp) {
    const auto g = mesh.tri_grads(t);
    const auto& v = mesh.tris[t];
    Point gr{0, 0};
    for (int p = 0; p < 3; ++p) {
      gr.x += u[mesh.dof(v[p], comp)] * g[p].x;
      gr.y += u[mesh.dof(v[p], comp)] * g[p].y;
    }
    return gr;
  };

  for (const auto& e : mesh.interface_edges) {
    const InterfaceSegment& seg = domain.interfaces[e.segment];
    // shared normal pointing from the layer_a side into layer_b
    const Point n = seg.seg.vertical ? Point{1, 0} : Point{0, 1};
    const double L = edge_length(mesh, e.n0, e.n1);

    Point ga[2] = {tri_grad(e.tri_a, 0), tri_grad(e.tri_a, 1)};
    Point gb[2] = {tri_grad(e.tri_b, 0), tri_grad(e.tri_b, 1)};
    const CoefficientSet& ca = tri_coeffs[e.tri_a];
    const CoefficientSet& cb = tri_coeffs[e.tri_b];

    for (int j = 0; j < 2; ++j) {
      double fa = 0, fb = 0;
      for (int i = 0; i < 2; ++i) {
        fa += ca.a[j][i] * (ga[i].x * n.x + ga[i].y * n.y);
        fb += cb.a[j][i] * (gb[i].x * n.x + gb[i].y * n.y);
      }
      acc[e.segment][j] += L * (fa - fb) * (fa - fb);
    }
  }

  for (auto& v : acc) {
    v[0] = std::sqrt(v[0]);
    v[1] = std::sqrt(v[1]);
  }
  return acc;
}

double discrete_energy(const Mesh& mesh, const std::vector<double>& u,
                       const std::vector<LinearParams>& layer_params) {
  double energy = 0.0;
  for (int t = 0; t < mesh.num_tris(); ++t) {
    const Mat2& k = layer_params[mesh.tri_layer[t]].kappa;
    const auto g = mesh.tri_grads(t);
    const auto& v = mesh.tris[t];
    Point gr[2] = {{0, 0}, {0, 0}};
    for (int comp = 0; comp < 2; ++comp)
      for (int p = 0; p < 3; ++p) {
        gr[comp].x += u[mesh.dof(v[p], comp)] * g[p].x;
        gr[comp].y += u[mesh.dof(v[p], comp)] * g[p].y;
      }
    const double g11 = gr[0].x * gr[0].x + gr[0].y * gr[0].y;
    const double g22 = gr[1].x * gr[1].x + gr[1].y * gr[1].y;
    const double g12 = gr[0].x * gr[1].x + gr[0].y * gr[1].y;
    energy += mesh.tri_area(t) * (0.5 * k[1][0] * k[0][0] * g11 +
                                  0.5 * k[0][1] * k[1][1] * g22 + k[0][1] * k[1][0] * g12);
  }
  return energy;
}

Vec2 component_totals(const Mesh& mesh, const std::vector<double>& u,
                      const std::vector<LinearParams>& layer_params) {
  Vec2 q{0, 0};
  for (int t = 0; t < mesh.num_tris(); ++t) {
    const Mat2& beta = layer_params[mesh.tri_layer[t]].beta;
    const auto& v = mesh.tris[t];
    const double A3 = mesh.tri_area(t) / 3.0;
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        for (int p = 0; p < 3; ++p) q[j] += A3 * beta[j][i] * u[mesh.dof(v[p], i)];
  }
  return q;
}

} // namespace hms
