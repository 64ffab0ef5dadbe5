#include "abraham/spectral_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abraham {

namespace {

void check_size(const SpectralFieldPair& s, const KGrid& g, const char* who) {
  if (s.e_hat.size() != g.n_nodes() || s.b_hat.size() != g.n_nodes())
    throw std::invalid_argument(std::string(who) + ": state size does not match grid");
}

}  // namespace

void free_rotate_inplace(SpectralFieldPair& state, const KGrid& grid,
                         const std::vector<double>& cos_kt,
                         const std::vector<double>& sin_kt) {
  const std::size_t nd = grid.n_directions();
  const Complex i_unit(0.0, 1.0);
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    const double c = cos_kt[ir];
    const double s = sin_kt[ir];
    for (std::size_t id = 0; id < nd; ++id) {
      const std::size_t n = ir * nd + id;
      const Vec3& kh = grid.directions[id];
      const CVec3 e = state.e_hat[n];
      const CVec3 b = state.b_hat[n];
      const Complex e_par = dot(kh, e);
      const Complex b_par = dot(kh, b);
      const CVec3 e_tr = e - CVec3(kh) * e_par;
      const CVec3 b_tr = b - CVec3(kh) * b_par;
      // khat x v drops longitudinal parts, so the full b/e can be used there
      state.e_hat[n] = CVec3(kh) * e_par + e_tr * c + cross(kh, b_tr) * (i_unit * s);
      state.b_hat[n] = CVec3(kh) * b_par + b_tr * c - cross(kh, e_tr) * (i_unit * s);
    }
  }
}

SpectralFieldPair free_propagate(const SpectralFieldPair& state,
                                 const KGrid& grid, double t) {
  check_size(state, grid, "free_propagate");
  SpectralFieldPair out = state;
  std::vector<double> c(grid.n_radial()), s(grid.n_radial());
  for (std::size_t ir = 0; ir < grid.n_radial(); ++ir) {
    c[ir] = std::cos(grid.radial_nodes[ir] * t);
    s[ir] = std::sin(grid.radial_nodes[ir] * t);
  }
  free_rotate_inplace(out, grid, c, s);
  return out;
}

FieldFunctionals functionals(const SpectralFieldPair& state, const KGrid& grid,
                             bool* symmetry_warning) {
  check_size(state, grid, "functionals");
  FieldFunctionals f;
  // For a real position-space field, integral F(x)^2 d3x equals
  // sum w F(k).F(-k); its imaginary part is the Hermitian-symmetry probe,
  // while the plain |.|^2 sum is what we report as energy.
  double energy = 0.0;
  Vec3 mom;
  Complex sym_probe(0.0, 0.0);
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    const double w = grid.weight(n);
    energy += 0.5 * w * (state.e_hat[n].norm2() + state.b_hat[n].norm2());
    const CVec3 exb = cross(conj(state.e_hat[n]), state.b_hat[n]);
    mom += w * exb.real();
    const std::size_t a = grid.antipode(n);
    sym_probe += w * (dot(state.e_hat[n], state.e_hat[a]) +
                      dot(state.b_hat[n], state.b_hat[a]));
  }
  f.energy = energy;
  f.momentum = mom;
  f.l2_norm = std::sqrt(2.0 * energy);
  if (symmetry_warning != nullptr)
    *symmetry_warning = std::abs(sym_probe.imag()) > 1e-10 * (std::abs(sym_probe.real()) + 1e-300);
  return f;
}

SpectralFieldPair enforce_hermitian(const SpectralFieldPair& state,
                                    const KGrid& grid) {
  check_size(state, grid, "enforce_hermitian");
  SpectralFieldPair out(grid.n_nodes());
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    const std::size_t a = grid.antipode(n);
    out.e_hat[n] = (state.e_hat[n] + conj(state.e_hat[a])) * 0.5;
    out.b_hat[n] = (state.b_hat[n] + conj(state.b_hat[a])) * 0.5;
  }
  return out;
}

double hermitian_defect(const SpectralFieldPair& state, const KGrid& grid) {
  check_size(state, grid, "hermitian_defect");
  double worst = 0.0;
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    const std::size_t a = grid.antipode(n);
    worst = std::max(worst, (state.e_hat[n] - conj(state.e_hat[a])).norm());
    worst = std::max(worst, (state.b_hat[n] - conj(state.b_hat[a])).norm());
  }
  return worst;
}

double transversality_defect(const SpectralFieldPair& state, const KGrid& grid) {
  check_size(state, grid, "transversality_defect");
  double worst = 0.0;
  for (std::size_t n = 0; n < grid.n_nodes(); ++n)
    worst = std::max(worst, std::abs(dot(grid.khat(n), state.b_hat[n])));
  return worst;
}

double field_norm(const SpectralFieldPair& state, const KGrid& grid) {
  check_size(state, grid, "field_norm");
  double s = 0.0;
  for (std::size_t n = 0; n < grid.n_nodes(); ++n)
    s += grid.weight(n) * (state.e_hat[n].norm2() + state.b_hat[n].norm2());
  return std::sqrt(s);
}

void axpy(SpectralFieldPair& y, double a, const SpectralFieldPair& x) {
  for (std::size_t n = 0; n < y.size(); ++n) {
    y.e_hat[n] += x.e_hat[n] * a;
    y.b_hat[n] += x.b_hat[n] * a;
  }
}

SpectralFieldPair subtract(const SpectralFieldPair& a, const SpectralFieldPair& b) {
  SpectralFieldPair out(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    out.e_hat[n] = a.e_hat[n] - b.e_hat[n];
    out.b_hat[n] = a.b_hat[n] - b.b_hat[n];
  }
  return out;
}

void scale(SpectralFieldPair& f, double a) {
  for (std::size_t n = 0; n < f.size(); ++n) {
    f.e_hat[n] = f.e_hat[n] * a;
    f.b_hat[n] = f.b_hat[n] * a;
  }
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_field(std::ostream& os, const SpectralFieldPair& state,
                 const KGrid& grid) {
  check_size(state, grid, "write_field");
  os << "# abraham-field v1\n";
  os << "# convention " << kConventionVersion << "\n";
  os << "# grid n_radial=" << grid.n_radial() << " k_min=" << fmt(grid.k_min)
     << " k_max=" << fmt(grid.k_max) << " n_polar=" << grid.n_polar
     << " n_azimuth=" << grid.n_azimuth << "\n";
  os << "k_mag,khat_x,khat_y,khat_z,re_ex,im_ex,re_ey,im_ey,re_ez,im_ez,"
        "re_bx,im_bx,re_by,im_by,re_bz,im_bz\n";
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    const Vec3& kh = grid.khat(n);
    const CVec3& e = state.e_hat[n];
    const CVec3& b = state.b_hat[n];
    os << fmt(grid.kmag(n)) << ',' << fmt(kh.x) << ',' << fmt(kh.y) << ','
       << fmt(kh.z) << ',' << fmt(e.x.real()) << ',' << fmt(e.x.imag()) << ','
       << fmt(e.y.real()) << ',' << fmt(e.y.imag()) << ',' << fmt(e.z.real())
       << ',' << fmt(e.z.imag()) << ',' << fmt(b.x.real()) << ','
       << fmt(b.x.imag()) << ',' << fmt(b.y.real()) << ',' << fmt(b.y.imag())
       << ',' << fmt(b.z.real()) << ',' << fmt(b.z.imag()) << '\n';
  }
}

void write_field_file(const std::string& path, const SpectralFieldPair& state,
                      const KGrid& grid) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_file: cannot open " + path);
  write_field(os, state, grid);
}

SpectralFieldPair read_field_file(const std::string& path, KGrid* grid_out) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_field_file: cannot open " + path);
  std::string line;
  std::size_t n_radial = 0, n_polar = 0, n_azimuth = 0;
  double k_min = 0.0, k_max = 0.0;
  bool convention_ok = false;
  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') break;  // column-name row
    std::istringstream ls(line.substr(1));
    std::string tok;
    ls >> tok;
    if (tok == "convention") {
      std::string v;
      ls >> v;
      convention_ok = (v == kConventionVersion);
    } else if (tok == "grid") {
      std::string kv;
      while (ls >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "n_radial") n_radial = std::stoul(val);
        else if (key == "k_min") k_min = std::stod(val);
        else if (key == "k_max") k_max = std::stod(val);
        else if (key == "n_polar") n_polar = std::stoul(val);
        else if (key == "n_azimuth") n_azimuth = std::stoul(val);
        else throw std::runtime_error("read_field_file: unknown grid key " + key);
      }
    }
  }
  if (!convention_ok)
    throw std::runtime_error("read_field_file: missing or mismatched convention header in " + path);
  KGrid grid = build_kgrid(n_radial, k_min, k_max, n_polar, n_azimuth);
  SpectralFieldPair state(grid.n_nodes());
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    if (!std::getline(is, line))
      throw std::runtime_error("read_field_file: truncated file " + path);
    std::istringstream ls(line);
    double col[16];
    for (int c = 0; c < 16; ++c) {
      std::string cell;
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("read_field_file: short row in " + path);
      col[c] = std::stod(cell);
    }
    if (std::abs(col[0] - grid.kmag(n)) > 1e-12 * grid.kmag(n))
      throw std::runtime_error("read_field_file: node order mismatch in " + path);
    state.e_hat[n] = {{col[4], col[5]}, {col[6], col[7]}, {col[8], col[9]}};
    state.b_hat[n] = {{col[10], col[11]}, {col[12], col[13]}, {col[14], col[15]}};
  }
  if (grid_out != nullptr) *grid_out = grid;
  return state;
}

}  // namespace abraham
