#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "smpx/bench.hpp"
#include "smpx/error.hpp"

namespace smpx {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInstanceStream = 0x696e7374616e6365ULL;  // "instance"

// ----- parameter helpers ---------------------------------------------------

void check_keys(const json& params, std::initializer_list<const char*> allowed,
                const std::string& kind) {
  if (!params.is_object()) throw ConfigError(kind + ": params must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : params.items())
    if (!ok.count(k)) throw ConfigError(kind + ": unknown parameter '" + k + "'");
}

std::size_t get_size(const json& p, const char* key, std::size_t def, std::size_t min) {
  if (!p.contains(key)) return def;
  const auto& v = p.at(key);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
    throw ConfigError(std::string("parameter '") + key + "' must be an integer >= " +
                      std::to_string(min));
  return v.get<std::size_t>();
}

double get_double(const json& p, const char* key, double def) {
  if (!p.contains(key)) return def;
  const auto& v = p.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>()))
    throw ConfigError(std::string("parameter '") + key + "' must be a finite number");
  return v.get<double>();
}

std::vector<std::size_t> get_sizes(const json& p, const char* key,
                                   std::vector<std::size_t> def) {
  if (!p.contains(key)) return def;
  const auto& v = p.at(key);
  if (!v.is_array() || v.empty())
    throw ConfigError(std::string("parameter '") + key + "' must be a nonempty list");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<long long>() < 1)
      throw ConfigError(std::string("parameter '") + key + "' entries must be integers >= 1");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

NoiseSpec get_noise(const json& p) {
  NoiseSpec n;
  if (p.contains("noise")) {
    if (!p.at("noise").is_string()) throw ConfigError("parameter 'noise' must be a string");
    n.model = p.at("noise").get<std::string>();
  }
  if (n.model != "xi" && n.model != "additive")
    throw ConfigError("noise model must be 'xi' or 'additive'");
  n.sigma = get_double(p, "sigma", 0.0);
  if (n.sigma < 0.0) throw ConfigError("parameter 'sigma' must be >= 0");
  return n;
}

// ----- generators ----------------------------------------------------------

Instance gen_eig(const std::string& kind, const json& params, std::uint64_t seed, bool zero_a0) {
  check_keys(params, {"n", "blocks", "scale", "noise", "sigma"}, kind);
  const std::size_t n = get_size(params, "n", zero_a0 ? 20 : 3, 2);
  const auto blocks = get_sizes(params, "blocks",
                                zero_a0 ? std::vector<std::size_t>{4, 4, 4}
                                        : std::vector<std::size_t>{2, 2});
  const double scale = get_double(params, "scale", 1.0);
  if (!(scale > 0.0)) throw ConfigError("parameter 'scale' must be positive");
  BlockStructure s(blocks);
  RandomStream rng(seed, kInstanceStream);
  std::vector<BlockSymMatrix> a;
  for (std::size_t j = 0; j <= n; ++j) {
    auto m = random_symmetric(s, rng, scale);
    if (j == 0 && zero_a0) m = BlockSymMatrix(s);
    a.push_back(std::move(m));
  }
  Instance inst;
  inst.kind = kind;
  inst.seed = seed;
  inst.params = params;
  inst.noise = get_noise(params);
  inst.eig.emplace(std::move(a));
  return inst;
}

Instance gen_scalar(const json& params, std::uint64_t seed) {
  const std::string kind = "scalar_minimax";
  check_keys(params, {"n", "m", "a", "a0", "noise", "sigma"}, kind);
  std::size_t n = get_size(params, "n", 2, 2);
  std::size_t m = get_size(params, "m", 1, 1);
  std::vector<std::vector<double>> a;  // a[j][row]
  if (params.contains("a")) {
    const auto& v = params.at("a");
    if (!v.is_array() || v.size() < 2) throw ConfigError("parameter 'a' must list n >= 2 entries");
    n = v.size();
    for (const auto& e : v) {
      if (e.is_number()) {
        a.push_back({e.get<double>()});
      } else if (e.is_array() && !e.empty()) {
        std::vector<double> row;
        for (const auto& x : e) {
          if (!x.is_number()) throw ConfigError("parameter 'a' entries must be numbers");
          row.push_back(x.get<double>());
        }
        a.push_back(std::move(row));
      } else {
        throw ConfigError("parameter 'a' entries must be numbers or lists");
      }
    }
    m = a.front().size();
    for (const auto& r : a)
      if (r.size() != m) throw ConfigError("parameter 'a' rows differ in length");
    if (params.contains("n") && params.at("n").get<std::size_t>() != n)
      throw ConfigError("parameter 'n' disagrees with 'a'");
  } else {
    RandomStream rng(seed, kInstanceStream);
    a.assign(n, std::vector<double>(m));
    for (auto& r : a)
      for (auto& v : r) v = 2.0 * rng.uniform() - 1.0;
  }
  std::vector<double> a0(m, 0.0);
  if (params.contains("a0")) {
    const auto& v = params.at("a0");
    if (!v.is_array() || v.size() != m) throw ConfigError("parameter 'a0' must list m numbers");
    for (std::size_t i = 0; i < m; ++i) a0[i] = v[i].get<double>();
  }
  // a lone row is duplicated: same value, and Y keeps total size >= 2
  if (m == 1) {
    m = 2;
    for (auto& r : a) r.push_back(r.front());
    a0.push_back(a0.front());
  }
  BlockStructure s(std::vector<std::size_t>(m, 1));
  auto make = [&](const std::vector<double>& d) {
    std::vector<SymMatrix> b;
    for (double x : d) b.push_back(SymMatrix::identity(1, x));
    return BlockSymMatrix(s, std::move(b));
  };
  std::vector<BlockSymMatrix> mats{make(a0)};
  for (const auto& r : a) mats.push_back(make(r));
  Instance inst;
  inst.kind = kind;
  inst.seed = seed;
  inst.params = params;
  inst.noise = get_noise(params);
  inst.eig.emplace(std::move(mats));
  return inst;
}

std::vector<double> random_unit(std::size_t d, RandomStream& rng) {
  std::vector<double> v(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 < 1e-20);
  for (auto& x : v) x /= std::sqrt(n2);
  return v;
}

Instance gen_sdf(const json& params, std::uint64_t seed) {
  const std::string kind = "sdf_system";
  check_keys(params, {"m", "p", "dim", "radius", "margin", "smooth", "sigma", "curvature",
                      "kappa", "coupling", "separable"},
             kind);
  auto p = get_sizes(params, "p", {3, 3, 3});
  if (params.contains("m")) {
    const std::size_t m = get_size(params, "m", p.size(), 1);
    if (!params.contains("p")) p.assign(m, 3);
    if (p.size() != m) throw ConfigError("parameter 'm' disagrees with 'p'");
  }
  const std::size_t m = p.size();
  if (m < 2) throw ConfigError("sdf_system needs m >= 2 components");
  // separable: component l only constrains x_l, two-sided (x_l = x*_l)
  if (params.contains("separable") && !params.at("separable").is_boolean())
    throw ConfigError("parameter 'separable' must be a boolean");
  const bool separable = params.value("separable", false);
  const std::size_t d = get_size(params, "dim", separable ? m : 2, 1);
  const double radius = get_double(params, "radius", 1.0);
  const double margin = get_double(params, "margin", separable ? 0.0 : 0.1);
  const std::size_t smooth = get_size(params, "smooth", 1, 0);
  const double sigma = get_double(params, "sigma", 1.0);
  const double curvature = get_double(params, "curvature", 1.0);
  const double kappa = get_double(params, "kappa", 1.0);
  const double coupling = get_double(params, "coupling", 0.1);
  if (!(radius > 0.0)) throw ConfigError("parameter 'radius' must be positive");
  if (margin < 0.0 || sigma < 0.0 || curvature < 0.0 || kappa < 0.0 || coupling < 0.0)
    throw ConfigError("sdf_system: margin, sigma, curvature, kappa, coupling must be >= 0");
  if (smooth > m) throw ConfigError("parameter 'smooth' exceeds m");
  if (separable) {
    if (d < m) throw ConfigError("separable sdf_system needs dim >= m");
    if (margin > 0.0) throw ConfigError("separable sdf_system needs margin 0");
    for (std::size_t pl : p)
      if (pl < 2) throw ConfigError("separable sdf_system needs blocks of size >= 2");
  }
  if (std::accumulate(p.begin(), p.end(), std::size_t{0}) < 2)
    throw ConfigError("sdf_system: total block size must be >= 2");

  RandomStream rng(seed, kInstanceStream);
  SDFInstance sdf;
  sdf.dim = d;
  sdf.radius = radius;
  sdf.margin = margin;

  // x* uniform in the ball of radius R/2.
  sdf.x_star = random_unit(d, rng);
  const double rr = 0.5 * radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  for (auto& v : sdf.x_star) v *= rr;

  std::vector<std::vector<double>> g(m);
  if (separable) {
    for (std::size_t l = 0; l < m; ++l) {
      g[l].assign(d, 0.0);
      g[l][l] = 1.0;
    }
  } else {
    // Gradients at x* with zero mean, so 0 lies in their convex hull.
    std::vector<double> mean(d, 0.0);
    for (auto& gi : g) {
      gi = random_unit(d, rng);
      for (std::size_t i = 0; i < d; ++i) mean[i] += gi[i] / static_cast<double>(m);
    }
    double gmax = 0.0;
    for (auto& gi : g) {
      double n2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        gi[i] -= mean[i];
        n2 += gi[i] * gi[i];
      }
      gmax = std::max(gmax, std::sqrt(n2));
    }
    if (!(gmax > 0.0)) throw NumericalError("sdf_system: degenerate gradients");
    for (auto& gi : g)
      for (auto& v : gi) v /= gmax;
  }

  double xs2 = 0.0;
  for (double v : sdf.x_star) xs2 += v * v;

  for (std::size_t l = 0; l < m; ++l) {
    const std::size_t pl = p[l];
    const auto v = random_unit(pl, rng);
    // e: direction(s) carrying g.(x - x*); pd: where the curvature acts
    SymMatrix e = SymMatrix::outer(v);
    SymMatrix pd = e;
    if (separable) {
      auto u = random_unit(pl, rng);
      double dot = 0.0;
      for (std::size_t a = 0; a < pl; ++a) dot += u[a] * v[a];
      double n2 = 0.0;
      for (std::size_t a = 0; a < pl; ++a) n2 += (u[a] -= dot * v[a]) * u[a];
      if (!(n2 > 1e-12)) throw NumericalError("sdf_system: degenerate directions");
      for (auto& x : u) x /= std::sqrt(n2);
      const SymMatrix uu = SymMatrix::outer(u);
      e -= uu;
      pd += uu;
    }
    const SymMatrix perp = SymMatrix::identity(pl) - pd;
    const bool is_smooth = l < smooth;
    const double q = is_smooth ? curvature : 0.0;

    QuadraticComponent c;
    double gx = 0.0;
    for (std::size_t i = 0; i < d; ++i) gx += g[l][i] * sdf.x_star[i];
    c.c0 = -gx * e;
    c.c0.axpy(0.5 * q * xs2 - margin, pd);
    c.c0.axpy(-kappa - margin, perp);
    for (std::size_t i = 0; i < d; ++i) {
      SymMatrix s = random_symmetric(pl, rng, 1.0);
      // W = coupling * perp S perp
      SymMatrix w(pl);
      for (std::size_t a = 0; a < pl; ++a)
        for (std::size_t b = 0; b < pl; ++b) {
          double acc = 0.0;
          for (std::size_t r = 0; r < pl; ++r)
            for (std::size_t k = 0; k < pl; ++k) acc += perp(a, r) * s(r, k) * perp(k, b);
          w(a, b) = coupling * acc;
        }
      for (std::size_t a = 0; a < pl; ++a)
        for (std::size_t b = a + 1; b < pl; ++b) w(a, b) = w(b, a) = 0.5 * (w(a, b) + w(b, a));
      SymMatrix ci = g[l][i] * e;
      ci.axpy(-q * sdf.x_star[i], pd);
      ci += w;
      c.c0.axpy(-sdf.x_star[i], w);
      c.c.push_back(std::move(ci));
    }
    c.d = q * pd;

    double gb2 = 0.0;
    for (const auto& ci : c.c) {
      const double s = spectral_norm(ci);
      gb2 += s * s;
    }
    const double gb = std::sqrt(gb2);
    if (is_smooth) {
      const double dn = spectral_norm(c.d);
      c.lip_L = std::max(dn, (gb + radius * dn) / radius);
      c.noise_M = 0.0;
    } else {
      c.sigma_f = sigma * radius;
      c.sigma_g = sigma / std::sqrt(static_cast<double>(d));
      c.lip_L = 0.0;
      c.noise_M = std::max(sigma, gb);
    }
    sdf.components.push_back(std::move(c));
  }

  Instance inst;
  inst.kind = kind;
  inst.seed = seed;
  inst.params = params;
  inst.sdf = std::move(sdf);
  return inst;
}

// ----- JSON ---------------------------------------------------------------

json sym_to_json(const SymMatrix& m) {
  json a = json::array();
  for (double v : m.data()) a.push_back(v);
  return a;
}

SymMatrix sym_from_json(const json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n * n)
    throw InputError(what + ": expected " + std::to_string(n * n) + " entries");
  std::vector<double> rows;
  rows.reserve(n * n);
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(what + ": non-numeric entry");
    rows.push_back(v.get<double>());
  }
  return SymMatrix::from_rows(n, std::move(rows));
}

json sizes_to_json(const BlockStructure& s) { return json(s.sizes()); }

std::vector<double> doubles_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected a list");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(what + ": non-numeric entry");
    out.push_back(v.get<double>());
  }
  return out;
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("instance: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

// ----- quadratic components -------------------------------------------------

SymMatrix QuadraticComponent::value(const Vector& x) const {
  if (x.size() != c.size()) throw InputError("quadratic component: wrong x dimension");
  SymMatrix out = c0;
  double x2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.axpy(x[i], c[i]);
    x2 += x[i] * x[i];
  }
  out.axpy(0.5 * x2, d);
  return out;
}

std::vector<SymMatrix> QuadraticComponent::jacobian(const Vector& x) const {
  if (x.size() != c.size()) throw InputError("quadratic component: wrong x dimension");
  std::vector<SymMatrix> out = c;
  for (std::size_t i = 0; i < x.size(); ++i) out[i].axpy(x[i], d);
  return out;
}

BlockStructure SDFInstance::structure() const {
  std::vector<std::size_t> s;
  for (const auto& c : components) s.push_back(c.size());
  return BlockStructure(s);
}

SDFSystem sdf_system(const SDFInstance& inst) {
  SDFSystem sys;
  sys.x_setup = euclidean_ball(inst.dim, inst.radius);
  sys.subgaussian = true;  // bounded noise
  for (const auto& qc : inst.components) {
    SDFComponent c;
    c.lip_L = qc.lip_L;
    c.noise_M = qc.noise_M;
    c.fn.dim = qc.size();
    c.fn.value = [qc](const Vector& x) { return qc.value(x); };
    c.fn.jacobian = [qc](const Vector& x) { return qc.jacobian(x); };
    if (qc.sigma_f > 0.0 || qc.sigma_g > 0.0)
      c.fn.sample = [qc](const Vector& x, RandomStream& rng) {
        ComponentSample s{qc.value(x), qc.jacobian(x)};
        const std::size_t p = qc.size();
        const double e0 = rng.rademacher();
        for (std::size_t a = 0; a < p; ++a) s.f(a, a) += qc.sigma_f * e0;
        for (auto& j : s.jac) {
          const double e = rng.rademacher();
          for (std::size_t a = 0; a < p; ++a) j(a, a) += qc.sigma_g * e;
        }
        return s;
      };
    sys.components.push_back(std::move(c));
  }
  return sys;
}

std::vector<double> sdf_violations(const SDFInstance& inst, const Vector& x) {
  std::vector<double> out;
  for (const auto& c : inst.components) out.push_back(lambda_max(c.value(x)));
  return out;
}

double sdf_err_nash(const SDFInstance& inst, const std::vector<double>& beta, const Point& z) {
  if (beta.size() != inst.components.size()) throw InputError("sdf_err_nash: wrong beta size");
  if (z.arity() != 2) throw InputError("sdf_err_nash: expected (x, y)");
  const auto& x = z.vec(0);
  const auto& y = z.mat(1);
  if (y.num_blocks() != inst.components.size())
    throw InputError("sdf_err_nash: y has wrong block count");

  double primal = -std::numeric_limits<double>::infinity();
  double c = 0.0, a = 0.0;
  Vector b(inst.dim, 0.0);
  for (std::size_t l = 0; l < inst.components.size(); ++l) {
    const auto& qc = inst.components[l];
    primal = std::max(primal, beta[l] * lambda_max(qc.value(x)));
    const auto& yl = y.block(l);
    c += beta[l] * frob_inner(qc.c0, yl);
    for (std::size_t i = 0; i < inst.dim; ++i) b[i] += beta[l] * frob_inner(qc.c[i], yl);
    a += beta[l] * frob_inner(qc.d, yl);
  }
  a = std::max(a, 0.0);
  double bn = 0.0;
  for (double v : b) bn += v * v;
  bn = std::sqrt(bn);
  const double r = inst.radius;
  double dual;
  if (a <= 0.0)
    dual = c - r * bn;
  else if (bn / a <= r)
    dual = c - bn * bn / (2.0 * a);
  else
    dual = c - r * bn + 0.5 * a * r * r;
  return primal - dual;
}

// ----- generation and I/O ---------------------------------------------------

Instance generate_instance(const std::string& kind, const json& params, std::uint64_t seed) {
  const json p = params.is_null() ? json::object() : params;
  if (kind == "eig_min") return gen_eig(kind, p, seed, false);
  if (kind == "bilinear_simplex_spectahedron") return gen_eig(kind, p, seed, true);
  if (kind == "scalar_minimax") return gen_scalar(p, seed);
  if (kind == "sdf_system") return gen_sdf(p, seed);
  throw ConfigError("unknown instance kind '" + kind + "'");
}

json instance_to_json(const Instance& inst) {
  json j;
  j["format"] = "smpx-instance";
  j["version"] = 1;
  j["kind"] = inst.kind;
  j["seed"] = inst.seed;
  j["params"] = inst.params;
  if (inst.eig) {
    const auto& e = *inst.eig;
    j["noise"] = {{"model", inst.noise.model}, {"sigma", inst.noise.sigma}};
    json mats = json::array();
    for (const auto& m : e.matrices()) {
      json blocks = json::array();
      for (const auto& b : m.blocks()) blocks.push_back(sym_to_json(b));
      mats.push_back(std::move(blocks));
    }
    j["eig"] = {{"n", e.n()},
                {"blocks", sizes_to_json(e.structure())},
                {"a_inf", e.a_inf()},
                {"matrices", std::move(mats)}};
  }
  if (inst.sdf) {
    const auto& s = *inst.sdf;
    json comps = json::array();
    for (const auto& c : s.components) {
      json cs = json::array();
      for (const auto& m : c.c) cs.push_back(sym_to_json(m));
      comps.push_back({{"size", c.size()},
                       {"c0", sym_to_json(c.c0)},
                       {"c", std::move(cs)},
                       {"d", sym_to_json(c.d)},
                       {"sigma_f", c.sigma_f},
                       {"sigma_g", c.sigma_g},
                       {"lip_L", c.lip_L},
                       {"noise_M", c.noise_M}});
    }
    j["sdf"] = {{"dim", s.dim},
                {"radius", s.radius},
                {"margin", s.margin},
                {"x_star", s.x_star},
                {"components", std::move(comps)}};
  }
  return j;
}

Instance instance_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != "smpx-instance")
      throw InputError("not an smpx instance file");
    Instance inst;
    inst.kind = need(j, "kind").get<std::string>();
    inst.seed = need(j, "seed").get<std::uint64_t>();
    inst.params = j.value("params", json::object());
    if (j.contains("eig")) {
      const auto& e = j.at("eig");
      const auto sizes = need(e, "blocks").get<std::vector<std::size_t>>();
      BlockStructure s(sizes);
      std::vector<BlockSymMatrix> mats;
      for (const auto& m : need(e, "matrices")) {
        if (!m.is_array() || m.size() != sizes.size())
          throw InputError("instance: matrix has wrong block count");
        std::vector<SymMatrix> blocks;
        for (std::size_t l = 0; l < sizes.size(); ++l)
          blocks.push_back(sym_from_json(m[l], sizes[l], "instance matrix"));
        mats.emplace_back(s, std::move(blocks));
      }
      inst.eig.emplace(std::move(mats));
      if (j.contains("noise")) {
        inst.noise.model = j.at("noise").value("model", "xi");
        inst.noise.sigma = j.at("noise").value("sigma", 0.0);
      }
    }
    if (j.contains("sdf")) {
      const auto& s = j.at("sdf");
      SDFInstance sdf;
      sdf.dim = need(s, "dim").get<std::size_t>();
      sdf.radius = need(s, "radius").get<double>();
      sdf.margin = s.value("margin", 0.0);
      sdf.x_star = doubles_from_json(s.value("x_star", json::array()), "x_star");
      for (const auto& c : need(s, "components")) {
        QuadraticComponent qc;
        const std::size_t p = need(c, "size").get<std::size_t>();
        qc.c0 = sym_from_json(need(c, "c0"), p, "c0");
        for (const auto& m : need(c, "c")) qc.c.push_back(sym_from_json(m, p, "c"));
        if (qc.c.size() != sdf.dim) throw InputError("instance: component has wrong dimension");
        qc.d = sym_from_json(need(c, "d"), p, "d");
        qc.sigma_f = c.value("sigma_f", 0.0);
        qc.sigma_g = c.value("sigma_g", 0.0);
        qc.lip_L = need(c, "lip_L").get<double>();
        qc.noise_M = need(c, "noise_M").get<double>();
        sdf.components.push_back(std::move(qc));
      }
      inst.sdf = std::move(sdf);
    }
    if (!inst.eig && !inst.sdf) throw InputError("instance: no problem data");
    return inst;
  } catch (const json::exception& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << instance_to_json(inst).dump(1) << '\n';
  if (!f) throw IoError("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace smpx
