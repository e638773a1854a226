#include "fepinn/model/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fepinn/core/errors.hpp"
#include "fepinn/core/rng.hpp"

namespace fepinn {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::PINN: return "PINN";
    case Method::FLS: return "FLS";
    case Method::WPINN: return "WPINN";
    case Method::RBA: return "RBA";
    case Method::RFF: return "RFF";
    case Method::RBF: return "RBF";
    case Method::RBFP: return "RBFP";
    case Method::SAFENET: return "SAFENET";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::PINN, Method::FLS, Method::WPINN, Method::RBA, Method::RFF,
                   Method::RBF, Method::RBFP, Method::SAFENET})
    if (s == to_string(m)) return m;
  throw ConfigError("unknown method '" + s + "'");
}

int ModelSpec::feature_width() const {
  switch (frontend) {
    case FrontendKind::Identity: return in_dim();
    case FrontendKind::SafeNet: return bank.width();
    case FrontendKind::FourierEmbed:
      return fe_omega != 0.0 ? 2 + 2 * fe_modes : in_dim();
    case FrontendKind::Rff: return rff.width();
    case FrontendKind::Rbf: return 1 + rbf.n_poly();
  }
  return 0;
}

Arch ModelSpec::arch() const {
  switch (method) {
    case Method::SAFENET: return Arch::SafeNet;
    case Method::FLS: return Arch::Fls4x50;
    case Method::RBA: return Arch::Mlp6x50;
    case Method::RBF:
    case Method::RBFP: return Arch::KernelExpansion;
    default: return Arch::Mlp4x50;
  }
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os << to_string(method) << "|sd=" << space_dim;
  switch (frontend) {
    case FrontendKind::Identity: os << "|id"; break;
    case FrontendKind::SafeNet:
      os << "|sf:N=" << bank.n_sets << ",dkf=" << bank.dkf.size()
         << ",norm=" << (bank.normalize ? 1 : 0);
      break;
    case FrontendKind::FourierEmbed: os << "|fe:m=" << fe_modes << ",w=" << fe_omega; break;
    case FrontendKind::Rff: os << "|rff:m=" << rff.m; break;
    case FrontendKind::Rbf: os << "|rbf:m=" << rbf.m << ",poly=" << rbf.poly_order; break;
  }
  os << "|head=" << static_cast<int>(head) << ",depth=" << depth << ",width=" << width
     << ",act=" << to_string(act) << "/" << to_string(first_act) << "|F=" << feature_width();
  return os.str();
}

ModelSpec make_model_spec(Method method, const PdeProblem& problem, const ModelOptions& opt,
                          std::uint64_t seed) {
  ModelSpec s;
  s.method = method;
  s.space_dim = problem.box.space_dim;
  s.width = opt.width;
  s.act = opt.act;
  s.first_act = opt.act;
  int def_depth = 4;
  switch (method) {
    case Method::PINN:
    case Method::WPINN:
      s.frontend = FrontendKind::Identity;
      break;
    case Method::FLS:
      s.frontend = FrontendKind::Identity;
      s.first_act = Activation::Sine;
      break;
    case Method::RBA:
      def_depth = 6;
      if (problem.periodic && s.space_dim == 1) {
        s.frontend = FrontendKind::FourierEmbed;
        s.fe_omega = kTwoPi / (problem.box.x_hi - problem.box.x_lo);
      } else {
        s.frontend = FrontendKind::Identity;
      }
      break;
    case Method::RFF:
      s.frontend = FrontendKind::Rff;
      s.rff = make_rff_map(opt.n_features / 2, s.space_dim, seed);
      break;
    case Method::RBF:
    case Method::RBFP:
      s.frontend = FrontendKind::Rbf;
      s.head = HeadKind::KernelSum;
      s.rbf = make_rbf_map(opt.n_features, s.space_dim, method == Method::RBFP ? 2 : 0, seed);
      def_depth = 0;
      break;
    case Method::SAFENET: {
      s.frontend = FrontendKind::SafeNet;
      def_depth = 1;
      const int combos = 1 << (s.space_dim + 1);
      const int n_sets = std::max(1, opt.n_features / combos);
      s.bank = make_feature_bank(problem, n_sets, opt.normalize, opt.use_dkf);
      break;
    }
  }
  s.depth = opt.depth >= 0 ? opt.depth : def_depth;
  if (method != Method::RBF && method != Method::RBFP)
    s.head = s.depth == 0 ? HeadKind::Linear : HeadKind::Mlp;
  return s;
}

// ---------------------------------------------------------------------------
// Layout.
// ---------------------------------------------------------------------------

bool ParamLayout::has(const std::string& name) const {
  for (const auto& s : segments)
    if (s.name == name) return true;
  return false;
}

const ParamSegment& ParamLayout::at(const std::string& name) const {
  for (const auto& s : segments)
    if (s.name == name) return s;
  throw ConfigError("parameter segment '" + name + "' not present in this architecture");
}

ParamLayout make_layout(const ModelSpec& spec) {
  ParamLayout layout;
  int off = 0;
  auto add = [&](const std::string& name, int size) {
    if (size <= 0) return;
    layout.segments.push_back({name, off, size});
    off += size;
  };
  if (spec.frontend == FrontendKind::SafeNet) {
    add("feature-frequencies", spec.bank.n_freq_axes() * spec.bank.n_sets);
    add("feature-coeffs", spec.bank.n_combos() * spec.bank.n_sets);
  }
  if (spec.frontend == FrontendKind::Rbf) {
    add("rbf-weights", spec.rbf.m);
    add("rbf-poly-weights", spec.rbf.n_poly());
  }
  if (spec.head == HeadKind::Mlp) {
    int fan_in = spec.feature_width();
    for (int k = 1; k <= spec.depth; ++k) {
      add("W" + std::to_string(k), spec.width * fan_in);
      add("b" + std::to_string(k), spec.width);
      fan_in = spec.width;
    }
    add("w_out", fan_in);
    add("b_out", 1);
  } else if (spec.head == HeadKind::Linear) {
    add("w_out", spec.feature_width());
    add("b_out", 1);
  }
  layout.total = off;
  return layout;
}

// ---------------------------------------------------------------------------
// Initialization.
// ---------------------------------------------------------------------------

std::vector<double> init_params(const ModelSpec& spec, std::uint64_t seed, FreqInit freq_init,
                                CoeffInit coeff_init) {
  const ParamLayout layout = make_layout(spec);
  std::vector<double> p(static_cast<size_t>(layout.total), 0.0);
  Rng rng(derive_seed(seed, "init"));

  if (spec.frontend == FrontendKind::SafeNet) {
    const int n = spec.bank.n_sets;
    double* freq = p.data() + layout.offset("feature-frequencies");
    switch (freq_init) {
      case FreqInit::Harmonic: {
        int k = 0;
        for (int l = 0; l < n; ++l) freq[k++] = spec.bank.omega_x[l];
        if (spec.space_dim == 2)
          for (int l = 0; l < n; ++l) freq[k++] = spec.bank.omega_y[l];
        for (int l = 0; l < n; ++l) freq[k++] = spec.bank.lambda_t[l];
        break;
      }
      case FreqInit::Gaussian:
        for (int i = 0; i < layout.size("feature-frequencies"); ++i) freq[i] = rng.normal();
        break;
      case FreqInit::Uniform:
        for (int i = 0; i < layout.size("feature-frequencies"); ++i)
          freq[i] = rng.uniform(0.0, 1.0);
        break;
    }
    double* coeff = p.data() + layout.offset("feature-coeffs");
    const int nc = layout.size("feature-coeffs");
    switch (coeff_init) {
      case CoeffInit::Unit:
        for (int i = 0; i < nc; ++i) coeff[i] = 1.0;
        break;
      case CoeffInit::Gaussian:
        for (int i = 0; i < nc; ++i) coeff[i] = rng.normal();
        break;
      case CoeffInit::Uniform:
        for (int i = 0; i < nc; ++i) coeff[i] = rng.uniform(-1.0, 1.0);
        break;
      case CoeffInit::Xavier: {
        // Amplitudes sit in front of the first affine layer: use its fans.
        const double bound = std::sqrt(6.0 / (spec.bank.width() + spec.width));
        for (int i = 0; i < nc; ++i) coeff[i] = rng.uniform(-bound, bound);
        break;
      }
    }
  }
  if (spec.frontend == FrontendKind::Rbf) {
    double* w = p.data() + layout.offset("rbf-weights");
    for (int i = 0; i < spec.rbf.m; ++i) w[i] = 1.0;
    if (layout.has("rbf-poly-weights")) {
      double* pw = p.data() + layout.offset("rbf-poly-weights");
      for (int i = 0; i < spec.rbf.n_poly(); ++i) pw[i] = 1.0;
    }
  }

  auto fill_layer = [&](const std::string& name, int fan_in, int fan_out, bool sine_layer) {
    if (!layout.has(name)) return;
    double* w = p.data() + layout.offset(name);
    const int size = layout.size(name);
    const double bound =
        sine_layer ? 1.0 / fan_in : std::sqrt(6.0 / (static_cast<double>(fan_in) + fan_out));
    for (int i = 0; i < size; ++i) w[i] = rng.uniform(-bound, bound);
  };
  if (spec.head == HeadKind::Mlp) {
    int fan_in = spec.feature_width();
    for (int k = 1; k <= spec.depth; ++k) {
      fill_layer("W" + std::to_string(k), fan_in, spec.width,
                 k == 1 && spec.first_act == Activation::Sine);
      fan_in = spec.width;
    }
    fill_layer("w_out", fan_in, 1, false);
  } else if (spec.head == HeadKind::Linear) {
    fill_layer("w_out", spec.feature_width(), 1, false);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Checkpoints.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'F', 'E', 'P', 'N', 'C', 'K', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelSpec& spec, std::uint64_t seed,
                     const std::vector<double>& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open checkpoint for writing: " + path);
  os.write(kMagic, 8);
  put_u64(os, static_cast<std::uint64_t>(spec.arch()));
  put_u64(os, fnv1a64(spec.describe()));
  put_u64(os, seed);
  put_u64(os, params.size());
  for (double x : params) put_u64(os, std::bit_cast<std::uint64_t>(x));
  if (!os) throw ConfigError("short write on checkpoint: " + path);
}

std::vector<double> load_checkpoint(const std::string& path, const ModelSpec& spec,
                                    std::uint64_t* seed_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw ConfigError("not a checkpoint file: " + path);
  const auto arch = get_u64(is);
  const auto hash = get_u64(is);
  const auto seed = get_u64(is);
  const auto count = get_u64(is);
  if (arch != static_cast<std::uint64_t>(spec.arch()) || hash != fnv1a64(spec.describe()))
    throw ConfigError("checkpoint was written for a different model: " + path);
  const ParamLayout layout = make_layout(spec);
  if (count != static_cast<std::uint64_t>(layout.total))
    throw ConfigError("checkpoint parameter count mismatch: " + path);
  std::vector<double> p(count);
  for (auto& x : p) x = std::bit_cast<double>(get_u64(is));
  if (!is) throw ConfigError("short read on checkpoint: " + path);
  if (seed_out) *seed_out = seed;
  return p;
}

std::uint64_t checkpoint_seed(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw ConfigError("not a checkpoint file: " + path);
  get_u64(is);  // arch
  get_u64(is);  // spec hash
  const std::uint64_t seed = get_u64(is);
  if (!is) throw ConfigError("short read on checkpoint: " + path);
  return seed;
}

}  // namespace fepinn
