#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fepinn/features/feature_bank.hpp"
#include "fepinn/features/rbf.hpp"
#include "fepinn/features/rff.hpp"
#include "fepinn/model/activation.hpp"
#include "fepinn/pde/problem.hpp"

namespace fepinn {

/// Solver families benchmarked by the suite.
enum class Method { PINN, FLS, WPINN, RBA, RFF, RBF, RBFP, SAFENET };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

/// Named head architectures (the RBF families use no neural head; their
/// output is the kernel expansion plus an optional polynomial tail).
enum class Arch { SafeNet, Mlp4x50, Fls4x50, Mlp6x50, KernelExpansion };

enum class FrontendKind { Identity, SafeNet, FourierEmbed, Rff, Rbf };
enum class HeadKind { Mlp, Linear, KernelSum };

enum class FreqInit { Harmonic, Gaussian, Uniform };
enum class CoeffInit { Unit, Gaussian, Uniform, Xavier };

/// Tunable knobs shared by model construction; defaults reproduce each
/// method's reference configuration.
struct ModelOptions {
  int n_features = 128;  // total feature budget (meaning is method-specific)
  int depth = -1;        // hidden layers; -1 selects the method default
  int width = 50;
  Activation act = Activation::Tanh;
  bool normalize = true;  // centered-L2 feature normalization (SAFENET)
  bool use_dkf = true;    // append domain features (SAFENET)
  FreqInit freq_init = FreqInit::Harmonic;
  CoeffInit coeff_init = CoeffInit::Unit;
};

/// Complete static description of a model: frontend feature map, optional
/// normalization, and head. Frozen random tensors (RFF projection, RBF
/// centers) are stored here; trainable values live in the flat parameter
/// vector whose layout is derived from this struct.
struct ModelSpec {
  Method method = Method::PINN;
  FrontendKind frontend = FrontendKind::Identity;
  HeadKind head = HeadKind::Mlp;
  int space_dim = 1;

  FeatureBank bank;  // SafeNet frontend (also holds initial freq/coeff values)
  RffMap rff;
  RbfMap rbf;

  // Periodic Fourier input embedding (1D): [1, cos(k w x), sin(k w x)]_{k<=modes}
  // plus raw t. Inactive (raw coordinates) when fe_omega == 0.
  int fe_modes = 5;
  double fe_omega = 0.0;

  int depth = 4;  // hidden layers (0 = linear head)
  int width = 50;
  Activation act = Activation::Tanh;
  Activation first_act = Activation::Tanh;

  int in_dim() const { return space_dim + 1; }
  /// Width of the feature vector entering the head.
  int feature_width() const;
  Arch arch() const;
  /// Stable textual description; hashed into checkpoints.
  std::string describe() const;
};

/// Builds the reference model for a (method, problem) pair.
ModelSpec make_model_spec(Method method, const PdeProblem& problem, const ModelOptions& opt,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Flat parameter vector layout.
// ---------------------------------------------------------------------------

struct ParamSegment {
  std::string name;
  int offset = 0;
  int size = 0;
};

struct ParamLayout {
  std::vector<ParamSegment> segments;
  int total = 0;

  bool has(const std::string& name) const;
  const ParamSegment& at(const std::string& name) const;  // throws ConfigError
  int offset(const std::string& name) const { return at(name).offset; }
  int size(const std::string& name) const { return at(name).size; }
};

/// Segment order: feature-frequencies, feature-coeffs, rbf-weights,
/// rbf-poly-weights, then W1,b1,...,w_out,b_out. Only segments the
/// architecture uses are present; spans partition [0, total) exactly.
ParamLayout make_layout(const ModelSpec& spec);

/// Initial parameter vector. MLP weights are Xavier-uniform (biases zero);
/// a sine first layer uses U(-1/fan_in, 1/fan_in); SafeNet frequencies and
/// amplitudes follow the chosen strategies (harmonic / unit by default);
/// kernel and polynomial weights start at 1.
std::vector<double> init_params(const ModelSpec& spec, std::uint64_t seed,
                                FreqInit freq_init = FreqInit::Harmonic,
                                CoeffInit coeff_init = CoeffInit::Unit);

// ---------------------------------------------------------------------------
// Checkpoints: header (architecture tag, spec hash, seed, count) + packed
// little-endian 64-bit reals.
// ---------------------------------------------------------------------------

void save_checkpoint(const std::string& path, const ModelSpec& spec, std::uint64_t seed,
                     const std::vector<double>& params);
std::vector<double> load_checkpoint(const std::string& path, const ModelSpec& spec,
                                    std::uint64_t* seed_out = nullptr);
/// Seed recorded in a checkpoint header (needed to rebuild frozen tensors
/// before the full load can be validated).
std::uint64_t checkpoint_seed(const std::string& path);

}  // namespace fepinn
