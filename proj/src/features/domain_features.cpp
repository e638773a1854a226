#include "fepinn/features/domain_features.hpp"

namespace fepinn {

const std::vector<DomainFeatureId>& dkf_list(ProblemId id) {
  using F = DomainFeatureId;
  static const std::vector<F> wave{F::WaveSinPiX, F::WaveSin4PiX};
  static const std::vector<F> reaction{F::ReactionGaussian};
  static const std::vector<F> convection{F::ConvectionSinX};
  static const std::vector<F> heat2d{F::Heat2dSin20PiX, F::Heat2dSinPiY, F::Heat2dProduct};
  static const std::vector<F> burgers{F::BurgersNegSinPiX};
  static const std::vector<F> diffusion{F::DiffusionSinPiX};
  static const std::vector<F> allencahn{F::AllenCahnX2, F::AllenCahnCosPiX,
                                        F::AllenCahnX2CosPiX};
  static const std::vector<F> nhheat{F::NhHeatSin2PiX, F::NhHeatX};
  switch (id) {
    case ProblemId::Wave: return wave;
    case ProblemId::Reaction: return reaction;
    case ProblemId::Convection: return convection;
    case ProblemId::Heat2D: return heat2d;
    case ProblemId::Burgers: return burgers;
    case ProblemId::Diffusion: return diffusion;
    case ProblemId::AllenCahn: return allencahn;
    case ProblemId::NonHomogHeat: return nhheat;
  }
  static const std::vector<F> empty;
  return empty;
}

std::vector<double> dkf_features(ProblemId id, double x, double y, double /*t*/) {
  const auto& list = dkf_list(id);
  std::vector<double> out;
  out.reserve(list.size());
  for (DomainFeatureId f : list) out.push_back(dkf_jet<double, AxesVal>(f, x, y).c[0]);
  return out;
}

}  // namespace fepinn
