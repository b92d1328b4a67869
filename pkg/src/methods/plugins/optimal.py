"""
Optimal MVDR: true IPNCM and true desired steering vector of the trial.
Upper bound for every other method; simulation only.
"""
from src.beamformer import BeamformerWeights, mvdr_weights
from src.errors import ConfigurationError
from src.methods.interface import BeamformerMethod, TrialContext


class OptimalMethod(BeamformerMethod):
    @property
    def method_id(self) -> str:
        return "optimal"

    def weights(self, ctx: TrialContext) -> BeamformerWeights:
        if not ctx.has_truth:
            raise ConfigurationError("optimal weights need the simulation ground truth")
        return mvdr_weights(ctx.true_ipncm, ctx.realization.desired_sv, label=self.method_id)


plugin = OptimalMethod()
