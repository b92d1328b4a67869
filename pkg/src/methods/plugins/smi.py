"""SMI: MVDR on the sample covariance (desired signal included) with the presumed a0."""
from src.beamformer import BeamformerWeights, smi_weights
from src.methods.interface import BeamformerMethod, TrialContext


class SmiMethod(BeamformerMethod):
    @property
    def method_id(self) -> str:
        return "smi"

    def weights(self, ctx: TrialContext) -> BeamformerWeights:
        return smi_weights(ctx.snapshots, ctx.presumed_steering)


plugin = SmiMethod()
