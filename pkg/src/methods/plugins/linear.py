"""LINEAR: Riemann-sum IPNCM over the sectors of the raw SCM, L from the scenario."""
from src.beamformer import BeamformerWeights, linear_baseline_weights
from src.methods.interface import BeamformerMethod, TrialContext


class LinearMethod(BeamformerMethod):
    @property
    def method_id(self) -> str:
        return "linear"

    def weights(self, ctx: TrialContext) -> BeamformerWeights:
        return linear_baseline_weights(
            ctx.snapshots,
            ctx.geometry,
            ctx.desired_doa,
            ctx.interference_doas,
            L=ctx.num_discretizations,
            half_width=ctx.pipeline.half_width,
            noise_floor=ctx.pipeline.noise_floor,
        )


plugin = LinearMethod()
