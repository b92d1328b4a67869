"""
URGLQ: signal removal, quadrature reconstruction and steering correction.
UrglqMethod also backs urglq_uncorrected and the riemann:L variants of glq-compare.
"""
import dataclasses

from src.beamformer import BeamformerWeights, urglq_weights
from src.methods.interface import BeamformerMethod, TrialContext
from src.reconstruction import ReconstructionMethod


class UrglqMethod(BeamformerMethod):
    def __init__(
        self,
        method_id: str = "urglq",
        correction: bool | None = None,
        reconstruction: ReconstructionMethod | None = None,
    ):
        self._method_id = method_id
        self.correction = correction
        self.reconstruction = reconstruction

    @property
    def method_id(self) -> str:
        return self._method_id

    def weights(self, ctx: TrialContext) -> BeamformerWeights:
        config = ctx.pipeline
        if self.correction is not None:
            config = dataclasses.replace(config, correction=self.correction)
        if self.reconstruction is not None:
            config = dataclasses.replace(config, reconstruction=self.reconstruction)
        return urglq_weights(
            ctx.snapshots,
            ctx.geometry,
            ctx.desired_doa,
            ctx.interference_doas,
            config,
            label=self.method_id,
        )


plugin = UrglqMethod()
