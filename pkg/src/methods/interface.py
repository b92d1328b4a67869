"""
Method layer: abstract interface and plugin registry.
Every beamforming method implements BeamformerMethod and is loaded by id from the
scenario's `methods` list (module src.methods.plugins.<id>, exporting `plugin`).
"""
import importlib
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from src.array_model import ArrayGeometry, MismatchRealization, SnapshotMatrix, steering_vector
from src.beamformer import BeamformerWeights, PipelineConfig
from src.covariance import HermitianMatrix
from src.errors import ConfigurationError

logger = logging.getLogger(__name__)

# Registry: method_id -> loaded plugin instance
_methods: dict[str, "BeamformerMethod"] = {}


@dataclass(frozen=True)
class TrialContext:
    """
    Everything a method may look at for one trial. Presumed DOAs are what the
    beamformer believes; truth (realization, true_ipncm) is None for recorded data.
    """
    geometry: ArrayGeometry
    snapshots: SnapshotMatrix = field(repr=False)
    desired_doa: float
    interference_doas: tuple[float, ...]
    pipeline: PipelineConfig = PipelineConfig()
    num_discretizations: int = 20
    realization: MismatchRealization | None = None
    true_ipncm: HermitianMatrix | None = field(default=None, repr=False)

    @property
    def has_truth(self) -> bool:
        return self.realization is not None and self.true_ipncm is not None

    @property
    def presumed_steering(self) -> np.ndarray:
        return steering_vector(self.geometry, self.desired_doa)


class BeamformerMethod(ABC):
    """Abstract interface for a beamformer: trial context in, weights out."""

    @property
    @abstractmethod
    def method_id(self) -> str:
        """Unique id used in config and CSV output, e.g. 'urglq', 'smi'."""
        pass

    @abstractmethod
    def weights(self, ctx: TrialContext) -> BeamformerWeights:
        pass


def register_method(method: BeamformerMethod) -> None:
    if not isinstance(method, BeamformerMethod):
        raise TypeError(f"{method} must implement BeamformerMethod")
    _methods[method.method_id] = method
    logger.debug("Registered method: %s", method.method_id)


def get_method(method_id: str) -> BeamformerMethod:
    method = _methods.get(method_id)
    if method is None:
        method = load_methods_from_config([method_id])[0]
    return method


def load_methods_from_config(method_ids: list[str]) -> list[BeamformerMethod]:
    """Load methods by id list; unknown ids are configuration errors, not skipped."""
    loaded = []
    for mid in method_ids or []:
        if mid in _methods:
            loaded.append(_methods[mid])
            continue
        try:
            mod = importlib.import_module(f"src.methods.plugins.{mid}")
        except ModuleNotFoundError as e:
            raise ConfigurationError(f"unknown method: {mid!r}") from e
        plugin = getattr(mod, "plugin", None)
        if plugin is None:
            raise ConfigurationError(f"method module {mid!r} has no 'plugin' export")
        if not isinstance(plugin, BeamformerMethod):
            raise ConfigurationError(f"method {mid!r} export is not a BeamformerMethod")
        register_method(plugin)
        loaded.append(plugin)
        logger.debug("Loaded method plugin: %s", mid)
    return loaded


def list_registered_ids() -> list[str]:
    return list(_methods.keys())
