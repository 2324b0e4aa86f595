"""Model architecture descriptions."""

from __future__ import annotations

from dataclasses import dataclass, fields

from ..config import ScenarioConfig
from ..errors import ConfigurationError

ARCHS = ("bilstm-gru", "lstm", "dnn")


@dataclass(frozen=True)
class ModelSpec:
    """Shape of one estimator network.

    Recurrent architectures consume the feature vector as a sequence of
    ``seq_len`` timesteps with one feature each, and a single shared output
    neuron is applied per timestep, so they require
    ``output_dim == seq_len`` (i.e. as many pilots as antennas).  The DNN maps
    the flat feature vector through ``dnn_hidden`` tanh layers and has no such
    restriction.
    """

    arch: str
    seq_len: int
    output_dim: int
    hidden_units: int = 16
    features_per_step: int = 1
    dnn_hidden: tuple[int, ...] = (64, 64)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dnn_hidden", tuple(int(w) for w in self.dnn_hidden))
        if self.arch not in ARCHS:
            raise ConfigurationError(f"unknown arch {self.arch!r}; choose from {ARCHS}")
        if self.seq_len < 1 or self.output_dim < 1:
            raise ConfigurationError("seq_len and output_dim must be >= 1")
        if self.hidden_units < 1:
            raise ConfigurationError("hidden_units must be >= 1")
        if self.features_per_step != 1:
            raise ConfigurationError("only one feature per timestep is supported")
        if self.arch != "dnn" and self.output_dim != self.seq_len:
            raise ConfigurationError(
                "recurrent architectures emit one value per timestep; "
                f"output_dim ({self.output_dim}) must equal seq_len ({self.seq_len})"
            )
        if any(w < 1 for w in self.dnn_hidden):
            raise ConfigurationError("dnn_hidden widths must be >= 1")

    @classmethod
    def for_scenario(
        cls,
        cfg: ScenarioConfig,
        arch: str,
        hidden_units: int | None = None,
        dnn_hidden: tuple[int, ...] | None = None,
    ) -> "ModelSpec":
        """Spec matching a scenario: 2M input features, 2N outputs, width N."""
        hidden = int(hidden_units) if hidden_units is not None else cfg.num_antennas
        kwargs = {}
        if dnn_hidden is not None:
            kwargs["dnn_hidden"] = tuple(dnn_hidden)
        return cls(
            arch=arch,
            seq_len=2 * cfg.num_pilots,
            output_dim=2 * cfg.num_antennas,
            hidden_units=hidden,
            **kwargs,
        )

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        data = dict(data)
        data["dnn_hidden"] = tuple(data.get("dnn_hidden", ()))
        return cls(**data)
