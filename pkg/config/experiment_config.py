"""
Model, training and study hyperparameters.

Defaults reproduce the published protocol: Adam with L2 0.0001, learning rate
0.0005 halved every five epochs, at most 30 epochs, hidden size 128, dropout
0.5, 20 seeds, 10 random splits of 529/30/40 documents, best-of-5 bootstrap
repeated 1000 times.
"""

from typing import Dict, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class ModelConfig(BaseModel):
    """Architecture of one event detector."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    hidden_size: int = Field(128, ge=1, description="GRU hidden state size")
    edge_dim: int = Field(32, ge=1, description="Edge-type embedding size")
    variant: Literal["A", "B", "per-edge"] = Field(
        "A", description="A: attention, B: averaging, per-edge: one U_e per edge type with attention")
    dropout_rate: float = Field(0.5, ge=0.0, lt=1.0, description="Dropout on the concatenated states")
    mode: Literal["dag", "plain-bigru"] = Field("dag", description="DAG-GRU or sequential BiGRU baseline")


class TrainConfig(BaseModel):
    """Optimisation settings for a single run."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    lr0: float = Field(0.0005, gt=0.0, description="Initial learning rate")
    halve_every: int = Field(5, ge=1, description="Epochs between learning-rate halvings")
    max_epochs: int = Field(30, ge=1)
    l2: float = Field(0.0001, ge=0.0, description="L2 penalty added to the gradient")
    patience: int = Field(5, ge=1, description="Epochs without dev-F1 gain before stopping")
    batch_size: int = Field(8, ge=1, description="Sentences per Adam step")
    seed: int = Field(1, ge=0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    eps: float = Field(1e-8, gt=0.0)


class StudyConfig(BaseModel):
    """Sizes of the variance studies."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_seeds: int = Field(20, ge=2)
    n_splits: int = Field(10, ge=1)
    counts: Tuple[int, int, int] = Field((529, 30, 40), description="train/dev/test documents per random split")
    bootstrap_k: int = Field(5, ge=1)
    bootstrap_reps: int = Field(1000, ge=1)
    bootstrap_seed: int = Field(0, ge=0)
    jobs: int = Field(1, ge=1, description="Concurrent training runs")

    @field_validator("counts")
    @classmethod
    def _non_negative(cls, value: Tuple[int, int, int]) -> Tuple[int, int, int]:
        if min(value) < 0 or value[0] < 1:
            raise ValueError(f"counts need >= 1 training document and no negatives, got {value}")
        return value


MODEL_PRESETS: Dict[str, Dict[str, str]] = {
    "dag-a": {"mode": "dag", "variant": "A"},
    "dag-b": {"mode": "dag", "variant": "B"},
    "dag-ue": {"mode": "dag", "variant": "per-edge"},
    "gru": {"mode": "plain-bigru", "variant": "A"},
}

DISPLAY_NAMES: Dict[str, str] = {
    "dag-a": "DAG-GRU A",
    "dag-b": "DAG-GRU B",
    "dag-ue": "DAG-GRU U_e",
    "gru": "GRU",
}


def model_preset(name: str, **overrides) -> ModelConfig:
    """ModelConfig for a preset name, with size/dropout overrides."""
    if name not in MODEL_PRESETS:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(MODEL_PRESETS)}")
    return ModelConfig(**{**overrides, **MODEL_PRESETS[name]})


def display_name(name: str) -> str:
    return DISPLAY_NAMES.get(name, name)
