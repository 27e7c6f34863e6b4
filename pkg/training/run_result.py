from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class RunResult(BaseModel):
    """Outcome of one training run; the unit record of every study."""

    model_name: str = Field(..., description="Preset name, e.g. 'dag-a'")
    study: str = Field("single", description="'single', 'seed' or 'split'")
    seed: int
    split_id: str
    best_epoch: int = Field(..., ge=1)
    epochs_run: int = Field(..., ge=1)
    dev_f1: float = Field(..., ge=0.0, le=1.0)
    test_f1: float = Field(..., ge=0.0, le=1.0)
    test_precision: float = Field(0.0, ge=0.0, le=1.0)
    test_recall: float = Field(0.0, ge=0.0, le=1.0)
    domain_test_f1: Dict[str, float] = Field(default_factory=dict)
    n_parameters: int = Field(0, ge=0)
    loss_trace: List[float] = Field(default_factory=list, description="Mean token loss per epoch")
    dev_f1_trace: List[float] = Field(default_factory=list)
    grad_norm_trace: List[float] = Field(default_factory=list, description="Last-batch gradient norm per epoch")
    checkpoint_path: Optional[str] = None

    @model_validator(mode="after")
    def _epochs_consistent(self) -> "RunResult":
        if self.best_epoch > self.epochs_run:
            raise ValueError(f"best_epoch {self.best_epoch} > epochs_run {self.epochs_run}")
        return self
