from .experiment_config import (
    DISPLAY_NAMES, MODEL_PRESETS, ModelConfig, StudyConfig, TrainConfig, display_name, model_preset,
)
from .runtime_config import RuntimeConfig, runtime_config

__all__ = [
    'ModelConfig', 'TrainConfig', 'StudyConfig', 'MODEL_PRESETS', 'DISPLAY_NAMES',
    'model_preset', 'display_name', 'RuntimeConfig', 'runtime_config',
]
