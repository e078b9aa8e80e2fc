"""Spectrogram enhancement network for radio-acoustic sound recovery.

Trains an encoder/residual/decoder network on degraded/clean patch
shards and runs it over recovered recordings to denoise them and expand
their bandwidth.  The package touches the recovery toolchain only
through its file formats: RSPG tensor shards in, WAV audio in and out.
"""

from .audio import AudioSignal, load_wav, save_wav
from .checkpoint import load_checkpoint, save_checkpoint
from .data import expand_shards, load_pairs
from .enhance import TARGET_RATE, enhance
from .errors import FormatError, ParameterError, RanetError
from .model import Ranet, RanetSpec
from .rspg import load_pair_shard, load_tensor, save_pair_shard, save_tensor
from .train import TrainConfig, TrainResult, center_crop, train

__version__ = "0.1.0"

__all__ = [
    "AudioSignal",
    "FormatError",
    "ParameterError",
    "Ranet",
    "RanetError",
    "RanetSpec",
    "TARGET_RATE",
    "TrainConfig",
    "TrainResult",
    "center_crop",
    "enhance",
    "expand_shards",
    "load_checkpoint",
    "load_pair_shard",
    "load_pairs",
    "load_tensor",
    "load_wav",
    "save_checkpoint",
    "save_pair_shard",
    "save_tensor",
    "save_wav",
    "train",
    "__version__",
]
