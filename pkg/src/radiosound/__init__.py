"""Sound sensing over mmWave channel impulse response streams.

The pipeline: :func:`simulate` renders a scene description into a complex CIR
tensor, :func:`range_doppler` turns it into a per-bin spectrogram,
:mod:`radiosound.detect` flags sound-bearing cells, :mod:`radiosound.recover`
rebuilds audible waveforms from the flagged bins, and
:mod:`radiosound.metrics` scores the result against a reference.
:mod:`radiosound.synth` produces degraded/clean spectrogram pairs for
training downstream enhancement models.
"""

from .errors import (
    DegenerateInputError,
    FormatError,
    ParameterError,
    RadioSoundError,
    UnsupportedFormatError,
)
from .types import (
    AudioSignal,
    ChannelResponse,
    CirFrameSeries,
    DisplacementSignal,
    RadarParams,
    RangeDopplerSpectrogram,
    SPEED_OF_LIGHT,
)
from .rng import make_rng
from .wavio import load_wav, save_wav
from .tensorfile import load_cir, load_tensor, save_cir, save_tensor
from .resample import resample, resample_array
from .channel import apply_zero_phase, realize_fir
from .scene import (
    DEFAULT_CHANNEL,
    MotionInterferer,
    MultipathSpec,
    SceneDescription,
    StaticReflector,
    VibrationSource,
    load_scene,
)
from .simulate import (
    demodulate_phase,
    estimate_displacement,
    simulate,
    synthesize_displacement,
)
from .spectral import (
    StftConfig,
    expand_one_sided,
    istft,
    one_sided_magnitude,
    range_doppler,
    stft,
)
from .detect import (
    DetectionConfig,
    DetectionResult,
    SoundMetricMap,
    auc,
    cfar_scores,
    detect_cfar,
    detect_hhi,
    detect_outlier,
    detect_radiomic,
    detect_threshold,
    doppler_energy,
    hhi_scores,
    LIVENESS_THRESHOLD,
    liveness_score,
    load_detection,
    noise_floor,
    outlier_scores,
    result_from_json,
    result_to_json,
    roc_curve,
    sound_metric,
)
from .recover import (
    COMBINE_COMPLEX_HALVES,
    COMBINE_PROJECTED,
    ProjectionResult,
    RecoverConfig,
    RecoveredSound,
    combine_diversity,
    highpass,
    project_line,
    recover_bin,
    separate_sources,
)
from .metrics import EvalReport, evaluate, llr, snr_silent, stoi
from .synth import (
    SynthConfig,
    TrainingPair,
    degrade,
    load_shard,
    make_pairs,
    patch_from_samples,
    patch_to_magnitude,
    write_shards,
)

__version__ = "0.1.0"

__all__ = [
    "AudioSignal",
    "ChannelResponse",
    "CirFrameSeries",
    "COMBINE_COMPLEX_HALVES",
    "COMBINE_PROJECTED",
    "DEFAULT_CHANNEL",
    "DegenerateInputError",
    "DetectionConfig",
    "DetectionResult",
    "DisplacementSignal",
    "EvalReport",
    "FormatError",
    "MotionInterferer",
    "MultipathSpec",
    "ParameterError",
    "ProjectionResult",
    "RadarParams",
    "RadioSoundError",
    "RangeDopplerSpectrogram",
    "RecoverConfig",
    "RecoveredSound",
    "SceneDescription",
    "SoundMetricMap",
    "SPEED_OF_LIGHT",
    "StaticReflector",
    "StftConfig",
    "SynthConfig",
    "TrainingPair",
    "UnsupportedFormatError",
    "VibrationSource",
    "apply_zero_phase",
    "auc",
    "cfar_scores",
    "combine_diversity",
    "degrade",
    "demodulate_phase",
    "detect_cfar",
    "detect_hhi",
    "detect_outlier",
    "detect_radiomic",
    "detect_threshold",
    "doppler_energy",
    "estimate_displacement",
    "evaluate",
    "expand_one_sided",
    "hhi_scores",
    "highpass",
    "istft",
    "LIVENESS_THRESHOLD",
    "liveness_score",
    "llr",
    "load_cir",
    "load_detection",
    "load_scene",
    "load_shard",
    "load_tensor",
    "load_wav",
    "make_pairs",
    "make_rng",
    "noise_floor",
    "one_sided_magnitude",
    "outlier_scores",
    "patch_from_samples",
    "patch_to_magnitude",
    "project_line",
    "range_doppler",
    "realize_fir",
    "recover_bin",
    "resample",
    "resample_array",
    "result_from_json",
    "result_to_json",
    "roc_curve",
    "save_cir",
    "save_tensor",
    "save_wav",
    "separate_sources",
    "simulate",
    "snr_silent",
    "sound_metric",
    "stft",
    "stoi",
    "synthesize_displacement",
    "write_shards",
]
