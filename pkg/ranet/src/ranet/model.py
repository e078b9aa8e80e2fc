"""Spectrogram-to-spectrogram enhancement network.

An encoder of strided 3x3 convolutions with kernel counts doubling per
block, a stack of residual blocks at the bottleneck (each double
convolution summed with its input), and a mirror-symmetric transposed
convolution decoder whose kernel counts halve back to a single plane.
Encoder activations feed the decoder through additive skip connections
at matching resolutions; addition keeps the decoder kernel counts an
exact mirror of the encoder.  Activations are ReLU throughout and the
final layer is linear.  The network works in the log1p magnitude
domain; :meth:`Ranet.magnitude` folds in the inverse mapping and the
non-negativity clamp used at inference.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

import torch
from torch import nn

from .errors import ParameterError


@dataclass(frozen=True)
class RanetSpec:
    """Patch geometry and block counts.

    Defaults reduce a 128x128 patch to a 16x16 bottleneck over three
    downsampling blocks (kernel counts 32, 64, 128).  Block counts are
    configurable; depth beyond the published kernel progression is a
    free choice.
    """

    rows: int = 128
    frames: int = 128
    base_kernels: int = 32
    down_blocks: int = 3
    residual_blocks: int = 3

    def __post_init__(self) -> None:
        if self.base_kernels < 1:
            raise ParameterError("base_kernels must be >= 1")
        if self.down_blocks < 1:
            raise ParameterError("need at least one downsampling block")
        if self.residual_blocks < 0:
            raise ParameterError("residual_blocks must be >= 0")
        step = 2**self.down_blocks
        if self.rows < step or self.rows % step or self.frames < step or self.frames % step:
            raise ParameterError("patch size must be divisible by 2**down_blocks")

    @property
    def kernel_counts(self) -> tuple[int, ...]:
        return tuple(self.base_kernels * 2**i for i in range(self.down_blocks))

    def digest(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


class _Residual(nn.Module):
    """Double convolution whose output is summed with its input."""

    def __init__(self, channels: int) -> None:
        super().__init__()
        self.conv1 = nn.Conv2d(channels, channels, 3, padding=1)
        self.conv2 = nn.Conv2d(channels, channels, 3, padding=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return torch.relu(x + self.conv2(torch.relu(self.conv1(x))))


class Ranet(nn.Module):
    def __init__(self, spec: RanetSpec | None = None) -> None:
        super().__init__()
        self.spec = spec or RanetSpec()
        counts = self.spec.kernel_counts
        downs = []
        prev = 1
        for out in counts:
            downs.append(nn.Conv2d(prev, out, 3, stride=2, padding=1))
            prev = out
        self.downs = nn.ModuleList(downs)
        self.residual = nn.ModuleList(
            _Residual(prev) for _ in range(self.spec.residual_blocks)
        )
        ups = []
        for out in list(counts[-2::-1]) + [1]:
            ups.append(
                nn.ConvTranspose2d(prev, out, 3, stride=2, padding=1, output_padding=1)
            )
            prev = out
        self.ups = nn.ModuleList(ups)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """Map [batch, 1, rows, frames] log1p patches to the same shape."""
        if x.ndim != 4 or x.shape[1:] != (1, self.spec.rows, self.spec.frames):
            raise ParameterError(
                f"expected input [batch, 1, {self.spec.rows}, {self.spec.frames}]"
            )
        skips = []
        h = x
        for down in self.downs:
            h = torch.relu(down(h))
            skips.append(h)
        for block in self.residual:
            h = block(h)
        # the deepest encoder level feeds the residual stack, not a skip
        for up, skip in zip(self.ups[:-1], skips[-2::-1]):
            h = torch.relu(up(h) + skip)
        return self.ups[-1](h)

    def magnitude(self, x: torch.Tensor) -> torch.Tensor:
        """Inference mapping: invert log1p, clamp at zero."""
        return torch.expm1(self.forward(x)).clamp(min=0.0)


__all__ = ["RanetSpec", "Ranet"]
