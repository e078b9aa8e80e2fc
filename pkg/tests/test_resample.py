"""Resampler: tone preservation, anti-aliasing, duration bookkeeping."""

import numpy as np
import pytest

from radiosound import AudioSignal, ParameterError, resample, resample_array


def _tone(freq, rate, duration=1.0):
    t = np.arange(int(round(duration * rate))) / rate
    return np.sin(2 * np.pi * freq * t)


def test_same_rate_is_identity():
    x = _tone(300.0, 6250.0)
    out = resample_array(x, 6250.0, 6250.0)
    np.testing.assert_array_equal(out, x)


def test_tone_amplitude_preserved_downsampling():
    # 300 Hz is far below both Nyquist rates; amplitude must survive 44.1k -> 6.25k
    rate_in, rate_out = 44100.0, 6250.0
    x = _tone(300.0, rate_in)
    y = resample_array(x, rate_in, rate_out)
    # measure amplitude by projection onto quadrature pair (edge-trimmed)
    t = np.arange(y.size) / rate_out
    core = slice(200, y.size - 200)
    c = np.cos(2 * np.pi * 300.0 * t[core])
    s = np.sin(2 * np.pi * 300.0 * t[core])
    amp = 2 * np.hypot(np.dot(y[core], c), np.dot(y[core], s)) / core.stop.__sub__(200)
    assert amp == pytest.approx(1.0, rel=0.01)


def test_alias_band_suppressed():
    # 3.5 kHz lies above the 3.125 kHz output Nyquist: it must not fold back
    rate_in, rate_out = 44100.0, 6250.0
    x = _tone(3500.0, rate_in)
    y = resample_array(x, rate_in, rate_out)
    core = y[200:-200]
    in_power = 0.5  # unit tone
    out_power = float(np.mean(core**2))
    assert 10 * np.log10(out_power / in_power) <= -40.0


def test_duration_within_one_output_sample():
    for rate_in, rate_out, n in ((44100.0, 6250.0, 44100), (6250.0, 10000.0, 9999)):
        x = np.zeros(n)
        y = resample_array(x, rate_in, rate_out)
        assert abs(y.size / rate_out - n / rate_in) <= 1.0 / rate_out


def test_group_delay_compensated():
    # a slow ramp must come out aligned, not shifted by the filter delay
    rate_in, rate_out = 8000.0, 4000.0
    x = np.linspace(0.0, 1.0, 8000)
    y = resample_array(x, rate_in, rate_out)
    t_out = np.arange(y.size) / rate_out
    expected = t_out / (x.size / rate_in)
    core = slice(100, y.size - 100)
    assert np.max(np.abs(y[core] - expected[core])) < 1e-3


def test_audio_signal_wrapper_keeps_label():
    sig = AudioSignal(samples=_tone(100.0, 6250.0), sample_rate=6250.0, label="x")
    out = resample(sig, 10000.0)
    assert out.sample_rate == 10000.0
    assert out.label == "x"


def test_rejects_bad_rates_and_shapes():
    with pytest.raises(ParameterError):
        resample_array(np.zeros(8), 0.0, 100.0)
    with pytest.raises(ParameterError):
        resample_array(np.zeros((2, 4)), 100.0, 200.0)


def test_empty_input_stays_empty():
    assert resample_array(np.zeros(0), 100.0, 200.0).size == 0
