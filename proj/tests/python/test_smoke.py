import math
import os
from itertools import zip_longest

import pytest

import tspkit

SCRATCH = "py_scratch"


def small_spec(seed):
    s = tspkit.CapricepSpec()
    s.fft_length = 2048
    s.n_sections = 20
    s.gd_sigma_samples = 8.0
    s.gd_magnitude_samples = 40.0
    s.effective_length = 1024
    s.seed = seed
    return s


def rel_err_db(a, b):
    num = sum((x - y) ** 2 for x, y in zip_longest(a, b, fillvalue=0.0))
    den = sum(y * y for y in b)
    if num == 0.0:
        return -999.0
    return 10.0 * math.log10(num / den)


def test_version():
    assert isinstance(tspkit.__version__, str) and tspkit.__version__


def test_mls():
    sig = tspkit.gen_mls(10, 48000)
    assert len(sig) == 1023
    assert sig.sample_rate_hz == 48000
    assert all(v in (-1.0, 1.0) for v in sig.samples)
    assert abs(sum(sig.samples)) == 1.0


def test_calibration_tone_rms():
    sig = tspkit.gen_calibration_tone(1000.0, -20.0, 0.1, 16000)
    rms = math.sqrt(sum(v * v for v in sig.samples) / len(sig))
    assert rms == pytest.approx(0.1, rel=1e-9)


def test_swept_sine():
    sig = tspkit.gen_swept_sine(100.0, 1000.0, 0.1, law="linear", sample_rate_hz=44100)
    assert len(sig) == 4410
    assert max(abs(v) for v in sig.samples) <= 1.0


def test_capricep_unit():
    signal, truncated = tspkit.gen_unit_capricep(small_spec(1), 16000)
    assert len(signal) == 1024
    assert max(abs(v) for v in signal.samples) == 1.0
    assert 0.0 <= truncated < 0.05


def test_walsh_hadamard():
    h = tspkit.walsh_hadamard(4)
    for i in range(4):
        for j in range(4):
            dot = sum(h[i][k] * h[j][k] for k in range(4))
            assert dot == (4 if i == j else 0)


@pytest.fixture(scope="module")
def measured():
    units = [tspkit.gen_unit_capricep(small_spec(s), 16000)[0] for s in (1, 2)]
    structured = tspkit.compose_structured(units, 4096, 3)

    room = tspkit.RoomIrSpec()
    room.direct_delay_s = 0.005
    room.direct_gain = 0.7
    room.t60_s = 0.15
    room.tail_gain = 0.1
    room.tail_onset_s = 0.002
    room.length_s = 0.15
    room.seed = 4
    ir = tspkit.synth_room_ir(room, 16000)

    recording = tspkit.apply_channel(structured.waveform, ir.samples)
    grid = tspkit.recover_channels(structured, recording, tspkit.SafeguardConfig())
    return structured, ir, grid, tspkit.decompose(grid)


def test_pipeline_recovers_the_room(measured):
    structured, ir, grid, d = measured
    assert structured.normalization_gain > 0
    assert grid.units == 2
    assert grid.repetitions == 2
    assert rel_err_db(d.lti_ir.samples, ir.samples) < -80.0
    levels = d.levels_db
    assert levels["lti_db"] > -10.0
    assert levels["rtv_db"] < -100.0
    assert levels["sdti_db"] < -100.0


def test_alignment(measured):
    structured, _, _, _ = measured
    shifted = tspkit.SampledSignal([0.0] * 100 + list(structured.waveform.samples), 16000)
    offset, confidence = tspkit.align_to_stimulus(shifted, structured)
    assert offset == 100
    assert confidence >= 4.0


def test_analyze_and_classify(measured):
    _, _, _, d = measured
    report = tspkit.analyze_report(
        d, bands="octave", f_min_hz=200.0, f_max_hz=4000.0, source_distance_m=0.5
    )
    assert report["type"] == "report"
    acoustics = report["acoustics"]
    assert acoustics["band_snr_db"]
    full = [r for r in acoustics["rt_seconds"] if r["band"] == "full"]
    assert full and full[0]["t30_s"] == pytest.approx(0.15, rel=0.2)
    assert "reverberation_radius_m" in acoustics
    assert isinstance(acoustics["placement_ok"], bool)

    result = tspkit.classify(
        report, spl="precise", annotations="detailed", background=True
    )
    assert 1 <= result["class_label"] <= 4
    assert result["reusability_note"]

    assert tspkit.classify(None, field_test_signal=True)["class_label"] == 4
    with pytest.raises(ValueError):
        tspkit.classify(None)


def test_wav_round_trip():
    os.makedirs(SCRATCH, exist_ok=True)
    path = os.path.join(SCRATCH, "smoke.wav")
    sig = tspkit.SampledSignal([0.5, -0.25, 0.125, 0.0], 44100)
    tspkit.write_wav(path, sig, format="float32")
    back, warning = tspkit.read_wav(path)
    assert warning == ""
    assert back.sample_rate_hz == 44100
    assert list(back.samples) == list(sig.samples)


def test_error_mapping():
    os.makedirs(SCRATCH, exist_ok=True)
    with pytest.raises(ValueError):
        tspkit.gen_mls(99)
    with pytest.raises(ValueError):
        tspkit.write_wav(os.path.join(SCRATCH, "bad.wav"), tspkit.SampledSignal([0.0], 0))
