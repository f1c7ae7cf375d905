"""Acoustic modem toolkit: move small payloads over audible sound.

Thin wrapper over the C++ core. Audio is exchanged as 1-d float64 numpy
arrays in [-1, 1] plus an integer sample rate, matching the WAV files the
``dv`` command line tool reads and writes.
"""

from ._core import (
    DecodeError,
    Error,
    FrameError,
    SyncError,
    apply_channel,
    awgn,
    carries_bytes,
    classify_audio,
    classify_scheme,
    compressed_url_bits,
    data_rate,
    decode_bytes,
    decode_text,
    encode_bytes,
    encode_text,
    phoneme_rate,
    read_wav,
    sentence_stats,
    sweep_ber,
    voice_names,
    write_wav,
)

__all__ = [
    "Error",
    "SyncError",
    "FrameError",
    "DecodeError",
    "voice_names",
    "carries_bytes",
    "data_rate",
    "encode_bytes",
    "decode_bytes",
    "encode_text",
    "decode_text",
    "read_wav",
    "write_wav",
    "apply_channel",
    "awgn",
    "sweep_ber",
    "phoneme_rate",
    "classify_scheme",
    "classify_audio",
    "compressed_url_bits",
    "sentence_stats",
]

__version__ = "1.0.0"
