"""Behavioral simulator and codec for an analog-domain MJPEG encoder.

The heavy lifting lives in the compiled extension module ``_dajc``; this
package re-exports its public surface.
"""

from ._dajc import (  # noqa: F401
    CalibrationError,
    ConfigError,
    FormatError,
    IoError,
    __version__,
    calibrate,
    comm_power,
    dct2,
    dct_basis,
    decode,
    dequantize,
    encode,
    ideal_inverse_q,
    idct2,
    input_referred_noise,
    inverse_zigzag,
    psnr,
    q50,
    quality_report,
    quantize,
    run_block,
    ssim,
    zigzag,
    zigzag_order,
)

__all__ = [
    "CalibrationError",
    "ConfigError",
    "FormatError",
    "IoError",
    "__version__",
    "calibrate",
    "comm_power",
    "dct2",
    "dct_basis",
    "decode",
    "dequantize",
    "encode",
    "ideal_inverse_q",
    "idct2",
    "input_referred_noise",
    "inverse_zigzag",
    "psnr",
    "q50",
    "quality_report",
    "quantize",
    "run_block",
    "ssim",
    "zigzag",
    "zigzag_order",
]
