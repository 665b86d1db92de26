"""Blind transmission over unknown FIR channels with Huffman sequences."""

from ._huffcomm import (
    ConfigError,
    DimensionError,
    DomainError,
    HuffmanParams,
    NumericalFailure,
    __version__,
    add_awgn,
    apply_adjoint,
    apply_operator,
    autocorr_template,
    conj_reverse,
    convolve,
    correlate,
    decode,
    derive_seed,
    encode,
    make_params,
    papr_db,
    random_channel,
    recover_frame,
    run_trial,
    simulate,
    transmit,
    worst_case_papr,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
