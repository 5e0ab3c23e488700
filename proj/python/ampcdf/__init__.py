"""Amplitude-CDF modulation format classifier."""

from ._ampcdf import (
    ClassificationResult,
    DataFormatError,
    DegenerateInputError,
    EmpiricalCdf,
    Format,
    IoError,
    ReferenceBank,
    SweepRow,
    __version__,
    build_reference_bank,
    cdf_distance,
    classification_json,
    classify,
    constellation_points,
    empirical_cdf,
    format_name,
    formats,
    normalized_amplitudes,
    osnr_to_snr,
    parse_format,
    reference_cdf_analytic,
    reference_cdf_mc,
    required_osnr,
    run_sweep,
    simulate_block,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
