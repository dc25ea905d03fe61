"""framesmith: exact construction and verification of normalized-tight-frame
wavelet families in the Fourier domain.

Frequencies are rationals in units of pi (the translation lattice is the even
integers, integer dilation is plain multiplication), which keeps the whole
construction pipeline closed over exact arithmetic; square roots stay
symbolic and comparisons go through outward-rounded intervals.
"""

__version__ = "0.1.0"

from .intervals import IntervalSet
from .piecewise import PiecewiseLinear, SqrtProfile
from .folding import FoldedMultiplicity, layered_partition, per_multiplicity
from .construction import (
    AdmissibilityReport,
    ScalingFamily,
    SpectralSpec,
    WaveletFamily,
    admissibility_check,
    build_family,
    build_scaling,
    build_wavelets,
    classify_waveletset_seed,
    example_by_name,
    waveletset_closure,
    waveletset_sigma,
)
from .sequences import CRat, Sequence, coset_op, coset_op_adj
from .trace import (
    GeneratorSet,
    WindowOperator,
    dilation_trace_check,
    dimension_function,
    fiber,
    ntf_generator_test,
    operator_trace,
    restricted_trace,
    series_identity_check,
    spectral_function,
    trace_split_check,
)
from .verification import (
    VerificationReport,
    check_decay,
    check_density,
    check_ntf_multiwavelet,
    check_semiorthogonal,
    check_split,
    check_sufficiency,
    check_wavelet_set_tiling,
)
from .frametest import TestSignal, coefficient, frame_energy

__all__ = [name for name in dir() if not name.startswith("_")]
