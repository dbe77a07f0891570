"""upsilab: arithmetic and dynamical quantities of Siegel disks.

Modified and classical continued fractions over exact backends, Brjuno
sums with rigorous tails, fundamental-interval geometry, linearization
series and conformal-radius estimates for quadratic polynomials, and
empirical verification of the quantitative bounds tying them together
(the 1/2-Hoelder modulus of the error function Upsilon = log r + Y on
high-type rotation numbers).
"""

from .brjuno import BrjunoResult, TailAssumption, brjuno_eval, brjuno_periodic, functional_residual, y_gap
from .cf_engine import (
    ClassicalExpansion,
    McfExpansion,
    McfSymbol,
    classical_expand,
    is_high_type,
    mcf_expand,
    reconstruct,
    sample_classical_high_type,
    sample_high_type,
)
from .errors import UpsilabError
from .holder_lab import (
    HolderReport,
    PairSamplerConfig,
    SumLemmaReport,
    UpsilonConfig,
    beta_diff_check,
    holder_scan,
    limit_at_zero,
    sum_lemma_check,
)
from .intervals import (
    DistortionReport,
    FundInterval,
    SplitReport,
    fundamental_interval,
    length_ratio,
    measure_distortion,
    split_generation,
)
from .numeric_kernel import (
    BigBall,
    PrecisionCtx,
    QuadSurd,
    Rational,
    RealValue,
    SymbolStream,
    d_log,
    format_alpha,
    make_surd,
    nearest_residue,
    parse_alpha,
    refine,
)
from .siegel import (
    LinearizationSeries,
    RadiusEstimate,
    UpsilonSample,
    covering_tau,
    estimate_radius,
    linearize,
    sigma_fixed_point,
    upsilon,
)

__version__ = "0.1.0"
