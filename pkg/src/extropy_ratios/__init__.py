"""Extropy-based generalized divergence ratios and similarity ratios.

Exact (quadrature) values for parametric distributions, nonparametric
estimates from samples, Monte Carlo studies and exposure-invariant image
similarity.
"""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    Beta,
    Exponential,
    ParametricDistribution,
    Power,
    SampleData,
    Uniform,
    cdf_at,
    hazard_at,
    parse_distribution,
    pdf_at,
    phm_transform,
    prhm_transform,
    reversed_hazard_at,
    sample,
    sf_at,
)
from .errors import (  # noqa: E402
    AmbiguousAnchorsError,
    DegenerateInputError,
    DivergentMeasureError,
    DomainError,
    ExtropyError,
    ImageFormatError,
    KindMismatchError,
    QuadratureError,
)
from .estimators import (  # noqa: E402
    KDEConfig,
    empirical_cdf,
    empirical_sf,
    estimate_divergence_ratios,
    estimate_similarity,
    estimate_similarity_CE,
    estimate_similarity_E,
    estimate_similarity_SE,
    kde_density,
    silverman_bandwidth,
)
from .functions import Kind, ProbabilityFunction  # noqa: E402
from .measures import (  # noqa: E402
    SimilarityReport,
    cosine_angle,
    divergence_ratio,
    exponential_similarity_closed_form,
    extropy_divergence,
    generalized_extropy,
    generalized_inaccuracy,
    relative_extropy,
    scaled_copy_similarity,
    similarity_ratio,
    similarity_report,
    survival_extropy_divergence,
)
from .quadrature import QuadratureConfig  # noqa: E402
