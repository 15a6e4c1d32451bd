"""Range-based lateration: the Min-Max family, NLLS and maximum-likelihood
estimators, error-model calibration, spatial error maps and trace metrics."""

from .calibration import (Calibration, ErrorSample, ErrorStats, calibrate, calibrate_mf,
                          error_stats, fit_gamma, fit_normal, nearest_rank)
from .error_models import (GammaErrorModel, MixtureErrorModel, NormalErrorModel, gamma_pdf,
                           normal_logpdf, sample_range, sample_ranges)
from .geometry import AnchorObservation, ObservationSet, Point2D, distance
from .likelihood import mle_gamma, mle_normal, nlls
from .locators import ALGORITHMS, Locator, make_locator
from .minmax import (Estimate, IntersectionRegion, Status, TriangularMF, Weighting,
                     degree_weight, e_min_max, intersection_region, md_min_max, membership,
                     min_max, running_mean_var)
from .solver import SolverConfig, minimize
from .spatial import (ColorGrid, DiffGrid, Scenario, SpatialErrorGrid, classify, diff,
                      render, sweep)
from .traces import (Metrics, TraceFix, boxplot_stats, evaluate, load_trace, save_trace)

__version__ = "0.1.0"
