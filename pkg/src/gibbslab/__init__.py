"""Volumetric resampling laboratory.

Interpolation by convolution on vertex-centered 3D grids, VOI
statistics, Boolean morphology, an analytic head phantom, and numerical
verification of the kernel error bounds.
"""

from .analysis import (
    BorderDssim,
    VoiMeans,
    dssim,
    dssim_at_border,
    gradient_norm,
    gradient_ratio,
    moment,
    rel_err,
    restrict,
    ssim,
    voi_means,
    volume_ratio,
    voxelwise_error,
)
from .errors import GibbsLabError
from .gibbs import (
    BoundReport,
    PiecewiseSignal,
    TrivariateBoundReport,
    continuous,
    convergence_study,
    gibbs_profile,
    heaviside,
    pointwise_bound,
    random_jump_signal,
    verify_pointwise_bound,
    verify_trivariate_bound,
)
from .grid import (
    Fov,
    Grid3,
    LabelVolume,
    ScalarVolume,
    coarse_grid,
    make_grid,
)
from .kernels import (
    Kernel,
    KernelConstants,
    constants,
    eval_omega,
    make_kernel,
    window_weights,
)
from .morphology import (
    CROSS,
    BoolMask,
    StructuringElement,
    dilate,
    erode,
    voi_border,
    volume,
)
from .phantom import (
    SHEPP_LOGAN,
    Ellipsoid,
    PhantomSpec,
    phantom_value,
    sample_phantom,
    segment_phantom,
)
from .resample import (
    ResamplePlan,
    eval_trivariate,
    gaussian_blur,
    interp1d,
    resample_labels_multilabel,
    resample_labels_nearest,
    resample_scalar,
)

__version__ = "0.1.0"
