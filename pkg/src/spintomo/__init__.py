"""Spin tomography: tomograms, quantizer/dequantizer pairs, reconstruction and
star-product kernels for qudits of spin j."""
from .errors import (
    ConvergenceError,
    DimensionError,
    GridMismatchError,
    LabelError,
    NotHermitianError,
    ReconstructionError,
    SingularityError,
    TomographyError,
)
from .kernels import (
    AxisVector,
    axis_vector,
    delta_kernel_numeric,
    delta_kernel_qubit,
    delta_kernel_qutrit,
    dual_kernel_numeric,
    dual_kernel_qubit,
    dual_kernel_qutrit,
    dual_symbol,
    marginalize_kernel,
    star_kernel_numeric,
    star_kernel_qubit,
    star_kernel_qutrit,
    star_product,
    symbol,
)
from .matrix import DensityMatrix, eigvals_hermitian
from .spin_operators import SLBasis, sl_basis, tensor_operator
from .su2 import EulerAngles, HalfInt, clebsch_gordan, wigner_D, wigner_small_d
from .tomography import (
    QuadratureGrid,
    Tomogram,
    TomographyPoint,
    asymptotic_tomogram,
    dequantizer,
    dequantizer_exponential,
    dequantizer_from_quantizer,
    make_grid,
    pure_state_tomogram,
    quantizer,
    quantizer_exponential,
    quantizer_from_dequantizer,
    reconstruct,
    sample_tomogram,
    shift_matrices,
    tomogram_value,
)

__version__ = "0.1.0"
