"""
gabortorus - Gabor analysis over lattices and noncommutative tori

Time-frequency shifts on Z_L and on sampled R^N, Gabor frames and their
duality identities, the twisted group algebras of a lattice and its adjoint,
and quantum theta functions built from generalized Gaussians.

Usage:
    from gabortorus import ModelOrder, SeparableLattice, GaborSystem, frame_report
    from gabortorus.theta import SiegelMatrix, gaussian_window

    model = ModelOrder.finite(12)
    window = gaussian_window(SiegelMatrix.scalar(3.14159), model)
    report = frame_report(GaborSystem(window, SeparableLattice(model, 2, 2)))
"""

__version__ = "0.1.0"

from .errors import GaborTorusError
from .gabor import FrameBounds, FrameReport, GaborSystem, frame_bounds, frame_report, janssen_operator
from .nctorus import TwistedSequence, involution, twisted_convolution
from .phase_space import ModelOrder, SeparableLattice, Signal, TFPoint, adjoint_lattice, tf_shift
from .theta import QuantumTheta, SiegelMatrix, quantum_theta, theta_series
from .transforms import TFMatrix, cross_wigner, stft

__all__ = [
    "GaborTorusError",
    # Phase space
    "ModelOrder",
    "SeparableLattice",
    "Signal",
    "TFPoint",
    "adjoint_lattice",
    "tf_shift",
    # Transforms
    "TFMatrix",
    "stft",
    "cross_wigner",
    # Gabor systems
    "GaborSystem",
    "FrameBounds",
    "FrameReport",
    "frame_bounds",
    "frame_report",
    "janssen_operator",
    # Algebras
    "TwistedSequence",
    "twisted_convolution",
    "involution",
    # Thetas
    "SiegelMatrix",
    "QuantumTheta",
    "quantum_theta",
    "theta_series",
]
