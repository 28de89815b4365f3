"""Exception types shared across the package."""


class MnvError(Exception):
    """Base class for all package errors."""


class DegenerateMatrix(MnvError):
    """Matrix determinant at or below the degeneracy threshold."""


class BranchPoint(MnvError):
    """Spinor norm vanished: the immersion is degenerate at this point."""


class BlowUpPoint(MnvError):
    """Field evaluation requested at the blow-up point itself."""


class SingularFrame(MnvError):
    """The spinor frame matrix is not invertible where an inverse is needed."""


class StencilCollision(MnvError):
    """A finite-difference stencil would touch the blow-up point."""


class QuadratureFailure(MnvError):
    """An adaptive quadrature could not reach the requested tolerance."""


class ToleranceNotMet(MnvError):
    """The panel budget was exhausted before reaching the tolerance."""
