"""Exception hierarchy shared by all g2ell modules."""


class G2EllError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameters(G2EllError):
    """Curve or run parameters violate a stated constraint."""


class NonConvergence(G2EllError):
    """An iterative numerical procedure exhausted its refinement budget."""


class SingularSample(G2EllError):
    """An integrand evaluated to NaN or infinity at a quadrature node."""


class DegenerateLattice(G2EllError):
    """Lattice columns do not span C^g over the reals."""


class NearDegenerateBranchPoints(G2EllError):
    """Two branch points are too close for reliable quadrature."""


class CalibrationFailure(G2EllError):
    """The sigma normalization constant did not stabilize."""


class OnThetaDivisor(G2EllError):
    """Requested value at a point where sigma vanishes to working precision."""


class OnLattice(G2EllError):
    """Requested an elliptic-function value at (or too close to) a lattice point."""


class DenominatorVanishes(G2EllError):
    """A closed-form rational expression hit a vanishing denominator."""


class BranchCollision(G2EllError):
    """Divisor inversion produced two coincident x-coordinates."""


class PoleOfSn(G2EllError):
    """Jacobi elliptic function evaluated at a pole."""
