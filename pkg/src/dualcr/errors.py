"""Exception hierarchy shared across the package."""


class DualCRError(Exception):
    """Base class for all package-specific errors."""


class OrderMismatch(DualCRError):
    """Binary jet operation received jets of different truncation orders."""


class NearZeroDenominator(DualCRError):
    """Jet division (or expression evaluation) hit a denominator whose
    constant term is below the configured threshold."""

    def __init__(self, magnitude, where=""):
        self.magnitude = magnitude
        self.where = where
        msg = f"denominator constant term has magnitude {magnitude:.3e}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class DomainError(DualCRError):
    """Elementary function applied to a jet whose constant term lies
    outside the supported domain (e.g. log of a non-positive value)."""


class SingularSystem(DualCRError):
    """Jet-valued linear solve with an (almost) singular constant-term matrix."""

    def __init__(self, condition):
        self.condition = condition
        super().__init__(f"condition estimate {condition:.3e}")


class SurfaceError(DualCRError):
    """Base class for surface validation failures."""


class NotPositive(SurfaceError):
    pass


class NotCircular(SurfaceError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"circularity residual {residual:.3e}")


class NotConvex(SurfaceError):
    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"minimal tangential Hessian eigenvalue {min_eigenvalue:.3e}")


class PointNotOnSurface(SurfaceError):
    pass


class NonRealScalar(DualCRError):
    """A frame scalar that must be real came out with a large imaginary part."""

    def __init__(self, name, imag):
        self.name = name
        self.imag = imag
        super().__init__(f"Im {name} = {imag:.3e}")


class ExpressionSyntaxError(DualCRError):
    def __init__(self, position, expected, found):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"at position {position}: expected {expected}, found {found!r}"
        )


class NotInKernel(DualCRError):
    """Kernel-coefficient extraction applied to a function outside the
    second-order kernel."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"second-order residual {residual:.3e}")


class NotSphere(DualCRError):
    pass


class PathDependence(DualCRError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"path-dependence residual {residual:.3e}")


class NotDecomposable(DualCRError):
    def __init__(self, which, residual):
        self.which = which
        self.residual = residual
        super().__init__(f"membership test {which} failed with residual {residual:.3e}")


class VanishingScale(DualCRError):
    def __init__(self, point, value):
        self.point = point
        self.value = value
        super().__init__(f"rescaling factor {value:.3e} too small at {point}")


class ConfigError(DualCRError):
    def __init__(self, path, field, detail=""):
        self.path = path
        self.field = field
        msg = f"{path}: bad field {field!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
