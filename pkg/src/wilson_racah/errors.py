"""Exception hierarchy shared by every module of the package."""


class WilsonRacahError(Exception):
    """Base class for all errors raised by :mod:`wilson_racah`."""


class ParamError(WilsonRacahError, ValueError):
    """Parameters make a formula singular or violate a stated bound."""


class ConstraintError(ParamError):
    """A parameter inequality is violated; the message names it."""


class RegimeError(ParamError):
    """Operation requested in a parameter regime where it is undefined."""


class DomainError(WilsonRacahError, ValueError):
    """Input lies outside the domain of an energy map or basis."""


class PoleError(WilsonRacahError, ArithmeticError):
    """Gamma function evaluated at (or within 1e-14 of) a pole."""


class DegenerateRecursionError(WilsonRacahError, ArithmeticError):
    """A three-term recursion coefficient denominator vanishes."""


class QuadratureError(WilsonRacahError, ArithmeticError):
    """Requested quadrature tolerance was not reached."""


class ConvergenceError(WilsonRacahError, ArithmeticError):
    """A hypergeometric series failed to converge."""


class FitDegenerateError(WilsonRacahError, ArithmeticError):
    """Least-squares design matrix is numerically rank deficient."""
