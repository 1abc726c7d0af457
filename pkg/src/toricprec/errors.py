"""Exception types shared across the package."""


class ToricPrecError(Exception):
    pass


class PolytopeError(ToricPrecError, ValueError):
    pass


class Unbounded(PolytopeError):
    pass


class NotFullDimensional(PolytopeError):
    pass


class RedundantFacet(PolytopeError):
    def __init__(self, index: int, reason: str = "redundant or non-supporting"):
        self.index = index
        super().__init__(f"facet {index} is {reason}")


class ZeroDenominator(ToricPrecError, ZeroDivisionError):
    pass


class ZeroSum(ToricPrecError, ZeroDivisionError):
    pass


class NotSLP(ToricPrecError, ValueError):
    pass


class NotInterior(ToricPrecError, ValueError):
    pass


class NoConvergence(ToricPrecError, RuntimeError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")


class NormalSumNonzero(ToricPrecError, ValueError):
    pass


class NonHorn(ToricPrecError, ValueError):
    pass


class IrrationalAdjustment(ToricPrecError, ValueError):
    pass


class PoleAtInput(ToricPrecError, ZeroDivisionError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"linear form of Horn row {row} vanishes at the input")
