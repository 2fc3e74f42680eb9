class ImBesselError(RuntimeError):
    pass


class DomainError(ImBesselError, ValueError):
    """Argument outside the half-plane (or interval) an operation supports."""

    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class RegionError(ImBesselError):
    """Point inside the neighbourhood of z=1 excluded from the LG expansions."""

    def __init__(self, z, radius) -> None:
        super().__init__(f"z={z} lies within {radius} of the turning point")
        self.z = z


class TurningPointError(ImBesselError):
    def __init__(self, what: str) -> None:
        super().__init__(f"{what} is singular at the turning point z=1")


class DegenerateFrameError(ImBesselError, ArithmeticError):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class TableRangeError(ImBesselError, IndexError):
    def __init__(self, what: str, s: int, limit: int) -> None:
        super().__init__(f"{what}: order {s} is beyond the loaded limit {limit}")
        self.s = s
        self.limit = limit


class KappaTableParseError(ImBesselError, ValueError):
    def __init__(self, line_no: int, msg: str) -> None:
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


class ParityError(ImBesselError, ArithmeticError):
    """An exact identity (parity, cancellation of poles) did not hold."""

    def __init__(self, msg: str) -> None:
        super().__init__(msg)


class PoleError(ImBesselError, ValueError):
    def __init__(self, w) -> None:
        super().__init__(f"gamma has a pole at {w}")


class PrecisionBudgetError(ImBesselError):
    def __init__(self, needed: int, allowed: int) -> None:
        super().__init__(
            f"request needs {needed} padding digits, budget is {allowed}"
        )
        self.needed = needed


class QuadratureError(ImBesselError):
    def __init__(self, error, tolerance) -> None:
        super().__init__(f"quadrature error estimate {error} exceeds {tolerance}")


class ConfigError(ImBesselError, ValueError):
    def __init__(self, msg: str) -> None:
        super().__init__(msg)
