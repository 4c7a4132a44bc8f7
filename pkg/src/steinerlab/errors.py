"""Exception types raised by design validation and analysis."""


class DesignError(Exception):
    """Base class for all steinerlab errors."""


class TrivialDesign(DesignError):
    """Empty block set, a single all-covering block, or k <= 2."""


class UnequalBlockSize(DesignError):
    """A block has a different size than the rest (or repeated vertices)."""


class RepeatedBlock(DesignError):
    """Two blocks contain the same vertex set."""


class VertexOutOfRange(DesignError):
    """A vertex id falls outside 0..v-1."""


class PairCoverageViolation(DesignError):
    """An unordered vertex pair is covered by != 1 blocks."""

    def __init__(self, pair, count):
        self.pair = tuple(pair)
        self.count = count
        super().__init__(f"pair {self.pair} covered by {count} blocks, expected 1")


class SameVertex(DesignError):
    """A pair lookup was asked for a vertex with itself."""


class ParseError(DesignError):
    """Malformed design file; carries the offending 1-based line number."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NoSubdesigns(DesignError):
    """The design has no nontrivial proper subdesigns."""


class DifferentParent(DesignError):
    """Subdesigns of different parent designs cannot be intersected."""


class NotProper(DesignError):
    """The subdesign is trivial or equals the whole design."""


class NotWellDistributed(DesignError):
    """The operation needs evenly covering minimal subdesigns."""


class BadIntersectionSize(DesignError):
    """A subdesign pair or triple pattern falls outside the allowed sizes;
    signals that the subdesign list is not a minimal family."""


class IdentityViolation(DesignError):
    """A counting identity failed exact comparison."""

    def __init__(self, which, lhs, rhs):
        self.which = which
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"identity {which}: computed {lhs} != expected {rhs}")


class NonIntegerResult(DesignError):
    """A count formula evaluated to a non-integer."""


class PreconditionUnmet(DesignError):
    """A conditional result's hypothesis does not hold on this design."""

    def __init__(self, which):
        self.which = which
        super().__init__(f"precondition unmet: {which}")


class NotSteinerTriple(DesignError):
    """The operation requires block size 3."""


class NotAPermutation(DesignError):
    """The given map is not a bijection of 0..v-1."""


class TableViolation(DesignError):
    """A stable-colouring triangle count disagrees with its closed form."""

    def __init__(self, cls, signature, expected, actual):
        self.cls = cls
        self.signature = signature
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"class {cls}, signature {signature}: expected {expected}, got {actual}"
        )


class GraphTooLarge(DesignError):
    """The pair-colouring table would exceed the supported size."""


class NotPrime(DesignError):
    """Plane constructions require a prime order."""


class SizeMismatch(DesignError):
    """Outer block size does not equal inner vertex count."""
