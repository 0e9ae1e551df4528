class PowDiagError(Exception):
    pass


class DimensionError(PowDiagError, ValueError):
    """A point or vector has the wrong number of coordinates."""


class DegenerateError(PowDiagError, ValueError):
    """Input is degenerate for the requested operation."""


class DisappearingVertexError(PowDiagError):
    """Refusal: some sites have empty power cells.

    The Morse construction assumes every site keeps a cell; callers must
    drop these sites explicitly.
    """

    def __init__(self, indices):
        self.indices = tuple(sorted(indices))
        msg = ", ".join(
            f"disappearing vertex {i}: lifted point in epigraph of the Legendre transform"
            for i in self.indices
        )
        super().__init__(msg)


class FillError(PowDiagError):
    """The greedy collapse could not match an Up set completely."""
