"""Exception types shared across the package."""


class FinspacesError(Exception):
    pass


class NotLocalizationPresented(FinspacesError):
    """A faithful-flatness question was asked of a map that is not presented
    as a localization; the check is refused, never guessed."""


class SectionsNotPresented(FinspacesError):
    """A finite presentation of a section ring was demanded but none is
    available (no minimum point, no user witness)."""


class UngradedModule(FinspacesError):
    """A graded computation was asked of ungraded data."""


class DegreeBoundExceeded(FinspacesError):
    """A bounded radical computation could not certify its answer."""


class InfiniteDimension(FinspacesError):
    """A graded piece needed by an exact computation is provably
    infinite-dimensional over the base field."""


class NotInvertible(FinspacesError):
    """Roof inversion needs the right leg to be a quasi-isomorphism."""


class NotOpen(FinspacesError):
    """A point set that should be upward-closed is not."""
