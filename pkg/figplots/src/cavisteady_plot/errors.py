class MissingColumn(KeyError):
    """The CSV lacks a column the plot needs."""


class EmptySeries(ValueError):
    """No plottable rows for any requested method."""
