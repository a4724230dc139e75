"""Exception types raised across the package."""


class SparsePHError(ValueError):
    """Base class for all domain errors."""


class ParseError(SparsePHError):
    def __init__(self, row, col, cell):
        self.row = row
        self.col = col
        self.cell = cell
        super().__init__(f"cannot parse cell {cell!r} at row {row}, column {col} as a finite real")


class RaggedRowsError(SparsePHError):
    def __init__(self, row, expected, got):
        self.row = row
        super().__init__(f"row {row} has {got} cells, expected {expected}")


class ZeroVarianceError(SparsePHError):
    def __init__(self, column, label=None):
        self.column = column
        self.label = label
        name = f"{column}" if label is None else f"{column} ({label})"
        super().__init__(f"column {name} is constant (zero variance)")


class NegativeLambdaError(SparsePHError):
    pass


class DomainTooSmallError(SparsePHError):
    pass


class NotATreeError(SparsePHError):
    pass


class GroupTooSmallError(SparsePHError):
    pass


class EmptySampleError(SparsePHError):
    pass


class NodeCountMismatchError(SparsePHError):
    pass


class InvalidConfigError(SparsePHError):
    pass
