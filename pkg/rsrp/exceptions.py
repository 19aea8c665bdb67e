# encoding: utf-8
"""
Exception hierarchy.

InputError subclasses describe bad user inputs (files, configs) and map to
CLI exit code 2. EstimationError subclasses describe violated numerical
preconditions inside the library.
"""


class RsrpOracleError(Exception):
    pass


# -----------------------------------------------------------------------------
# input errors
# -----------------------------------------------------------------------------
class InputError(RsrpOracleError):
    pass


class SchemaMismatch(InputError):
    def __init__(self, path, expected, found):
        self.path = path
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__("{}: expected header {} but found {}".format(
            path, ",".join(self.expected), ",".join(self.found)))


class MalformedRow(InputError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        self.reason = reason
        super().__init__("malformed row at line {}: {}".format(line_no, reason).rstrip(": "))


class OutOfRange(InputError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        self.reason = reason
        super().__init__("value out of range at line {}: {}".format(line_no, reason).rstrip(": "))


class DuplicateCellId(InputError):
    def __init__(self, cell_id):
        self.cell_id = cell_id
        super().__init__("duplicate cell id '{}'".format(cell_id))


class UnknownCell(InputError):
    def __init__(self, cell_id):
        self.cell_id = cell_id
        super().__init__("serving cell '{}' has no site record".format(cell_id))


class EmptyDataset(InputError):
    pass


class ConfigError(InputError):
    pass


class RouteTooShort(ConfigError):
    pass


# -----------------------------------------------------------------------------
# estimation errors
# -----------------------------------------------------------------------------
class EstimationError(RsrpOracleError):
    pass


class DistanceBelowReference(EstimationError):
    def __init__(self, distance_m):
        self.distance_m = distance_m
        super().__init__("distance {} m is below the 1 m reference distance".format(distance_m))


class TooFewPoints(EstimationError):
    pass


class WeightLengthMismatch(EstimationError):
    pass


class SingularNormalMatrix(EstimationError):
    pass


class EmptyDiffs(EstimationError):
    pass


class InvalidAlpha(EstimationError):
    pass


class TooFewSamples(EstimationError):
    pass


class EmptyInput(EstimationError):
    pass


# -----------------------------------------------------------------------------
# results
# -----------------------------------------------------------------------------
class InsufficientResult(RsrpOracleError):
    """
    A command ran but produced nothing usable (empty prediction, too few
    difference pairs). Outputs are still written; the CLI exits with 3.
    """
    pass
