"""Errors shared by the input-validating constructors and the command line."""


class SchemaError(ValueError):
    """Input data does not have the expected shape."""


class InvariantViolation(ValueError):
    """Input data is well-formed but breaks a mathematical identity."""
