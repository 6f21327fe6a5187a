"""Exception types shared across the package."""

from __future__ import annotations


class VariantError(Exception):
    """Base class for every error raised by this package."""


class ParseError(VariantError):
    """A line in an input stream is not a well-formed record."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ValidationError(VariantError):
    """Input parsed but violates a data invariant."""


class NonNumericAttributeError(ValidationError):
    """An aggregate constraint hit a value that does not parse as a number."""

    def __init__(self, product_id: str, attribute: str, value: object):
        super().__init__(
            f"attribute {attribute!r} of product {product_id!r} is not numeric: {value!r}"
        )
        self.product_id = product_id
        self.attribute = attribute
