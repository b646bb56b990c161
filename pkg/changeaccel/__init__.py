"""Change acceleration and detection for controlled change-point systems."""

__version__ = "0.1.0"
