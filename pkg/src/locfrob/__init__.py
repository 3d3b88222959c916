"""Locally Frobenius algebras as directed systems of finite-dimensional
symmetric Frobenius stages, with exact verification of their structure."""

__version__ = "0.1.0"
