"""screenopt: optimal screening designs under the D and A families of criteria."""

__version__ = "0.1.0"
