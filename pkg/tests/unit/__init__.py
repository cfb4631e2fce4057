"""Unit tests for the screenopt numerical core, adapters and services."""
