"""Test suite for screenopt."""
