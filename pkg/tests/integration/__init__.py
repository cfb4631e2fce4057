"""Integration tests for the screenopt command line."""
