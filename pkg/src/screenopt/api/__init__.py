"""Command-line surface and file document schemas."""
