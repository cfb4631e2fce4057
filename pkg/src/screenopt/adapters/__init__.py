"""File-backed adapters: design and model files, reports, and the bundled design catalog."""
